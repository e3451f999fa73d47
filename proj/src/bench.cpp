#include "mgpkit/bench.hpp"

#include <json.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "mgpkit/compress.hpp"

namespace mgpkit {

namespace {
#include "bench_texts.inc"

constexpr const char* kByHand = "worked by hand from the action listing";
constexpr const char* kByOracle = "independent brute-force search";
constexpr const char* kMeasured = "measured with this build's compressor";

BenchCase make_case(std::string name, std::string world_file, const char* world, std::string problem_file,
                    const char* problem, MgpStatus expected) {
  BenchCase c;
  c.name = std::move(name);
  c.world_file = std::move(world_file);
  c.problem_file = std::move(problem_file);
  c.world_doc = {world, c.world_file};
  c.problem_doc = {problem, c.problem_file};
  c.expected = expected;
  return c;
}

}  // namespace

BenchCase build_block_towel(BlockTowelVariant v) {
  if (v == BlockTowelVariant::Baseline) {
    BenchCase c = make_case("block_towel_baseline", "block_towel.world", kBlockTowelWorld,
                            "block_towel_baseline.problem", kBlockTowelBaseline, MgpStatus::SolvableInSubdomain);
    c.golden["plan_length"] = {5, kByHand};
    c.golden["subdomain_states"] = {145, kByOracle};
    c.golden["world_states"] = {145, kByOracle};
    c.notes.push_back("the locationOf function is left out; at(o,l) already carries it");
    return c;
  }
  BenchCase c = make_case("block_towel_notouch", "block_towel.world", kBlockTowelWorld,
                          "block_towel_notouch.problem", kBlockTowelNoTouch, MgpStatus::Mgp);
  c.golden["subdomain_states"] = {22, kByOracle};
  c.golden["world_states"] = {66, kByOracle};
  c.golden["min_delta_size"] = {1, kByOracle};
  c.golden["extended_plan_length"] = {2, kByOracle};
  c.golden["m_number_bits"] = {808, kMeasured};
  c.notes.push_back("push alone suffices; covered is an inert distractor");
  return c;
}

BenchCase build_screwdriver(ScrewdriverVariant v) {
  switch (v) {
    case ScrewdriverVariant::MissingTool: {
      BenchCase c = make_case("screwdriver_missing", "screwdriver.world", kScrewdriverWorld,
                              "screwdriver_missing.problem", kScrewdriverMissing, MgpStatus::Mgp);
      c.golden["subdomain_states"] = {1808, kByOracle};
      c.golden["min_delta_size"] = {1, kByOracle};
      c.golden["extended_plan_length"] = {3, kByOracle};
      c.golden["m_number_bits"] = {1056, kMeasured};
      c.notes.push_back("grabWith(t) is unary as in the relation list; grab(t,f) keeps its two parameters");
      return c;
    }
    case ScrewdriverVariant::ToolAvailable: {
      BenchCase c = make_case("screwdriver_available", "screwdriver.world", kScrewdriverWorld,
                              "screwdriver_available.problem", kScrewdriverAvailable, MgpStatus::SolvableInSubdomain);
      c.golden["plan_length"] = {3, kByHand};
      return c;
    }
    case ScrewdriverVariant::Recessed: {
      BenchCase c = make_case("screwdriver_recessed", "screwdriver_recessed.world", kScrewdriverRecessedWorld,
                              "screwdriver_recessed.problem", kScrewdriverRecessed, MgpStatus::Mgp);
      c.golden["subdomain_states"] = {16576, kByOracle};
      c.golden["min_delta_size"] = {2, kByOracle};
      c.golden["extended_plan_length"] = {6, kByOracle};
      c.golden["m_number_bits"] = {1336, kMeasured};
      c.notes.push_back("useAssembly and the never-constraint on (isCoupled plier screw) are additions of this corpus");
      return c;
    }
  }
  throw Error(ErrorKind::Argument, "unknown screwdriver variant");
}

std::vector<BenchCase> corpus_cases() {
  return {build_block_towel(BlockTowelVariant::Baseline), build_block_towel(BlockTowelVariant::NoTouch),
          build_screwdriver(ScrewdriverVariant::MissingTool), build_screwdriver(ScrewdriverVariant::ToolAvailable),
          build_screwdriver(ScrewdriverVariant::Recessed)};
}

LoadedCase load_case(const BenchCase& c) {
  auto w = parse_world(c.world_doc);
  if (!w.ok())
    throw Error(ErrorKind::Input, w.diagnostics.empty() ? "world failed to parse"
                                                        : w.diagnostics.front().format(c.world_doc.origin));
  auto p = parse_problem(c.problem_doc, *w.value);
  if (!p.ok())
    throw Error(ErrorKind::Input, p.diagnostics.empty() ? "problem failed to parse"
                                                        : p.diagnostics.front().format(c.problem_doc.origin));
  return {*w.value, std::move(*p.value)};
}

std::map<std::string, std::string> corpus_files() {
  std::map<std::string, std::string> files;
  nlohmann::ordered_json manifest;
  manifest["format"] = 1;
  manifest["compressor"] = compressor_identity();
  manifest["cases"] = nlohmann::ordered_json::array();
  for (const auto& c : corpus_cases()) {
    files[c.world_file] = c.world_doc.text;
    files[c.problem_file] = c.problem_doc.text;
    nlohmann::ordered_json entry;
    entry["name"] = c.name;
    entry["world"] = c.world_file;
    entry["problem"] = c.problem_file;
    entry["expected_status"] = c.expected ? to_string(*c.expected) : "";
    nlohmann::ordered_json golden = nlohmann::ordered_json::object();
    for (const auto& [k, g] : c.golden) golden[k] = {{"value", g.value}, {"basis", g.basis}};
    entry["golden"] = golden;
    entry["notes"] = c.notes;
    manifest["cases"].push_back(entry);
  }
  files["manifest.json"] = manifest.dump(2) + "\n";
  return files;
}

// ---------------------------------------------------------------------------
// Random problems

namespace {

class Dice {
 public:
  explicit Dice(std::uint64_t seed) : rng_(seed) {}
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng_() % n); }
  bool chance(double p) { return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p; }

 private:
  std::mt19937_64 rng_;
};

std::string var_name(std::size_t i) { return "?x" + std::to_string(i); }

}  // namespace

BenchCase gen_random_mgp(std::uint64_t seed, const RandomSizes& sizes, const VerdictOracle& oracle) {
  const std::size_t n_obj = sizes.objects, n_pred = sizes.predicates, n_schema = sizes.schemas;
  if (n_pred == 0 || n_pred > kMaxRandomAtoms || n_obj > kMaxRandomAtoms || n_schema > 64)
    throw Error(ErrorKind::Budget, "random sizes exceed the generator's limits");
  if (!(sizes.hidden_fraction >= 0.0 && sizes.hidden_fraction <= 1.0))
    throw Error(ErrorKind::Argument, "hidden fraction must lie in [0, 1]");

  Dice dice(seed);
  // Arity per predicate, keeping the ground atom count within budget.
  std::vector<std::size_t> arity(n_pred, 0);
  std::size_t atoms = 0;
  for (std::size_t p = 0; p < n_pred; ++p) {
    const std::size_t left_after = n_pred - p - 1;
    std::size_t a = dice.below(3);
    auto cost = [&](std::size_t k) {
      std::size_t c = 1;
      for (std::size_t i = 0; i < k; ++i) c *= n_obj;
      return c;
    };
    while (a > 0 && (n_obj == 0 || atoms + cost(a) + left_after > kMaxRandomAtoms)) --a;
    if (atoms + cost(a) + left_after > kMaxRandomAtoms) throw Error(ErrorKind::Budget, "too many ground atoms");
    arity[p] = a;
    atoms += cost(a);
  }

  std::ostringstream w;
  w << "(:world rand" << seed << "\n  (:species synthetic)\n  (:sorts thing - object)\n";
  if (n_obj > 0) {
    w << "  (:objects";
    for (std::size_t o = 0; o < n_obj; ++o) w << " c" << o;
    w << " - thing)\n";
  }
  w << "  (:predicates";
  for (std::size_t p = 0; p < n_pred; ++p) {
    w << " (p" << p;
    for (std::size_t k = 0; k < arity[p]; ++k) w << ' ' << var_name(k) << " - thing";
    w << ')';
  }
  w << ")\n";

  auto literal = [&](std::size_t params, bool negated) {
    const std::size_t p = dice.below(n_pred);
    std::string s = "(p" + std::to_string(p);
    for (std::size_t k = 0; k < arity[p]; ++k)
      s += ' ' + (params > 0 ? var_name(dice.below(params)) : "c" + std::to_string(dice.below(n_obj)));
    s += ')';
    return negated ? "(not " + s + ")" : s;
  };

  std::vector<std::size_t> order(n_schema);
  for (std::size_t i = 0; i < n_schema; ++i) order[i] = i;
  for (std::size_t i = n_schema; i > 1; --i) std::swap(order[i - 1], order[dice.below(i)]);
  const auto n_hidden = static_cast<std::size_t>(std::lround(sizes.hidden_fraction * static_cast<double>(n_schema)));
  std::vector<bool> hidden(n_schema, false);
  for (std::size_t i = 0; i < n_hidden; ++i) hidden[order[i]] = true;

  std::vector<std::string> schema_text(n_schema);
  for (std::size_t s = 0; s < n_schema; ++s) {
    const std::size_t params = n_obj > 0 ? dice.below(3) : 0;
    std::ostringstream a;
    a << "(:action a" << s << "\n    :parameters (";
    for (std::size_t k = 0; k < params; ++k) a << (k ? " " : "") << var_name(k) << " - thing";
    a << ")\n    :precondition (and";
    const std::size_t n_pre = dice.below(3);
    for (std::size_t i = 0; i < n_pre; ++i) a << ' ' << literal(params, dice.chance(0.2));
    a << ")\n    :effect (and";
    std::vector<std::string> effects;
    const std::size_t n_eff = 1 + dice.below(2);
    for (std::size_t i = 0; i < n_eff; ++i) {
      std::string e = literal(params, i > 0 && dice.chance(0.4));
      // The same template must not be both added and deleted.
      const bool neg = e.rfind("(not ", 0) == 0;
      const std::string core = neg ? e.substr(5, e.size() - 6) : e;
      const std::string twin = neg ? core : "(not " + core + ")";
      if (std::find(effects.begin(), effects.end(), twin) == effects.end()) effects.push_back(e);
    }
    for (const auto& e : effects) a << ' ' << e;
    a << "))";
    schema_text[s] = a.str();
  }
  for (std::size_t s = 0; s < n_schema; ++s)
    if (!hidden[s]) w << "  " << schema_text[s] << "\n";
  if (n_hidden > 0) {
    w << "  (:hidden\n";
    for (std::size_t s = 0; s < n_schema; ++s)
      if (hidden[s]) w << "    " << schema_text[s] << "\n";
    w << "  )";
  }
  w << ")\n";

  // Every ground atom, for init, goal and never.
  std::vector<std::string> ground;
  for (std::size_t p = 0; p < n_pred; ++p) {
    std::vector<std::size_t> idx(arity[p], 0);
    while (true) {
      std::string s = "(p" + std::to_string(p);
      for (std::size_t i : idx) s += " c" + std::to_string(i);
      ground.push_back(s + ")");
      std::size_t k = arity[p];
      while (k > 0 && ++idx[k - 1] == n_obj) idx[--k] = 0;
      if (k == 0) break;
    }
  }
  std::vector<bool> init(ground.size(), false);
  for (std::size_t i = 0; i < ground.size(); ++i) init[i] = dice.chance(0.3);

  std::ostringstream pr;
  pr << "(:problem rand" << seed << "\n  (:world rand" << seed << ")\n  (:init";
  for (std::size_t i = 0; i < ground.size(); ++i)
    if (init[i]) pr << ' ' << ground[i];
  pr << ")\n  (:goal";
  const std::size_t n_goal = 1 + dice.below(2);
  std::vector<std::size_t> goal;
  for (std::size_t i = 0; i < n_goal; ++i) {
    const std::size_t g = dice.below(ground.size());
    if (std::find(goal.begin(), goal.end(), g) == goal.end()) goal.push_back(g);
  }
  for (std::size_t g : goal) pr << ' ' << ground[g];
  pr << ")";
  if (dice.chance(0.2)) {
    const std::size_t f = dice.below(ground.size());
    if (!init[f] && std::find(goal.begin(), goal.end(), f) == goal.end()) pr << "\n  (:never " << ground[f] << ")";
  }
  pr << ")\n";

  BenchCase c;
  c.name = "rand" + std::to_string(seed);
  c.world_file = c.name + ".world";
  c.problem_file = c.name + ".problem";
  c.world_doc = {w.str(), c.world_file};
  c.problem_doc = {pr.str(), c.problem_file};
  if (oracle) c.expected = oracle(load_case(c).problem);
  return c;
}

}  // namespace mgpkit
