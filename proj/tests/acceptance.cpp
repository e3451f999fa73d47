// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <iomanip>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "mgpkit/agent.hpp"
#include "mgpkit/compress.hpp"
#include "mgpkit/judge.hpp"
#include "mgpkit/mgp.hpp"
#include "oracle.hpp"

using namespace mgpkit;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int n, const std::string& title, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  failures += !o.pass;
  std::cout << "criterion " << n << " " << (o.pass ? "PASS" : "FAIL") << ": " << title << " [" << o.detail << "; "
            << std::fixed << std::setprecision(3) << secs << " s]" << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
  return s;
}

MgpStatus oracle_status(const Problem& p) {
  if (oracle::bfs(oracle::from_problem(p, p.subdomain.mask()), 2'000'000, false, true).distance)
    return MgpStatus::SolvableInSubdomain;
  return oracle::bfs(oracle::from_problem(p, GeneratorMask::all(p.world->domain())), 2'000'000, false, true).distance
             ? MgpStatus::Mgp
             : MgpStatus::UnsolvableInWorld;
}

bool close(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)}); }

Strategy random_walk(const Problem& p, const Context& start, std::size_t len, std::mt19937_64& rng) {
  Strategy s;
  Context cur = start;
  for (std::size_t i = 0; i < len; ++i) {
    const World& w = cur.subdomain.world();
    std::vector<StrategyStep> moves;
    for (GroundActionId a : cur.subdomain.ground_actions())
      if (applicable(cur.state, w.action(a)) && p.never.admits(apply_action(cur.state, w.action(a))))
        moves.emplace_back(ActStep{a});
    for (const auto& g : cur.subdomain.mask().complement().members())
      moves.emplace_back(ModifyStep{Modification::extension({g})});
    if (moves.empty()) break;
    s.steps.push_back(moves[rng() % moves.size()]);
    cur = execute_strategy(cur, Strategy{{s.steps.back()}}, p.never).back();
  }
  return s;
}

}  // namespace

int main() {
  criterion(1, "block-and-towel baseline plan", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto lc = fixtures::block_towel(false);
    const auto plan = shortest_plan(lc.problem.subdomain, lc.problem.init, lc.problem.goal, lc.problem.never);
    const double secs = seconds_since(t0);
    if (!plan) return Verdict{false, "no plan"};
    const auto text = fixtures::plan_text(*lc.world, *plan);
    const bool ok = text == "(reach B L2)(grasp B L2)(lift B L2)(carryTo B L3)(release B L3)" && secs < 1.0;
    return Verdict{ok, std::to_string(plan->size()) + " actions " + text};
  });

  criterion(2, "block-and-towel no-touch is an MGP solved by a minimal extension", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto lc = fixtures::block_towel(true);
    const World& w = *lc.world;
    const auto v = classify_problem(lc.problem);
    std::vector<std::string> hidden;
    for (const auto& g : w.hidden().members()) hidden.push_back(w.generator_string(g));
    const auto mins = oracle::minimal_extensions(lc.problem);
    if (v.status != MgpStatus::Mgp || mins.empty()) return Verdict{false, std::string("status ") + to_string(v.status)};
    Strategy prefix = make_strategy(mins.front(), Plan{});
    const auto ctx = execute_strategy(lc.problem.initial_context(), prefix, lc.problem.never).back();
    const auto plan = shortest_plan(ctx.subdomain, ctx.state, lc.problem.goal, lc.problem.never);
    const bool insightful = is_insightful(lc.problem.initial_context(), lc.problem, prefix);
    std::vector<std::string> delta;
    for (const auto& g : mins.front()) delta.push_back(w.generator_string(g));
    const bool ok = plan && insightful && seconds_since(t0) < 5.0;
    return Verdict{ok, "hidden {" + join(hidden) + "}, oracle-minimal {" + join(delta) + "}, extended plan " +
                           (plan ? fixtures::plan_text(w, *plan) : "none") + ", insightful " +
                           (insightful ? "yes" : "no")};
  });

  criterion(3, "makeshift screwdriver", [] {
    const auto missing = fixtures::screwdriver(ScrewdriverVariant::MissingTool);
    const auto avail = fixtures::screwdriver(ScrewdriverVariant::ToolAvailable);
    const auto vm = classify_problem(missing.problem);
    const auto va = classify_problem(avail.problem);
    const auto pa = shortest_plan(avail.problem.subdomain, avail.problem.init, avail.problem.goal, avail.problem.never);
    const bool avail_ok = va.status == MgpStatus::SolvableInSubdomain && pa &&
                          fixtures::plan_text(*avail.world, *pa) ==
                              "(select screwdriver screw)(reachAndEngage screwdriver screw)(install screw screwdriver B1 B2)";
    Policy pol;
    pol.kind = PolicyKind::PlanFirstExplorer;
    pol.seed = 1;
    pol.relaxation_depth = 1;
    const auto t = solve_mgp(missing.problem, pol);
    const World& w = *missing.world;
    std::vector<std::string> steps;
    for (const auto& st : t.steps.steps) {
      if (const auto* a = std::get_if<ActStep>(&st)) {
        steps.push_back(w.action_string(a->action));
        continue;
      }
      std::string m = "+";
      for (const auto& g : std::get<ModifyStep>(st).modification.payload) m += w.generator_string(g);
      steps.push_back(m);
    }
    const bool coin = t.outcome == Outcome::Solved && entails_goal(t.contexts.back().state, missing.problem.goal) &&
                      join(steps).find("(reachAndEngage~0 coin screw)") != std::string::npos;
    const bool ok = vm.status == MgpStatus::Mgp && avail_ok && coin;
    return Verdict{ok, std::string("missing ") + to_string(vm.status) + ", available " + to_string(va.status) +
                           ", trace " + join(steps) + " -> " + to_string(t.outcome)};
  });

  criterion(4, "oracle equivalence on 100 random cases", [] {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t agree = 0, mgps = 0;
    std::size_t max_states = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto lc = load_case(gen_random_mgp(seed, RandomSizes{}));
      const auto& p = lc.problem;
      max_states = std::max<std::size_t>(max_states, std::size_t{1} << lc.world->atom_count());
      const auto v = classify_problem(p);
      bool same = v.status == oracle_status(p);
      for (const auto& mask : {p.subdomain.mask(), GeneratorMask::all(lc.world->domain())}) {
        const auto mine = shortest_plan(SubdomainView(lc.world, mask), p.init, p.goal, p.never);
        const auto theirs = oracle::bfs(oracle::from_problem(p, mask), 2'000'000, false, true).distance;
        same = same && mine.has_value() == theirs.has_value() && (!mine || mine->size() == *theirs);
      }
      agree += same;
      mgps += v.status == MgpStatus::Mgp;
    }
    const double secs = seconds_since(t0);
    return Verdict{agree == 100 && secs < 300.0 && max_states <= 100000,
                   std::to_string(agree) + "/100 agree, " + std::to_string(mgps) + " MGPs, <= " +
                       std::to_string(max_states) + " ground states each"};
  });

  criterion(5, "definite verdicts on every corpus case", [] {
    std::size_t definite = 0;
    std::string detail;
    const auto cases = corpus_cases();
    for (const auto& c : cases) {
      const auto lc = load_case(c);
      const auto v = classify_problem(lc.problem);
      bool ok = v.status != MgpStatus::UnknownBudget && !v.subdomain.truncated && !v.world.truncated;
      if (v.status == MgpStatus::Mgp) ok = ok && !minimal_extensions(lc.problem).partial;
      definite += ok;
      detail += (detail.empty() ? "" : ", ") + c.name + "=" + to_string(v.status);
    }
    return Verdict{definite == cases.size(), detail};
  });

  criterion(6, "reduction harness on 100 random classical problems", [] {
    std::size_t mgp_unreachable = 0, solvable_reachable = 0, deviations = 0;
    for (std::uint64_t seed = 1000; seed < 1100; ++seed) {
      const auto lc = load_case(gen_random_mgp(seed, RandomSizes{}));
      const auto red = reduce_to_mgp({lc.world, lc.problem.init, lc.problem.goal});
      const auto status = classify_problem(red.problem).status;
      // classical problem: every generator of the world, no never-constraints
      oracle::StrProblem sp = oracle::from_problem(lc.problem, GeneratorMask::all(lc.world->domain()));
      sp.never.clear();
      const bool reachable = oracle::bfs(sp, 2'000'000, false, true).distance.has_value();
      if (status == MgpStatus::Mgp && !reachable) ++mgp_unreachable;
      else if (status == MgpStatus::SolvableInSubdomain && reachable) ++solvable_reachable;
      else ++deviations;
    }
    return Verdict{deviations == 0,
                   "measured direction: MGP iff classical goal NOT reachable (" + std::to_string(mgp_unreachable) +
                       " MGP/unreachable, " + std::to_string(solvable_reachable) + " solvable/reachable, " +
                       std::to_string(deviations) + " deviations)"};
  });

  criterion(7, "reachability grows with extensions (1000 pairs)", [] {
    std::mt19937_64 rng(77);
    std::size_t holds = 0;
    for (int i = 0; i < 1000; ++i) {
      const auto lc = load_case(gen_random_mgp(rng() % 500, RandomSizes{}));
      const auto all = GeneratorMask::all(lc.world->domain());
      GeneratorMask view = all;
      for (const auto& g : all.members())
        if (rng() % 3 == 0) view.erase(g);
      auto pool = view.complement().members();
      if (pool.empty()) {
        const auto members = view.members();
        view.erase(members[rng() % members.size()]);
        pool = view.complement().members();
      }
      std::vector<GeneratorRef> ext;
      for (const auto& g : pool)
        if (rng() % 2 == 0) ext.push_back(g);
      if (ext.empty()) ext.push_back(pool[rng() % pool.size()]);
      const SubdomainView small(lc.world, view);
      const auto big = apply_modification(small, Modification::extension(ext));
      const auto a = reachable(small, lc.problem.init, kDefaultStateCap, lc.problem.never);
      const auto b = reachable(big, lc.problem.init, kDefaultStateCap, lc.problem.never);
      bool contained = !a.truncated && !b.truncated;
      for (std::size_t k = 0; contained && k < a.size(); ++k) contained = b.index_of(a.state(k)).has_value();
      holds += contained;
    }
    return Verdict{holds == 1000, std::to_string(holds) + "/1000 containments hold"};
  });

  criterion(8, "judge algebra", [] {
    const auto reg = HypothesisRegistry::standard();
    double sum = 0;
    for (double x : reg.priors()) sum += x;
    const bool priors_ok = std::fabs(sum - 1.0) <= 1e-12;

    const auto base = fixtures::block_towel(false);
    const auto pi1 = fixtures::plan_of(*base.world, {"(reach B L2)", "(grasp B L2)", "(lift B L2)",
                                                     "(carryTo B L3)", "(release B L3)"});
    const double lik = random_agent_likelihood(strategy_from_plan(pi1));
    const bool random_ok = lik == 1.0 / 32.0;

    std::mt19937_64 rng(8);
    std::vector<LoadedCase> cases{fixtures::block_towel(true), base, fixtures::screwdriver(ScrewdriverVariant::MissingTool)};
    std::size_t chain = 0, r_ok = 0, r_total = 0;
    for (int i = 0; i < 100; ++i) {
      const auto& lc = cases[i % cases.size()];
      const Context c = lc.problem.initial_context();
      const auto omega = random_walk(lc.problem, c, 1 + rng() % 3, rng);
      const auto mid = execute_strategy(c, omega, lc.problem.never).back();
      const auto plus = random_walk(lc.problem, mid, 1 + rng() % 2, rng);
      double direct = 0;
      for (std::size_t h = 0; h < reg.size(); ++h)
        direct += reg.priors()[h] * reg.hypotheses()[h]->likelihood(omega.concat(plus), lc.problem, c);
      const auto ranked = predict_continuation(omega, plus.size(), {plus}, lc.problem, c, reg);
      chain += close(ranked.at(0).score * mixture_mass(omega, lc.problem, c, reg), direct);
      for (const auto* s : {&omega, &plus}) {
        const Strategy whole = s == &omega ? omega : omega.concat(plus);
        const double r = resourcefulness_default(whole, lc.problem);
        ++r_total;
        r_ok += r >= 0.0 && r <= 1.0;
      }
    }
    for (const auto& bc : corpus_cases()) {
      const auto lc = load_case(bc);
      for (auto kind : {PolicyKind::RandomExplorer, PolicyKind::PlanFirstExplorer, PolicyKind::OracleGuided}) {
        Policy pol;
        pol.kind = kind;
        const double r = resourcefulness_default(solve_mgp(lc.problem, pol).steps, lc.problem);
        ++r_total;
        r_ok += r >= 0.0 && r <= 1.0;
      }
    }
    std::ostringstream d;
    d << "prior sum " << std::setprecision(17) << sum << ", random(pi1) = " << lik << ", chain rule " << chain
      << "/100, R in [0,1] on " << r_ok << "/" << r_total << " traces";
    return Verdict{priors_ok && random_ok && chain == 100 && r_ok == r_total, d.str()};
  });

  criterion(9, "m-number determinism and ordering", [] {
    const auto manifest = nlohmann::json::parse(corpus_files().at("manifest.json"));
    auto frozen = [&](const std::string& name) -> std::size_t {
      for (const auto& c : manifest.at("cases"))
        if (c.at("name") == name) return c.at("golden").at("m_number_bits").at("value");
      return 0;
    };
    auto runs = [](const LoadedCase& lc) {
      std::vector<std::size_t> v;
      for (int i = 0; i < 3; ++i) v.push_back(m_number(optimal_strategies(lc.problem).insightful));
      return v;
    };
    const auto a = runs(fixtures::block_towel(true));
    const auto b = runs(fixtures::screwdriver(ScrewdriverVariant::Recessed));
    const bool stable = a[0] == a[1] && a[1] == a[2] && b[0] == b[1] && b[1] == b[2];
    const bool same_compressor = manifest.at("compressor") == compressor_identity();
    const bool matches = frozen("block_towel_notouch") == a[0] && frozen("screwdriver_recessed") == b[0];
    return Verdict{stable && a[0] < b[0] && same_compressor && matches,
                   "no-touch " + std::to_string(a[0]) + " bits < recessed " + std::to_string(b[0]) + " bits, " +
                       compressor_identity() + (matches ? ", manifest agrees" : ", manifest differs")};
  });

  criterion(10, "parser robustness", [] {
    std::vector<std::string> seeds;
    for (const auto& c : corpus_cases()) {
      seeds.push_back(c.world_doc.text);
      seeds.push_back(c.problem_doc.text);
    }
    const auto world = fixtures::block_towel(false).world;
    std::mt19937_64 rng(10);
    std::size_t crashes = 0;
    for (int i = 0; i < 10000; ++i) {
      std::string s = seeds[rng() % seeds.size()];
      for (int e = 0, n = 1 + static_cast<int>(rng() % 8); e < n && !s.empty(); ++e) {
        const std::size_t pos = rng() % s.size();
        switch (rng() % 4) {
          case 0: s[pos] = static_cast<char>(rng() & 0xff); break;
          case 1: s.erase(pos, 1 + rng() % 16); break;
          case 2: s.insert(pos, 1, "()?-: \n;\"\x80"[rng() % 11]); break;
          default: s.resize(pos); break;
        }
      }
      try {
        const auto w = parse_world({s, "fuzz"});
        const auto p = parse_problem({s, "fuzz"}, world);
        if ((!w.ok() && w.error_count() == 0) || (!p.ok() && p.error_count() == 0)) ++crashes;
      } catch (...) {
        ++crashes;
      }
    }
    std::size_t identical = 0;
    const auto cases = corpus_cases();
    for (const auto& c : cases) {
      const auto lc = load_case(c);
      const auto w2 = fixtures::world_from(print_world(*lc.world));
      const auto p2 = fixtures::problem_from(print_problem(lc.problem), w2);
      identical += canonical_serialize(*w2) == canonical_serialize(*lc.world) &&
                   canonical_serialize(p2) == canonical_serialize(lc.problem);
    }
    return Verdict{crashes == 0 && identical == cases.size(),
                   "10000 fuzz cases, " + std::to_string(crashes) + " crashes; round-trip identical on " +
                       std::to_string(identical) + "/" + std::to_string(cases.size()) + " corpus cases"};
  });

  return failures == 0 ? 0 : 1;
}
