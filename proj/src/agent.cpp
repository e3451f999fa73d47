#include "mgpkit/agent.hpp"

#include <json.hpp>

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace mgpkit {

using nlohmann::json;

const char* to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::RandomExplorer: return "random";
    case PolicyKind::PlanFirstExplorer: return "plan-first";
    case PolicyKind::OracleGuided: return "oracle";
  }
  return "?";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view s) {
  if (s == "random") return PolicyKind::RandomExplorer;
  if (s == "plan-first") return PolicyKind::PlanFirstExplorer;
  if (s == "oracle") return PolicyKind::OracleGuided;
  return std::nullopt;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Solved: return "Solved";
    case Outcome::GaveUp: return "GaveUp";
    case Outcome::BudgetExhausted: return "BudgetExhausted";
  }
  return "?";
}

ActionSchema relax_schema(const PlanningDomain& domain, const ActionSchema& schema, std::size_t param_index,
                          SortId new_sort) {
  if (param_index >= schema.params.size())
    throw Error(ErrorKind::Argument, "schema '" + schema.name + "' has no parameter " + std::to_string(param_index));
  if (new_sort >= domain.sorts.size()) throw Error(ErrorKind::Argument, "unknown sort id");
  const SortId old_sort = schema.params[param_index].sort;
  if (new_sort == old_sort || !domain.is_subsort(old_sort, new_sort))
    throw Error(ErrorKind::Relaxation, "sort '" + domain.sorts[new_sort].name + "' does not widen '" +
                                           domain.sorts[old_sort].name + "'");
  ActionSchema out = schema;
  out.name = schema.name + "~" + std::to_string(param_index);
  out.params[param_index].sort = new_sort;
  return out;
}

std::vector<ActionSchema> relaxation_candidates(const SubdomainView& view, std::size_t depth) {
  const auto& d = view.world().domain();
  std::vector<ActionSchema> out;
  for (SchemaId s = 0; s < d.schemas.size(); ++s) {
    if (!view.mask().has_schema(s)) continue;
    const auto& schema = d.schemas[s];
    for (std::size_t i = 0; i < schema.params.size(); ++i) {
      auto sort = d.sorts[schema.params[i].sort].parent;
      for (std::size_t level = 0; level < depth && sort; ++level) {
        out.push_back(relax_schema(d, schema, i, *sort));
        sort = d.sorts[*sort].parent;
      }
    }
  }
  return out;
}

namespace {

// The environment side of the simulation: the only code that looks at
// generators outside the agent's current view.
class Environment {
 public:
  explicit Environment(const Problem& p) : problem_(p) {}

  std::optional<GeneratorRef> reveal_random(const SubdomainView& view, std::mt19937_64& rng) const {
    const auto hidden = view.mask().complement().members();
    if (hidden.empty()) return std::nullopt;
    return hidden[rng() % hidden.size()];
  }

  /// A hidden schema identical to the proposal, if the world has one.
  std::optional<GeneratorRef> grant(const SubdomainView& view, const ActionSchema& proposal) const {
    const auto& d = problem_.world->domain();
    for (SchemaId s = 0; s < d.schemas.size(); ++s)
      if (!view.mask().has_schema(s) && d.schemas[s] == proposal) return GeneratorRef{GeneratorKind::Schema, s};
    return std::nullopt;
  }

  std::vector<GeneratorRef> oracle_set(const Budget& budget) const {
    const auto ext = minimal_extensions(problem_, budget);
    if (ext.sets.empty()) return {};
    return ext.sets.front();
  }

 private:
  const Problem& problem_;
};

template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

}  // namespace

StrategyTrace solve_mgp(const Problem& p, const Policy& policy, const Budget& budget) {
  if (budget.state_cap < 1) throw Error(ErrorKind::Argument, "state cap must be at least 1");
  if (policy.kind == PolicyKind::PlanFirstExplorer && policy.relaxation_depth == 0 && policy.exploration_budget == 0)
    throw Error(ErrorKind::Argument, "plan-first policy with no way to explore");

  const Environment env(p);
  std::mt19937_64 rng(policy.seed);
  StrategyTrace trace;
  SubdomainView view = p.subdomain;
  State state = p.init;

  std::vector<ActionSchema> proposals;
  std::size_t next_proposal = 0;
  if (policy.kind == PolicyKind::PlanFirstExplorer) {
    proposals = relaxation_candidates(view, policy.relaxation_depth);
    seeded_shuffle(proposals, rng);
  }
  std::vector<GeneratorRef> oracle;
  std::size_t next_oracle = 0;
  if (policy.kind == PolicyKind::OracleGuided) oracle = env.oracle_set(budget);

  auto extend = [&](GeneratorRef g) {
    Modification m = Modification::extension({g});
    view = apply_modification(view, m);
    trace.steps.steps.push_back(ModifyStep{std::move(m)});
  };

  while (true) {
    const auto r = search(view, state, p.goal, p.never, budget.state_cap);
    if (r.plan) {
      for (GroundActionId a : r.plan->actions) trace.steps.steps.push_back(ActStep{a});
      trace.solved_plan = r.plan;
      trace.outcome = Outcome::Solved;
      break;
    }
    if (r.truncated) {
      trace.outcome = Outcome::BudgetExhausted;
      break;
    }
    std::optional<GeneratorRef> granted;
    while (!granted && trace.requests < policy.exploration_budget) {
      ++trace.requests;
      if (policy.kind == PolicyKind::OracleGuided) {
        while (next_oracle < oracle.size() && view.mask().contains(oracle[next_oracle])) ++next_oracle;
        granted = next_oracle < oracle.size() ? std::optional(oracle[next_oracle++]) : env.reveal_random(view, rng);
      } else if (policy.kind == PolicyKind::PlanFirstExplorer && next_proposal < proposals.size()) {
        granted = env.grant(view, proposals[next_proposal++]);
      } else {
        granted = env.reveal_random(view, rng);
        if (!granted) break;
      }
    }
    if (!granted) {
      trace.outcome = Outcome::GaveUp;
      break;
    }
    extend(*granted);
  }
  trace.contexts = execute_strategy(p.initial_context(), trace.steps, p.never);
  return trace;
}

// ---------------------------------------------------------------------------
// JSON lines

namespace {

const char* kind_name(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::Predicate: return "predicate";
    case GeneratorKind::Object: return "object";
    case GeneratorKind::Schema: return "schema";
  }
  return "?";
}

std::string generator_name(const PlanningDomain& d, GeneratorRef g) {
  switch (g.kind) {
    case GeneratorKind::Predicate: return d.predicates.at(g.index).name;
    case GeneratorKind::Object: return d.objects.at(g.index).name;
    case GeneratorKind::Schema: return d.schemas.at(g.index).name;
  }
  return {};
}

json step_json(const World& w, const StrategyStep& step, std::size_t index) {
  const auto& d = w.domain();
  json j;
  if (const auto* act = std::get_if<ActStep>(&step)) {
    const auto& ga = w.action(act->action);
    j["kind"] = "act";
    j["index"] = index;
    j["schema"] = d.schemas[ga.schema].name;
    json args = json::array();
    for (ObjectId o : ga.binding) args.push_back(d.objects[o].name);
    j["args"] = args;
  } else {
    const auto& m = std::get<ModifyStep>(step).modification;
    j["kind"] = "modify";
    j["index"] = index;
    j["op"] = m.kind == ModificationKind::Extension ? "extend" : "contract";
    json gens = json::array();
    for (const auto& g : m.payload) gens.push_back({{"kind", kind_name(g.kind)}, {"name", generator_name(d, g)}});
    j["generators"] = gens;
  }
  return j;
}

}  // namespace

void write_trace_jsonl(std::ostream& out, const World& world, const StrategyTrace& trace) {
  for (std::size_t i = 0; i < trace.steps.steps.size(); ++i) out << step_json(world, trace.steps.steps[i], i).dump() << '\n';
  json tail{{"kind", "outcome"},
            {"outcome", to_string(trace.outcome)},
            {"steps", trace.steps.size()},
            {"requests", trace.requests}};
  out << tail.dump() << '\n';
}

std::string trace_jsonl(const World& world, const StrategyTrace& trace) {
  std::ostringstream os;
  write_trace_jsonl(os, world, trace);
  return os.str();
}

ParsedTrace read_trace_jsonl(std::istream& in, const World& world) {
  const auto& d = world.domain();
  ParsedTrace out;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::Input, "trace line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("kind") || !j["kind"].is_string()) fail("not a step object");
    if (out.outcome) fail("step after the outcome line");
    const std::string kind = j["kind"];
    try {
      if (kind == "act") {
        auto sid = d.find_schema(j.at("schema").get<std::string>());
        if (!sid) fail("unknown schema");
        std::vector<ObjectId> binding;
        for (const auto& a : j.at("args")) {
          auto oid = d.find_object(a.get<std::string>());
          if (!oid) fail("unknown object");
          binding.push_back(*oid);
        }
        auto id = world.find_action(*sid, binding);
        if (!id) fail("no such ground action");
        out.steps.steps.push_back(ActStep{*id});
      } else if (kind == "modify") {
        std::vector<GeneratorRef> payload;
        for (const auto& g : j.at("generators")) {
          const std::string gk = g.at("kind");
          const std::string name = g.at("name");
          std::optional<std::uint32_t> id;
          GeneratorKind k{};
          if (gk == "predicate") { k = GeneratorKind::Predicate; id = d.find_predicate(name); }
          else if (gk == "object") { k = GeneratorKind::Object; id = d.find_object(name); }
          else if (gk == "schema") { k = GeneratorKind::Schema; id = d.find_schema(name); }
          if (!id) fail("unknown generator '" + name + "'");
          payload.push_back({k, *id});
        }
        const std::string op = j.at("op");
        if (op == "extend") out.steps.steps.push_back(ModifyStep{Modification::extension(std::move(payload))});
        else if (op == "contract") out.steps.steps.push_back(ModifyStep{Modification::contraction(std::move(payload))});
        else fail("unknown op '" + op + "'");
      } else if (kind == "outcome") {
        const std::string o = j.at("outcome");
        if (o == "Solved") out.outcome = Outcome::Solved;
        else if (o == "GaveUp") out.outcome = Outcome::GaveUp;
        else if (o == "BudgetExhausted") out.outcome = Outcome::BudgetExhausted;
        else fail("unknown outcome '" + o + "'");
      } else {
        fail("unknown kind '" + kind + "'");
      }
    } catch (const json::exception& e) {
      fail(e.what());
    }
  }
  return out;
}

}  // namespace mgpkit
