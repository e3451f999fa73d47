#include "mgpkit/mgp.hpp"

#include <algorithm>

#include "mgpkit/compress.hpp"

namespace mgpkit {

const char* to_string(MgpStatus s) {
  switch (s) {
    case MgpStatus::SolvableInSubdomain: return "SolvableInSubdomain";
    case MgpStatus::Mgp: return "MGP";
    case MgpStatus::UnsolvableInWorld: return "UnsolvableInWorld";
    case MgpStatus::UnknownBudget: return "UnknownBudget";
  }
  return "?";
}

namespace {

void check_initial(const Problem& p) {
  if (p.init.universe() != p.world->atom_count())
    throw Error(ErrorKind::Input, "initial state does not belong to world '" + p.world->name() + "'");
  if (!p.never.admits(p.init)) throw Error(ErrorKind::Input, "initial state violates a never-constraint");
}

ReachSummary summarize(const SearchResult& r) {
  return {r.states, r.explored, r.truncated, r.plan.has_value(), r.pruned};
}

bool all_entail(const ReachableSet& rs, const Goal& g) {
  for (std::size_t i = 0; i < rs.size(); ++i)
    if (!entails_goal(rs.state(i), g)) return false;
  return true;
}

}  // namespace

MgpVerdict classify_problem(const Problem& p, const Budget& budget, Quantifier quantifier) {
  check_initial(p);
  MgpVerdict v;
  const auto sub = search(p.subdomain, p.init, p.goal, p.never, budget.state_cap);
  const auto whole = search(SubdomainView::whole(p.world), p.init, p.goal, p.never, budget.state_cap);
  v.subdomain = summarize(sub);
  v.world = summarize(whole);
  v.witness = whole.plan;

  if (sub.plan) v.status = MgpStatus::SolvableInSubdomain;
  else if (sub.truncated) v.status = MgpStatus::UnknownBudget;
  else if (whole.plan) v.status = MgpStatus::Mgp;
  else if (whole.truncated) v.status = MgpStatus::UnknownBudget;
  else v.status = MgpStatus::UnsolvableInWorld;

  if (quantifier == Quantifier::Universal) {
    const auto rs_sub = reachable(p.subdomain, p.init, budget.state_cap, p.never);
    const auto rs_world = reachable(p.world, p.init, budget.state_cap, p.never);
    if (!rs_sub.truncated && !rs_world.truncated) {
      bool nonempty = false, all = true;
      for (std::size_t i = 0; i < rs_world.size(); ++i) {
        const State s = rs_world.state(i);
        if (rs_sub.contains(s)) continue;
        nonempty = true;
        if (!entails_goal(s, p.goal)) {
          all = false;
          break;
        }
      }
      v.universal_mgp = nonempty && all;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------

namespace {

std::optional<AtomId> translate_atom(const World& from, AtomId atom, const World& to) {
  const auto& ga = from.atoms().atom(atom);
  auto pid = to.domain().find_predicate(from.domain().predicates[ga.predicate].name);
  if (!pid) return std::nullopt;
  std::vector<ObjectId> args;
  for (ObjectId o : ga.args) {
    auto oid = to.domain().find_object(from.domain().objects[o].name);
    if (!oid) return std::nullopt;
    args.push_back(*oid);
  }
  return to.atoms().find(*pid, args);
}

template <typename Taken>
std::string fresh_name(const std::string& base, Taken taken, std::vector<Diagnostic>& warnings, bool numbered) {
  std::string name = numbered ? base + "_1" : base;
  for (int k = numbered ? 2 : 1; taken(name); ++k) name = base + "_" + std::to_string(k);
  const std::string wanted = numbered ? base + "_1" : base;
  if (name != wanted)
    warnings.push_back({Severity::Warning, DiagCode::Renamed, 1, 1, "'" + wanted + "' is taken; using '" + name + "'"});
  return name;
}

}  // namespace

Reduction reduce_to_mgp(const ClassicalProblem& classical) {
  if (!classical.world) throw Error(ErrorKind::Argument, "reduce_to_mgp needs a classical world");
  const World& cw = *classical.world;
  for (AtomId a : classical.goal.positive)
    if (std::find(classical.goal.negative.begin(), classical.goal.negative.end(), a) != classical.goal.negative.end())
      throw Error(ErrorKind::Argument, "goal requires " + cw.atom_string(a) + " both true and false");

  Reduction out{Problem{"", nullptr, SubdomainView::whole(classical.world), State(), Goal{}, {}}, {}};
  PlanningDomain d = cw.domain();
  auto pred_taken = [&](const std::string& n) { return d.find_predicate(n).has_value(); };
  const std::string star = fresh_name("goalStar", pred_taken, out.warnings, false);
  d.predicates.push_back({star, {}});
  const std::string guard = fresh_name("warpGuard", pred_taken, out.warnings, false);
  d.predicates.push_back({guard, {}});
  const std::string warp =
      fresh_name("warp", [&](const std::string& n) { return d.find_schema(n).has_value(); }, out.warnings, true);

  const auto star_id = static_cast<PredicateId>(d.predicates.size() - 2);
  const auto guard_id = static_cast<PredicateId>(d.predicates.size() - 1);
  ActionSchema w{warp, {}, {{guard_id, {}, false}}, {{star_id, {}, false}}};
  auto goal_template = [&](AtomId a, bool negated) {
    const auto& ga = cw.atoms().atom(a);
    AtomTemplate t{ga.predicate, {}, negated};
    for (ObjectId o : ga.args) t.args.push_back(Term::constant(o));
    return t;
  };
  for (AtomId a : classical.goal.positive) w.effects.push_back(goal_template(a, false));
  for (AtomId a : classical.goal.negative) w.effects.push_back(goal_template(a, true));
  d.schemas.push_back(std::move(w));

  PlanningDomain canon = canonicalize(std::move(d));
  GeneratorMask hidden = GeneratorMask::none(canon);
  hidden.insert({GeneratorKind::Predicate, *canon.find_predicate(star)});
  hidden.insert({GeneratorKind::Predicate, *canon.find_predicate(guard)});
  hidden.insert({GeneratorKind::Schema, *canon.find_schema(warp)});
  WorldPtr world = make_world(cw.name() + "-reduced", cw.species(), std::move(canon), hidden);

  State init(world->atom_count());
  for (AtomId a : classical.init.ids()) init.set(*translate_atom(cw, a, *world));
  init.set(*world->atoms().find(*world->domain().find_predicate(guard), {}));
  std::vector<Literal> goal;
  for (const auto& l : classical.goal.literals()) goal.push_back({*translate_atom(cw, l.atom, *world), l.negated});

  out.problem = Problem{cw.name() + "-reduced", world, SubdomainView::agent(world), std::move(init),
                        Goal::from_literals(goal), {}};
  return out;
}

// ---------------------------------------------------------------------------

bool is_insightful(const Context& c, const Problem& p, const Strategy& omega, const Budget& budget,
                   Quantifier quantifier) {
  const auto contexts = execute_strategy(c, omega, p.never);
  if (!project_strategy(omega).domain_modifying()) return false;
  const Context& last = contexts.back();
  if (quantifier == Quantifier::Existential)
    return search(last.subdomain, last.state, p.goal, p.never, budget.state_cap).plan.has_value();
  const auto rs = reachable(last.subdomain, last.state, budget.state_cap, p.never);
  return !rs.truncated && all_entail(rs, p.goal);
}

std::vector<GeneratorRef> extension_pool(const Problem& p) {
  return p.subdomain.mask().complement().members();
}

ExtensionSearch minimal_extensions(const Problem& p, const Budget& budget) {
  check_initial(p);
  ExtensionSearch out;
  const auto pool = extension_pool(p);
  const GeneratorMask& base = p.subdomain.mask();

  auto solves = [&](const GeneratorMask& m) {
    const auto r = search(SubdomainView(p.world, m), p.init, p.goal, p.never, budget.state_cap);
    if (r.truncated) out.partial = true;
    return r.plan.has_value();
  };

  if (solves(base)) return out;
  GeneratorMask everything = base;
  for (const auto& g : pool) everything.insert(g);
  if (!solves(everything)) return out;  // extensions only add actions, so no subset helps either

  const std::size_t n = pool.size();
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<GeneratorRef> candidate;
      for (std::size_t i : idx) candidate.push_back(pool[i]);
      const bool covers_found = std::any_of(out.sets.begin(), out.sets.end(), [&](const auto& s) {
        return std::includes(candidate.begin(), candidate.end(), s.begin(), s.end());
      });
      if (!covers_found) {
        if (out.subsets_tried >= budget.subset_cap) {
          out.partial = true;
          return out;
        }
        ++out.subsets_tried;
        GeneratorMask m = base;
        for (const auto& g : candidate) m.insert(g);
        if (solves(m)) out.sets.push_back(std::move(candidate));
      }
      // next combination in lexicographic order
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

Strategy make_strategy(std::span<const GeneratorRef> delta, const Plan& plan) {
  Strategy s;
  for (const auto& g : delta) s.steps.push_back(ModifyStep{Modification::extension({g})});
  for (GroundActionId a : plan.actions) s.steps.push_back(ActStep{a});
  return s;
}

OptimalStrategies optimal_strategies(const Problem& p, const Budget& budget) {
  const auto verdict = classify_problem(p, budget);
  if (verdict.status != MgpStatus::Mgp)
    throw Error(ErrorKind::NotMgp, std::string("not an MGP (") + to_string(verdict.status) + ")");
  const auto ext = minimal_extensions(p, budget);
  OptimalStrategies out{StrategySet(p.world, StrategySetKind::Optimal),
                        StrategySet(p.world, StrategySetKind::OptimalInsightful), 0, 0, ext.partial};
  if (ext.sets.empty()) return out;

  const std::size_t min_delta = ext.sets.front().size();
  std::vector<std::pair<const std::vector<GeneratorRef>*, Plan>> best;
  std::size_t best_len = SIZE_MAX;
  for (const auto& set : ext.sets) {
    if (set.size() != min_delta) break;
    GeneratorMask m = p.subdomain.mask();
    for (const auto& g : set) m.insert(g);
    const auto r = search(SubdomainView(p.world, m), p.init, p.goal, p.never, budget.state_cap);
    if (r.truncated) out.partial = true;
    if (!r.plan) continue;
    if (r.plan->size() < best_len) {
      best.clear();
      best_len = r.plan->size();
    }
    if (r.plan->size() == best_len) best.emplace_back(&set, *r.plan);
  }
  for (const auto& [set, plan] : best) {
    out.optimal.insert(make_strategy(*set, plan));
    out.insightful.insert(make_strategy(*set, Plan{}));
  }
  out.delta_size = min_delta;
  out.plan_length = best.empty() ? 0 : best_len;
  return out;
}

std::size_t m_number(const StrategySet& insightful) { return compress_bits(canonical_serialize(insightful)); }

}  // namespace mgpkit
