#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "mgpkit/agent.hpp"
#include "mgpkit/judge.hpp"

using namespace mgpkit;

namespace {

// Random walk over legal moves: applicable actions and single extensions.
Strategy random_walk(const Problem& p, const Context& start, std::size_t len, std::mt19937_64& rng) {
  Strategy s;
  Context cur = start;
  for (std::size_t i = 0; i < len; ++i) {
    const World& w = cur.subdomain.world();
    std::vector<StrategyStep> moves;
    for (GroundActionId a : cur.subdomain.ground_actions()) {
      if (!applicable(cur.state, w.action(a))) continue;
      if (!p.never.admits(apply_action(cur.state, w.action(a)))) continue;
      moves.emplace_back(ActStep{a});
    }
    for (const auto& g : cur.subdomain.mask().complement().members())
      moves.emplace_back(ModifyStep{Modification::extension({g})});
    if (moves.empty()) break;
    const auto step = moves[rng() % moves.size()];
    s.steps.push_back(step);
    cur = execute_strategy(cur, Strategy{{step}}, p.never).back();
  }
  return s;
}

Context after(const Context& c, const Strategy& s, const Problem& p) { return execute_strategy(c, s, p.never).back(); }

bool close(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)}); }

}  // namespace

TEST_CASE("priors are normalized and favour short descriptions") {
  const auto reg = HypothesisRegistry::standard();
  REQUIRE(reg.size() == 3);
  double sum = 0;
  for (double x : reg.priors()) sum += x;
  CHECK(std::fabs(sum - 1.0) <= 1e-12);
  for (std::size_t i = 0; i < reg.size(); ++i)
    for (std::size_t j = 0; j < reg.size(); ++j)
      if (reg.description_bits()[i] < reg.description_bits()[j]) CHECK(reg.priors()[i] > reg.priors()[j]);
  for (std::size_t i = 0; i < reg.size(); ++i)
    for (std::size_t j = 0; j < reg.size(); ++j) {
      const double ratio = reg.priors()[i] / reg.priors()[j];
      const double bits = static_cast<double>(reg.description_bits()[j]) - static_cast<double>(reg.description_bits()[i]);
      CHECK(close(ratio, std::ldexp(1.0, static_cast<int>(bits))));
    }
  CHECK_THROWS_AS(HypothesisRegistry({}), Error);
}

TEST_CASE("random agent gives the five-step plan probability 1/32") {
  const auto lc = fixtures::block_towel(false);
  const auto pi1 = fixtures::plan_of(*lc.world, {"(reach B L2)", "(grasp B L2)", "(lift B L2)", "(carryTo B L3)",
                                                 "(release B L3)"});
  const auto omega = strategy_from_plan(pi1);
  CHECK(random_agent_likelihood(omega) == 1.0 / 32.0);
  CHECK(random_agent_hypothesis()->likelihood(omega, lc.problem, lc.problem.initial_context()) == 1.0 / 32.0);
  CHECK(random_agent_likelihood(Strategy{}) == 1.0);
}

TEST_CASE("chain rule over 100 random strategy and continuation pairs") {
  const auto reg = HypothesisRegistry::standard();
  const auto markov = {random_agent_hypothesis(), plan_first_hypothesis()};
  std::mt19937_64 rng(11);
  std::vector<LoadedCase> cases{fixtures::block_towel(true), fixtures::block_towel(false),
                                fixtures::screwdriver(ScrewdriverVariant::MissingTool)};
  std::size_t checked = 0;
  for (int i = 0; i < 100; ++i) {
    const auto& lc = cases[i % cases.size()];
    const Context c = lc.problem.initial_context();
    const Strategy omega = random_walk(lc.problem, c, 1 + rng() % 3, rng);
    const Strategy plus = random_walk(lc.problem, after(c, omega, lc.problem), 1 + rng() % 2, rng);
    const Strategy joined = omega.concat(plus);

    // mixture identity, summed independently of mixture_mass
    double direct = 0;
    for (std::size_t h = 0; h < reg.size(); ++h)
      direct += reg.priors()[h] * reg.hypotheses()[h]->likelihood(joined, lc.problem, c);
    const auto ranked = predict_continuation(omega, plus.size(), {plus}, lc.problem, c, reg);
    REQUIRE(ranked.size() == 1);
    CHECK(close(ranked[0].score * mixture_mass(omega, lc.problem, c, reg), direct));

    // per-hypothesis factorization for the agents that only look at the current context
    const Context mid = after(c, omega, lc.problem);
    for (const auto& h : markov) {
      const double lhs = h->likelihood(joined, lc.problem, c);
      const double rhs = h->likelihood(omega, lc.problem, c) * h->likelihood(plus, lc.problem, mid);
      CHECK(close(lhs, rhs));
    }
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("likelihoods never grow along a strategy") {
  const auto lc = fixtures::block_towel(true);
  const auto reg = HypothesisRegistry::standard();
  std::mt19937_64 rng(5);
  const Context c = lc.problem.initial_context();
  const auto omega = random_walk(lc.problem, c, 6, rng);
  for (const auto& h : reg.hypotheses()) {
    double prev = h->likelihood(Strategy{}, lc.problem, c);
    CHECK(prev == 1.0);
    Strategy prefix;
    for (const auto& step : omega.steps) {
      prefix.steps.push_back(step);
      const double now = h->likelihood(prefix, lc.problem, c);
      CHECK(now <= prev);
      CHECK(now >= 0.0);
      prev = now;
    }
  }
}

TEST_CASE("resourcefulness stays in [0,1] and rewards the insight") {
  const auto lc = fixtures::block_towel(true);
  const World& w = *lc.world;
  const auto push = fixtures::schema_ref(w, "push");
  Strategy insight;
  insight.steps.emplace_back(ModifyStep{Modification::extension({push})});
  CHECK(resourcefulness_default(Strategy{}, lc.problem) == 0.0);
  CHECK(resourcefulness_default(insight, lc.problem) == 1.0);

  const auto rec = fixtures::screwdriver(ScrewdriverVariant::Recessed);
  Strategy half;
  half.steps.emplace_back(ModifyStep{Modification::extension({fixtures::schema_ref(*rec.world, "grab~1")})});
  CHECK(resourcefulness_default(half, rec.problem) == 0.5);

  std::mt19937_64 rng(3);
  for (const auto* p : {&lc.problem, &rec.problem}) {
    for (int i = 0; i < 20; ++i) {
      const auto omega = random_walk(*p, p->initial_context(), rng() % 5, rng);
      const double r = resourcefulness_default(omega, *p);
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
    }
  }
  for (const auto& c : corpus_cases()) {
    const auto l = load_case(c);
    const auto t = solve_mgp(l.problem, Policy{});
    const double r = resourcefulness_default(t.steps, l.problem);
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
    if (t.outcome == Outcome::Solved) CHECK(r == 1.0);
  }
}

TEST_CASE("resourcefulness is undefined without a world-level solution") {
  const auto w = fixtures::world_from("(:world c (:objects o) (:predicates (q ?x - object)))");
  const auto p = fixtures::problem_from("(:problem c1 (:world c) (:init) (:goal (q o)))", w);
  try {
    resourcefulness_default(Strategy{}, p);
    FAIL("expected MetricUndefined");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MetricUndefined);
  }
}

TEST_CASE("expected progress combines prior, likelihood and metric") {
  const auto lc = fixtures::block_towel(true);
  const auto reg = HypothesisRegistry::standard();
  const auto c = lc.problem.initial_context();
  Strategy insight;
  insight.steps.emplace_back(ModifyStep{Modification::extension({fixtures::schema_ref(*lc.world, "push")})});

  const auto full = expected_progress(insight, lc.problem, c, reg);
  double sum = 0;
  for (const auto& h : full.hypotheses) sum += h.prior * h.likelihood * h.r;
  CHECK(close(full.m, sum));
  CHECK(close(full.m, mixture_mass(insight, lc.problem, c, reg)));  // R = 1 everywhere

  ProgressOptions pure;
  pure.paper_pure = true;
  CHECK(close(expected_progress(insight, lc.problem, c, reg, pure).m, 1.0));

  ProgressOptions custom;
  custom.metric = [](const Strategy&, const Problem&, const Context&) { return 0.25; };
  custom.per_hypothesis["random"] = [](const Strategy&, const Problem&, const Context&) { return 7.0; };
  const auto mixed = expected_progress(insight, lc.problem, c, reg, custom);
  for (const auto& h : mixed.hypotheses) CHECK(h.r == (h.name == "random" ? 1.0 : 0.25));
}

TEST_CASE("continuation prediction") {
  const auto lc = fixtures::block_towel(true);
  const auto reg = HypothesisRegistry::standard();
  const auto c = lc.problem.initial_context();
  const World& w = *lc.world;
  Strategy good, odd;
  good.steps.emplace_back(ModifyStep{Modification::extension({fixtures::schema_ref(w, "push")})});
  odd.steps.emplace_back(ModifyStep{Modification::extension(
      {GeneratorRef{GeneratorKind::Predicate, *w.domain().find_predicate("covered")}})});
  // the random agent cannot tell the two apart and would swamp the others
  const HypothesisRegistry guided({plan_first_hypothesis(), oracle_guided_hypothesis()});
  const auto ranked = predict_continuation(Strategy{}, 1, {odd, good}, lc.problem, c, guided);
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].candidate == 1);
  CHECK(ranked[0].score > ranked[1].score);
  CHECK_THROWS_AS(predict_continuation(Strategy{}, 0, {good}, lc.problem, c, reg), Error);

  Strategy impossible;
  impossible.steps.emplace_back(ActStep{fixtures::action(w, "(push B L2 L3)")});
  try {
    predict_continuation(impossible, 1, {good}, lc.problem, c, HypothesisRegistry({plan_first_hypothesis()}));
    FAIL("expected UndefinedConditional");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UndefinedConditional);
  }
}
