#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "mgpkit/model.hpp"

using namespace mgpkit;

TEST_CASE("canonical ids follow name order") {
  const auto lc = fixtures::block_towel(false);
  const auto& d = lc.world->domain();
  for (std::size_t i = 1; i < d.objects.size(); ++i) CHECK(d.objects[i - 1].name < d.objects[i].name);
  for (std::size_t i = 1; i < d.predicates.size(); ++i) CHECK(d.predicates[i - 1].name < d.predicates[i].name);
  for (std::size_t i = 1; i < d.schemas.size(); ++i) CHECK(d.schemas[i - 1].name < d.schemas[i].name);

  PlanningDomain shuffled = d;
  std::swap(shuffled.objects[0], shuffled.objects[3]);
  DomainRemap remap;
  const auto back = canonicalize(shuffled, &remap);
  CHECK(back.objects == d.objects);
  CHECK(remap.objects[0] == 3);
  CHECK(remap.objects[3] == 0);
}

TEST_CASE("atoms and ground actions of the block world") {
  const auto lc = fixtures::block_towel(false);
  const World& w = *lc.world;
  // at 2x3, near 3, touching 2, holding 2, covered 2x2
  CHECK(w.atom_count() == 17);
  const auto& d = w.domain();
  CHECK(ground_schema(d.schemas[*d.find_schema("reach")], d).size() == 6);
  CHECK(ground_schema(d.schemas[*d.find_schema("push")], d).size() == 18);

  const auto at = *d.find_predicate("at");
  const ObjectId b = *d.find_object("B"), l2 = *d.find_object("L2");
  const std::vector<ObjectId> args{b, l2};
  REQUIRE(w.atoms().find(at, args));
  CHECK(w.atom_string(*w.atoms().find(at, args)) == "(at B L2)");
  const std::vector<ObjectId> bad{l2, b};
  CHECK_FALSE(w.atoms().find(at, bad));
}

TEST_CASE("delete effects never remove what the action adds") {
  const auto lc = fixtures::block_towel(false);
  const World& w = *lc.world;
  const auto& self_push = w.action(fixtures::action(w, "(push B L2 L2)"));
  for (AtomId a : self_push.add)
    CHECK(std::find(self_push.del.begin(), self_push.del.end(), a) == self_push.del.end());

  State s = lc.problem.init;
  s = apply_action(s, w.action(fixtures::action(w, "(reach B L2)")));
  s = apply_action(s, self_push);
  CHECK(w.atom_string(s.ids().front()).size() > 0);
  bool at_b_l2 = false, near_l2 = false;
  for (AtomId a : s.ids()) {
    at_b_l2 |= w.atom_string(a) == "(at B L2)";
    near_l2 |= w.atom_string(a) == "(near L2)";
  }
  CHECK(at_b_l2);
  CHECK(near_l2);
}

TEST_CASE("applying an inapplicable action throws") {
  const auto lc = fixtures::block_towel(false);
  const World& w = *lc.world;
  const auto& grasp = w.action(fixtures::action(w, "(grasp B L2)"));
  CHECK_FALSE(applicable(lc.problem.init, grasp));
  try {
    (void)apply_action(lc.problem.init, grasp);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}

TEST_CASE("agent view hides the hidden generators") {
  const auto lc = fixtures::block_towel(false);
  const World& w = *lc.world;
  const auto agent = SubdomainView::agent(lc.world);
  const auto whole = SubdomainView::whole(lc.world);
  CHECK(whole.is_whole_world());
  CHECK_FALSE(agent.is_whole_world());
  const auto push = fixtures::action(w, "(push B L2 L3)");
  CHECK(whole.admits(push));
  CHECK_FALSE(agent.admits(push));
  CHECK(agent.ground_actions().size() + 18 == whole.ground_actions().size());

  const auto covered = *w.domain().find_predicate("covered");
  std::size_t expressible = 0;
  for (AtomId a = 0; a < w.atom_count(); ++a) {
    expressible += agent.can_express(a);
    if (w.atoms().atom(a).predicate == covered) CHECK_FALSE(agent.can_express(a));
  }
  CHECK(expressible == 13);

  State s(w.atom_count());
  for (AtomId a = 0; a < w.atom_count(); ++a) s.set(a);
  CHECK(agent.observe(s).count() == 13);
}

TEST_CASE("modifications check their payload") {
  const auto lc = fixtures::block_towel(true);
  const World& w = *lc.world;
  const auto view = lc.problem.subdomain;
  const auto push = fixtures::schema_ref(w, "push");
  const auto reach = fixtures::schema_ref(w, "reach");

  const auto ext = apply_modification(view, Modification::extension({push}));
  CHECK(ext.mask().contains(push));
  CHECK(apply_modification(ext, Modification::contraction({push})) == view);

  auto kind_of = [&](const Modification& m) {
    try {
      check_modification(view, m);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Input;  // no error
  };
  CHECK(kind_of(Modification::extension({reach})) == ErrorKind::Modification);
  CHECK(kind_of(Modification::contraction({push})) == ErrorKind::Modification);
  CHECK(kind_of(Modification::extension({})) == ErrorKind::Modification);
  CHECK(kind_of(Modification::extension({GeneratorRef{GeneratorKind::Object, 999}})) == ErrorKind::World);
  CHECK(kind_of(Modification::extension({push})) == ErrorKind::Input);
}

TEST_CASE("generator masks") {
  const auto lc = fixtures::block_towel(false);
  const auto& d = lc.world->domain();
  const auto all = GeneratorMask::all(d);
  const auto hidden = lc.world->hidden();
  CHECK(hidden.size() == 2);
  CHECK(hidden.complement().size() + 2 == all.size());
  CHECK(hidden.is_subset_of(all));
  CHECK_FALSE(all.is_subset_of(hidden));
  auto m = GeneratorMask::none(d);
  m.insert(fixtures::schema_ref(*lc.world, "push"));
  CHECK(m.members().size() == 1);
  m.erase(fixtures::schema_ref(*lc.world, "push"));
  CHECK(m.size() == 0);
}

TEST_CASE("strategy execution reports the failing step") {
  const auto lc = fixtures::block_towel(true);
  const World& w = *lc.world;
  const auto push = fixtures::schema_ref(w, "push");

  Strategy good;
  good.steps.emplace_back(ModifyStep{Modification::extension({push})});
  good.steps.emplace_back(ActStep{fixtures::action(w, "(reach B L2)")});
  good.steps.emplace_back(ActStep{fixtures::action(w, "(push B L2 L3)")});
  const auto trace = execute_strategy(lc.problem.initial_context(), good, lc.problem.never);
  REQUIRE(trace.size() == 4);
  CHECK(entails_goal(trace.back().state, lc.problem.goal));

  const auto proj = project_strategy(good);
  CHECK(proj.domain_modifying());
  CHECK(proj.plan.size() == 2);
  CHECK(proj.delta.size() == 1);

  Strategy outside;
  outside.steps.emplace_back(ActStep{fixtures::action(w, "(reach B L2)")});
  outside.steps.emplace_back(ActStep{fixtures::action(w, "(push B L2 L3)")});
  try {
    execute_strategy(lc.problem.initial_context(), outside, lc.problem.never);
    FAIL("expected an error");
  } catch (const ExecutionError& e) {
    CHECK(e.step() == 1);
  }

  Strategy forbidden;
  forbidden.steps.emplace_back(ActStep{fixtures::action(w, "(reach B L2)")});
  forbidden.steps.emplace_back(ActStep{fixtures::action(w, "(grasp B L2)")});
  try {
    execute_strategy(lc.problem.initial_context(), forbidden, lc.problem.never);
    FAIL("expected an error");
  } catch (const ExecutionError& e) {
    CHECK(e.step() == 1);
    CHECK(std::string(e.what()).find("never") != std::string::npos);
  }
}

TEST_CASE("goal literals include negative ones") {
  const auto lc = fixtures::block_towel(false);
  const auto& g = lc.problem.goal;
  CHECK(g.positive.size() == 1);
  CHECK(g.negative.size() == 2);
  CHECK(Goal::from_literals(g.literals()) == g);
  CHECK_FALSE(entails_goal(lc.problem.init, g));
}
