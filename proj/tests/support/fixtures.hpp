#pragma once

// Small helpers shared by the unit tests.

#include <stdexcept>
#include <string>

#include "mgpkit/bench.hpp"
#include "mgpkit/lang.hpp"

namespace fixtures {

inline mgpkit::WorldPtr world_from(const std::string& text) {
  auto r = mgpkit::parse_world({text, "test.world"});
  if (!r.ok()) throw std::runtime_error(r.diagnostics.front().format("test.world"));
  return *r.value;
}

inline mgpkit::Problem problem_from(const std::string& text, const mgpkit::WorldPtr& w) {
  auto r = mgpkit::parse_problem({text, "test.problem"}, w);
  if (!r.ok()) throw std::runtime_error(r.diagnostics.front().format("test.problem"));
  return *r.value;
}

inline mgpkit::LoadedCase block_towel(bool notouch) {
  return mgpkit::load_case(mgpkit::build_block_towel(notouch ? mgpkit::BlockTowelVariant::NoTouch
                                                             : mgpkit::BlockTowelVariant::Baseline));
}

inline mgpkit::LoadedCase screwdriver(mgpkit::ScrewdriverVariant v) {
  return mgpkit::load_case(mgpkit::build_screwdriver(v));
}

/// Ground action by its printed form, e.g. "(reach B L2)".
inline mgpkit::GroundActionId action(const mgpkit::World& w, const std::string& text) {
  for (mgpkit::GroundActionId id = 0; id < w.actions().size(); ++id)
    if (w.action_string(id) == text) return id;
  throw std::runtime_error("no ground action " + text);
}

inline mgpkit::Plan plan_of(const mgpkit::World& w, std::initializer_list<const char*> steps) {
  mgpkit::Plan p;
  for (const char* s : steps) p.actions.push_back(action(w, s));
  return p;
}

inline mgpkit::GeneratorRef schema_ref(const mgpkit::World& w, const std::string& name) {
  const auto id = w.domain().find_schema(name);
  if (!id) throw std::runtime_error("no schema " + name);
  return {mgpkit::GeneratorKind::Schema, *id};
}

inline std::string plan_text(const mgpkit::World& w, const mgpkit::Plan& p) {
  std::string s;
  for (auto id : p.actions) s += w.action_string(id);
  return s;
}

}  // namespace fixtures
