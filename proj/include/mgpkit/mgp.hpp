#pragma once

// MacGyver-problem classification, the plan-existence reduction, insightful
// strategy checks, minimal extension search, optimal strategies and the
// compression-based M-number.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mgpkit/lang.hpp"
#include "mgpkit/planner.hpp"
#include "mgpkit/problem.hpp"

namespace mgpkit {

enum class MgpStatus { SolvableInSubdomain, Mgp, UnsolvableInWorld, UnknownBudget };

const char* to_string(MgpStatus s);

struct Budget {
  std::size_t state_cap = kDefaultStateCap;  // per search
  std::size_t subset_cap = 4096;             // extension subsets tried
};

/// How "the goal is reachable" is read. Existential: some reachable state
/// entails the goal. Universal: every state of the relevant set does.
enum class Quantifier { Existential, Universal };

struct ReachSummary {
  std::size_t states = 0;
  std::size_t explored = 0;
  bool truncated = false;
  bool goal_reachable = false;
  bool pruned = false;  // unreachability shown by the relaxed check, no search
};

struct MgpVerdict {
  MgpStatus status = MgpStatus::UnknownBudget;
  std::optional<Plan> witness;  // shortest world-level plan, when one was found
  ReachSummary subdomain;
  ReachSummary world;
  /// Literal universal reading: the states reachable in the world but not in
  /// the subdomain form a nonempty set whose every member entails the goal.
  /// Only computed for Quantifier::Universal and complete searches.
  std::optional<bool> universal_mgp;
};

/// Throws Error(Input) when s0 is not a state of the world or violates a
/// never-constraint.
MgpVerdict classify_problem(const Problem& p, const Budget& budget = {},
                            Quantifier quantifier = Quantifier::Existential);

struct ClassicalProblem {
  WorldPtr world;  // hidden generators, if any, are ignored
  State init;
  Goal goal;
};

struct Reduction {
  Problem problem;
  std::vector<Diagnostic> warnings;  // renamed fresh symbols
};

/// World = classical domain + hidden predicates goalStar, warpGuard and a
/// hidden schema warp_1 that fires from any state (its guard holds in s0 and
/// is never deleted) and makes the goal true. Subdomain = the classical
/// domain. The goal is unchanged.
Reduction reduce_to_mgp(const ClassicalProblem& classical);

/// True iff ω modifies the domain and the goal is reachable inside the
/// subdomain it ends in. Throws ExecutionError when ω cannot run from c.
bool is_insightful(const Context& c, const Problem& p, const Strategy& omega, const Budget& budget = {},
                   Quantifier quantifier = Quantifier::Existential);

struct ExtensionSearch {
  std::vector<std::vector<GeneratorRef>> sets;  // by cardinality, then lexicographic
  bool partial = false;                         // a cap was hit somewhere
  std::size_t subsets_tried = 0;
};

/// Generators of the world outside the problem's subdomain, ascending.
std::vector<GeneratorRef> extension_pool(const Problem& p);

/// Inclusion-minimal subsets of the extension pool whose addition makes the
/// goal reachable. Empty when the problem is already solvable.
ExtensionSearch minimal_extensions(const Problem& p, const Budget& budget = {});

/// Extension steps (one generator per step) followed by the plan.
Strategy make_strategy(std::span<const GeneratorRef> delta, const Plan& plan);

struct OptimalStrategies {
  StrategySet optimal;     // modifications first, then the plan
  StrategySet insightful;  // the modification prefixes
  std::size_t delta_size = 0;
  std::size_t plan_length = 0;
  bool partial = false;
};

/// Throws Error(NotMgp) unless classify_problem says MGP.
OptimalStrategies optimal_strategies(const Problem& p, const Budget& budget = {});

/// 8 * compressed length of the set's canonical bytes.
std::size_t m_number(const StrategySet& insightful);

}  // namespace mgpkit
