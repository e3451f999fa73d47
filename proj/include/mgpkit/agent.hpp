#pragma once

// Simulated agents. An agent holds only its subdomain view; hidden
// generators reach it through extension requests that a simulated
// environment answers from the world.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mgpkit/mgp.hpp"

namespace mgpkit {

enum class PolicyKind { RandomExplorer, PlanFirstExplorer, OracleGuided };

const char* to_string(PolicyKind k);
std::optional<PolicyKind> parse_policy_kind(std::string_view s);

struct Policy {
  PolicyKind kind = PolicyKind::PlanFirstExplorer;
  std::uint64_t seed = 0;
  std::size_t exploration_budget = 32;  // extension requests before giving up
  std::size_t relaxation_depth = 1;     // ancestor levels a relaxation may climb
};

enum class Outcome { Solved, GaveUp, BudgetExhausted };

const char* to_string(Outcome o);

struct StrategyTrace {
  Strategy steps;
  Outcome outcome = Outcome::GaveUp;
  std::vector<Context> contexts;  // front() is the initial context
  std::optional<Plan> solved_plan;
  std::size_t requests = 0;       // extension requests, granted or not
};

/// Throws Error(Argument) for an unusable policy.
StrategyTrace solve_mgp(const Problem& p, const Policy& policy, const Budget& budget = {});

/// Copy of `schema` with parameter `param_index` retyped to `new_sort`,
/// named "<name>~<index>". Throws Error(Relaxation) unless `new_sort` is a
/// proper ancestor of the current sort, Error(Argument) for a bad index.
ActionSchema relax_schema(const PlanningDomain& domain, const ActionSchema& schema, std::size_t param_index,
                          SortId new_sort);

/// Relaxations of every schema in the view, climbing at most `depth` sort
/// levels per parameter. Deterministic order: schema, parameter, level.
std::vector<ActionSchema> relaxation_candidates(const SubdomainView& view, std::size_t depth);

/// One JSON object per step, then {"kind":"outcome",...}.
void write_trace_jsonl(std::ostream& out, const World& world, const StrategyTrace& trace);
std::string trace_jsonl(const World& world, const StrategyTrace& trace);

struct ParsedTrace {
  Strategy steps;
  std::optional<Outcome> outcome;
};
/// Throws Error(Input) on malformed lines or names unknown to the world.
ParsedTrace read_trace_jsonl(std::istream& in, const World& world);

}  // namespace mgpkit
