#pragma once

#include <string>
#include <vector>

#include "mgpkit/model.hpp"

namespace mgpkit {

/// A candidate MacGyver problem: a world, the agent's subdomain inside it,
/// the initial state, the goal, and never-constraints filtering states.
struct Problem {
  std::string name;
  WorldPtr world;
  SubdomainView subdomain;
  State init;
  Goal goal;
  NeverFilter never;

  Context initial_context() const { return Context{subdomain, init}; }
};

enum class StrategySetKind : std::uint8_t { Optimal, OptimalInsightful };

/// Deduplicated, canonically ordered set of strategies over one world.
class StrategySet {
 public:
  StrategySet(WorldPtr world, StrategySetKind kind) : world_(std::move(world)), kind_(kind) {}

  /// Inserts unless an equal strategy is already present. Keeps canonical
  /// (serialized-byte) order.
  void insert(Strategy s);

  const WorldPtr& world() const { return world_; }
  StrategySetKind kind() const { return kind_; }
  const std::vector<Strategy>& strategies() const { return strategies_; }
  std::size_t size() const { return strategies_.size(); }
  bool empty() const { return strategies_.empty(); }

 private:
  WorldPtr world_;
  StrategySetKind kind_;
  std::vector<Strategy> strategies_;
};

}  // namespace mgpkit
