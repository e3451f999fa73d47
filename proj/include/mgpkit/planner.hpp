#pragma once

// Breadth-first reachability and optimal plan search over a subdomain view.
//
// States are always full world-level states; a view only restricts which
// ground actions may fire. Actions are expanded in ascending id order, so the
// first plan found is the lexicographically least among the shortest.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mgpkit/model.hpp"

namespace mgpkit {

inline constexpr std::size_t kDefaultStateCap = 1'000'000;

/// The ground actions of a view laid out for the batch kernels.
class ActionTable {
 public:
  explicit ActionTable(const SubdomainView& view);
  ActionTable(const World& world, std::vector<GroundActionId> ids);

  simd::ActionTableView view() const;
  const std::vector<GroundActionId>& ids() const { return ids_; }
  std::size_t words() const { return words_; }

 private:
  std::vector<GroundActionId> ids_;
  std::size_t words_ = 0;
  std::vector<simd::Word> pre_pos_, pre_neg_, add_, del_;
};

/// Insertion-ordered set of fixed-width states with open addressing.
class StateStore {
 public:
  StateStore() : StateStore(0) {}
  explicit StateStore(std::size_t words);

  /// (index, inserted)
  std::pair<std::size_t, bool> insert(const simd::Word* state);
  std::optional<std::size_t> find(const simd::Word* state) const;

  const simd::Word* at(std::size_t i) const { return pool_.data() + i * words_; }
  std::size_t size() const { return hashes_.size(); }
  std::size_t words() const { return words_; }

 private:
  void grow();
  std::size_t probe(const simd::Word* state, std::uint64_t h) const;

  std::size_t words_;
  std::vector<simd::Word> pool_;
  std::vector<std::uint64_t> hashes_;
  std::vector<std::uint32_t> slots_;  // index + 1, 0 = empty
};

struct ReachableSet {
  std::size_t universe = 0;
  StateStore store;
  std::vector<std::uint32_t> parent;  // kNoParent for the root
  std::vector<GroundActionId> via;
  bool truncated = false;
  std::size_t explored = 0;  // states whose successors were generated

  static constexpr std::uint32_t kNoParent = UINT32_MAX;

  std::size_t size() const { return store.size(); }
  State state(std::size_t i) const;
  std::optional<std::size_t> index_of(const State& s) const;
  bool contains(const State& s) const { return index_of(s).has_value(); }
  /// Actions leading from the root to state i.
  Plan path_to(std::size_t i) const;
  /// All states in canonical order.
  std::vector<State> states() const;
};

/// Breadth-first closure of s0 under the view's actions. States rejected by
/// `never` are neither stored nor expanded; a rejected s0 gives an empty set.
/// Throws Error(Argument) when cap < 1.
ReachableSet reachable(const SubdomainView& view, const State& s0, std::size_t cap = kDefaultStateCap,
                       const NeverFilter& never = {});
ReachableSet reachable(const WorldPtr& world, const State& s0, std::size_t cap = kDefaultStateCap,
                       const NeverFilter& never = {});

/// Delete-relaxed reachability: false proves the goal unreachable. Deletes
/// and negative conditions are ignored; actions that would add an atom a
/// never-constraint forbids are dropped, since they can never fire.
bool goal_relaxed_reachable(const SubdomainView& view, const State& s0, const Goal& goal,
                            const NeverFilter& never = {});

struct SearchResult {
  std::optional<Plan> plan;
  bool truncated = false;  // cap hit before a plan was found
  bool pruned = false;     // settled by goal_relaxed_reachable without search
  std::size_t states = 0;
  std::size_t explored = 0;
};

SearchResult search(const SubdomainView& view, const State& s0, const Goal& goal, const NeverFilter& never = {},
                    std::size_t cap = kDefaultStateCap);

/// Shortest plan, lexicographically least among equals; nullopt when none
/// exists (or the cap was hit; use search() to tell these apart).
std::optional<Plan> shortest_plan(const SubdomainView& view, const State& s0, const Goal& goal,
                                  const NeverFilter& never = {}, std::size_t cap = kDefaultStateCap);

struct PlanCheck {
  bool valid = false;
  std::size_t failure_index = 0;  // first bad step, or plan size when the goal fails
  std::string reason;
};

PlanCheck validate_plan(const SubdomainView& view, const State& s0, const Plan& plan, const Goal& goal,
                        const NeverFilter& never = {});

/// Final state of running `plan` from s0 with no checks beyond applicability.
State run_plan(const World& world, const State& s0, const Plan& plan);

}  // namespace mgpkit
