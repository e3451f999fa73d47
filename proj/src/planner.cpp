#include "mgpkit/planner.hpp"

#include <algorithm>
#include <cstring>
#include <deque>

namespace mgpkit {

using simd::Word;

ActionTable::ActionTable(const SubdomainView& view) : ActionTable(view.world(), view.ground_actions()) {}

ActionTable::ActionTable(const World& world, std::vector<GroundActionId> ids)
    : ids_(std::move(ids)), words_(world.state_words()) {
  const std::size_t n = ids_.size() * words_;
  pre_pos_.resize(n);
  pre_neg_.resize(n);
  add_.resize(n);
  del_.resize(n);
  for (std::size_t row = 0; row < ids_.size(); ++row) {
    const std::size_t src = static_cast<std::size_t>(ids_[row]) * words_;
    const std::size_t dst = row * words_;
    std::copy_n(world.pre_pos_masks().data() + src, words_, pre_pos_.data() + dst);
    std::copy_n(world.pre_neg_masks().data() + src, words_, pre_neg_.data() + dst);
    std::copy_n(world.add_masks().data() + src, words_, add_.data() + dst);
    std::copy_n(world.del_masks().data() + src, words_, del_.data() + dst);
  }
}

simd::ActionTableView ActionTable::view() const {
  return {pre_pos_.data(), pre_neg_.data(), add_.data(), del_.data(), words_, ids_.size()};
}

StateStore::StateStore(std::size_t words) : words_(words), slots_(16, 0) {}

std::size_t StateStore::probe(const Word* state, std::uint64_t h) const {
  const std::size_t mask = slots_.size() - 1;
  std::size_t i = static_cast<std::size_t>(h) & mask;
  while (true) {
    const std::uint32_t slot = slots_[i];
    if (slot == 0) return i;
    const std::size_t idx = slot - 1;
    if (hashes_[idx] == h && std::memcmp(at(idx), state, words_ * sizeof(Word)) == 0) return i;
    i = (i + 1) & mask;
  }
}

void StateStore::grow() {
  std::vector<std::uint32_t> old(slots_.size() * 2, 0);
  slots_.swap(old);
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t idx = 0; idx < hashes_.size(); ++idx) {
    std::size_t i = static_cast<std::size_t>(hashes_[idx]) & mask;
    while (slots_[i] != 0) i = (i + 1) & mask;
    slots_[i] = static_cast<std::uint32_t>(idx + 1);
  }
}

std::pair<std::size_t, bool> StateStore::insert(const Word* state) {
  if ((hashes_.size() + 1) * 2 > slots_.size()) grow();
  const std::uint64_t h = simd::hash_words(state, words_);
  const std::size_t pos = probe(state, h);
  if (slots_[pos] != 0) return {slots_[pos] - 1, false};
  const std::size_t idx = hashes_.size();
  pool_.insert(pool_.end(), state, state + words_);
  hashes_.push_back(h);
  slots_[pos] = static_cast<std::uint32_t>(idx + 1);
  return {idx, true};
}

std::optional<std::size_t> StateStore::find(const Word* state) const {
  const std::size_t pos = probe(state, simd::hash_words(state, words_));
  if (slots_[pos] == 0) return std::nullopt;
  return slots_[pos] - 1;
}

State ReachableSet::state(std::size_t i) const {
  State s(universe);
  std::copy_n(store.at(i), store.words(), s.data());
  return s;
}

std::optional<std::size_t> ReachableSet::index_of(const State& s) const {
  if (s.universe() != universe || store.size() == 0) return std::nullopt;
  return store.find(s.data());
}

Plan ReachableSet::path_to(std::size_t i) const {
  Plan p;
  while (parent[i] != kNoParent) {
    p.actions.push_back(via[i]);
    i = parent[i];
  }
  std::reverse(p.actions.begin(), p.actions.end());
  return p;
}

std::vector<State> ReachableSet::states() const {
  std::vector<State> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(state(i));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Never-constraints compiled to the same shape as a precondition: a state is
// rejected when it contains a forbidden atom or lacks an atom whose absence
// is forbidden.
struct CompiledNever {
  std::vector<AtomId> present;
  std::vector<AtomId> absent;

  explicit CompiledNever(const NeverFilter& f) {
    for (const auto& l : f.forbidden) (l.negated ? absent : present).push_back(l.atom);
  }
  bool admits(const Word* s) const {
    for (AtomId a : present)
      if ((s[a >> 6] >> (a & 63)) & 1U) return false;
    for (AtomId a : absent)
      if (!((s[a >> 6] >> (a & 63)) & 1U)) return false;
    return true;
  }
};

struct GoalMasks {
  std::vector<Word> pos, neg;
  GoalMasks(const Goal& g, std::size_t words) : pos(words, 0), neg(words, 0) {
    for (AtomId a : g.positive) pos[a >> 6] |= Word{1} << (a & 63);
    for (AtomId a : g.negative) neg[a >> 6] |= Word{1} << (a & 63);
  }
};

bool relaxed_reachable(const SubdomainView& view, const State& s0, const Goal& goal, const NeverFilter& never) {
  const World& world = view.world();
  const std::size_t words = world.state_words();
  std::vector<Word> forbidden(words, 0);
  for (const auto& l : never.forbidden)
    if (!l.negated) forbidden[l.atom >> 6] |= Word{1} << (l.atom & 63);
  const auto& k = simd::active_kernels();
  std::vector<GroundActionId> pending;
  for (GroundActionId id : view.ground_actions()) {
    const Word* add = world.add_masks().data() + static_cast<std::size_t>(id) * words;
    bool adds_forbidden = false;
    for (std::size_t w = 0; w < words; ++w) adds_forbidden |= (add[w] & forbidden[w]) != 0;
    if (!adds_forbidden) pending.push_back(id);
  }
  std::vector<Word> reached(s0.data(), s0.data() + words);
  bool changed = true;
  while (changed) {
    changed = false;
    std::size_t keep = 0;
    for (GroundActionId id : pending) {
      const std::size_t row = static_cast<std::size_t>(id) * words;
      if (k.subset(world.pre_pos_masks().data() + row, reached.data(), words)) {
        const Word* add = world.add_masks().data() + row;
        for (std::size_t w = 0; w < words; ++w) reached[w] |= add[w];
        changed = true;
      } else {
        pending[keep++] = id;
      }
    }
    pending.resize(keep);
  }
  for (AtomId a : goal.positive)
    if (!((reached[a >> 6] >> (a & 63)) & 1U)) return false;
  return true;
}

// Shared BFS. Stops early when `goal` is given and a goal state is stored.
// Returns the index of the goal state, if found.
std::optional<std::size_t> bfs(const SubdomainView& view, const State& s0, const Goal* goal,
                               const NeverFilter& never, std::size_t cap, ReachableSet& out,
                               bool* pruned = nullptr) {
  if (cap < 1) throw Error(ErrorKind::Argument, "state cap must be at least 1");
  const World& world = view.world();
  if (s0.universe() != world.atom_count()) throw Error(ErrorKind::Input, "initial state does not belong to this world");

  const std::size_t words = world.state_words();
  out = ReachableSet{};
  out.universe = world.atom_count();
  out.store = StateStore(words);

  const CompiledNever filter(never);
  if (!filter.admits(s0.data())) return std::nullopt;

  const auto& k = simd::active_kernels();
  std::optional<GoalMasks> gm;
  if (goal) gm.emplace(*goal, words);
  auto is_goal = [&](const Word* s) { return gm && k.applicable(s, gm->pos.data(), gm->neg.data(), words); };

  out.store.insert(s0.data());
  out.parent.push_back(ReachableSet::kNoParent);
  out.via.push_back(0);
  if (is_goal(s0.data())) return 0;
  if (goal && !relaxed_reachable(view, s0, *goal, never)) {
    if (pruned) *pruned = true;
    return std::nullopt;
  }

  const ActionTable table(view);
  const auto tv = table.view();
  std::vector<std::uint32_t> rows(table.ids().size());
  std::vector<Word> current(words), next(words);

  for (std::size_t head = 0; head < out.store.size(); ++head) {
    std::copy_n(out.store.at(head), words, current.data());
    const std::size_t n = k.applicable_batch(current.data(), tv, rows.data());
    ++out.explored;
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t row = rows[r];
      k.apply(current.data(), tv.del + row * words, tv.add + row * words, next.data(), words);
      if (!filter.admits(next.data())) continue;
      if (out.store.find(next.data())) continue;
      if (out.store.size() >= cap) {
        out.truncated = true;
        return std::nullopt;
      }
      const auto [idx, inserted] = out.store.insert(next.data());
      (void)inserted;
      out.parent.push_back(static_cast<std::uint32_t>(head));
      out.via.push_back(table.ids()[row]);
      if (is_goal(next.data())) return idx;
    }
  }
  return std::nullopt;
}

}  // namespace

bool goal_relaxed_reachable(const SubdomainView& view, const State& s0, const Goal& goal, const NeverFilter& never) {
  return relaxed_reachable(view, s0, goal, never);
}

ReachableSet reachable(const SubdomainView& view, const State& s0, std::size_t cap, const NeverFilter& never) {
  ReachableSet out;
  bfs(view, s0, nullptr, never, cap, out);
  return out;
}

ReachableSet reachable(const WorldPtr& world, const State& s0, std::size_t cap, const NeverFilter& never) {
  return reachable(SubdomainView::whole(world), s0, cap, never);
}

SearchResult search(const SubdomainView& view, const State& s0, const Goal& goal, const NeverFilter& never,
                    std::size_t cap) {
  ReachableSet rs;
  SearchResult r;
  const auto hit = bfs(view, s0, &goal, never, cap, rs, &r.pruned);
  if (hit) r.plan = rs.path_to(*hit);
  r.truncated = rs.truncated;
  r.states = rs.size();
  r.explored = rs.explored;
  return r;
}

std::optional<Plan> shortest_plan(const SubdomainView& view, const State& s0, const Goal& goal,
                                  const NeverFilter& never, std::size_t cap) {
  return search(view, s0, goal, never, cap).plan;
}

PlanCheck validate_plan(const SubdomainView& view, const State& s0, const Plan& plan, const Goal& goal,
                        const NeverFilter& never) {
  const World& world = view.world();
  if (!never.admits(s0)) return {false, 0, "initial state violates a never-constraint"};
  State s = s0;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const GroundActionId id = plan.actions[i];
    if (id >= world.actions().size()) return {false, i, "unknown action id"};
    if (!view.admits(id)) return {false, i, world.action_string(id) + " is not available in the subdomain"};
    const auto& a = world.action(id);
    if (!applicable(s, a)) return {false, i, world.action_string(id) + " is not applicable"};
    s = apply_action(s, a);
    if (!never.admits(s)) return {false, i, world.action_string(id) + " reaches a forbidden state"};
  }
  if (!entails_goal(s, goal)) return {false, plan.size(), "final state does not entail the goal"};
  return {true, plan.size(), ""};
}

State run_plan(const World& world, const State& s0, const Plan& plan) {
  State s = s0;
  for (GroundActionId id : plan.actions) s = apply_action(s, world.action(id));
  return s;
}

}  // namespace mgpkit
