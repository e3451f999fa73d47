#pragma once

// Value types and transition semantics for worlds, agent subdomains,
// domain modifications and strategies.
//
// A domain is stored intensionally as (sorts, predicates, objects, action
// schemas). The state set, action set and transition function are induced
// by grounding. States are closed-world: an atom absent from a state is
// false.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mgpkit/atom_set.hpp"
#include "mgpkit/error.hpp"

namespace mgpkit {

using SortId = std::uint32_t;
using PredicateId = std::uint32_t;
using ObjectId = std::uint32_t;
using SchemaId = std::uint32_t;
using GroundActionId = std::uint32_t;

inline constexpr std::string_view kRootSortName = "object";

struct Sort {
  std::string name;
  std::optional<SortId> parent;  // empty only for the root sort

  friend bool operator==(const Sort&, const Sort&) = default;
};

struct PredicateSchema {
  std::string name;
  std::vector<SortId> arg_sorts;

  std::size_t arity() const { return arg_sorts.size(); }
  friend bool operator==(const PredicateSchema&, const PredicateSchema&) = default;
};

struct ObjectConst {
  std::string name;
  SortId sort = 0;

  friend bool operator==(const ObjectConst&, const ObjectConst&) = default;
};

/// Argument of an atom template: a schema parameter or an object constant.
struct Term {
  enum class Kind : std::uint8_t { Variable, Constant };
  Kind kind = Kind::Variable;
  std::uint32_t index = 0;  // parameter index or ObjectId

  static Term variable(std::uint32_t param) { return {Kind::Variable, param}; }
  static Term constant(ObjectId object) { return {Kind::Constant, object}; }

  friend auto operator<=>(const Term&, const Term&) = default;
};

/// Signed atom template used in preconditions and effects.
struct AtomTemplate {
  PredicateId predicate = 0;
  std::vector<Term> args;
  bool negated = false;

  friend auto operator<=>(const AtomTemplate&, const AtomTemplate&) = default;
};

struct Parameter {
  std::string name;
  SortId sort = 0;

  friend bool operator==(const Parameter&, const Parameter&) = default;
};

struct ActionSchema {
  std::string name;
  std::vector<Parameter> params;
  std::vector<AtomTemplate> preconditions;
  std::vector<AtomTemplate> effects;

  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

class PlanningDomain {
 public:
  PlanningDomain();

  std::vector<Sort> sorts;  // sorts[0] is the root "object"
  std::vector<PredicateSchema> predicates;
  std::vector<ObjectConst> objects;
  std::vector<ActionSchema> schemas;

  std::optional<SortId> find_sort(std::string_view name) const;
  std::optional<PredicateId> find_predicate(std::string_view name) const;
  std::optional<ObjectId> find_object(std::string_view name) const;
  std::optional<SchemaId> find_schema(std::string_view name) const;

  /// True when `sort` equals `ancestor` or descends from it.
  bool is_subsort(SortId sort, SortId ancestor) const;

  /// Objects whose sort is `sort` or one of its descendants, ascending id.
  std::vector<ObjectId> objects_of_sort(SortId sort) const;

  /// Throws Error(Schema) on dangling references, arity mismatches,
  /// duplicate names, unbound template variables, or a template that a
  /// schema both adds and deletes.
  void validate() const;

  friend bool operator==(const PlanningDomain&, const PlanningDomain&) = default;
};

/// Sorts predicates, objects and schemas by name (renumbering every
/// reference) and sorts/deduplicates each schema's templates. Interned ids
/// therefore follow name order, which fixes every downstream ordering.
/// `remap` receives the old->new id maps when non-null.
struct DomainRemap {
  std::vector<PredicateId> predicates;
  std::vector<ObjectId> objects;
  std::vector<SchemaId> schemas;
};
PlanningDomain canonicalize(PlanningDomain domain, DomainRemap* remap = nullptr);

// ---------------------------------------------------------------------------
// Grounding

struct GroundAtom {
  PredicateId predicate = 0;
  std::vector<ObjectId> args;
};

struct GroundAction {
  SchemaId schema = 0;
  std::vector<ObjectId> binding;
  std::vector<AtomId> pre_pos;
  std::vector<AtomId> pre_neg;
  std::vector<AtomId> add;
  std::vector<AtomId> del;  // never intersects `add`
  std::vector<PredicateId> predicates_used;
  std::vector<ObjectId> objects_used;
};

/// Enumerates every sort-respecting ground atom of a domain. Atom ids run
/// predicate by predicate, arguments in lexicographic object-id order.
class AtomIndex {
 public:
  explicit AtomIndex(const PlanningDomain& domain);

  std::size_t size() const { return atoms_.size(); }
  const GroundAtom& atom(AtomId id) const { return atoms_[id]; }
  std::optional<AtomId> find(PredicateId predicate, std::span<const ObjectId> args) const;

 private:
  struct PredicateTable {
    AtomId offset = 0;
    std::vector<std::vector<std::int32_t>> position;  // per arg: object -> slot or -1
    std::vector<std::size_t> extent;                  // candidates per arg
  };
  std::vector<GroundAtom> atoms_;
  std::vector<PredicateTable> tables_;
};

/// All ground actions of `schema`, ordered by binding (lexicographic over
/// object ids). Bindings that would build an ill-sorted atom are skipped.
std::vector<GroundAction> ground_schema(const ActionSchema& schema, const PlanningDomain& domain,
                                        const AtomIndex& atoms, SchemaId schema_id = 0);
std::vector<GroundAction> ground_schema(const ActionSchema& schema, const PlanningDomain& domain);

// ---------------------------------------------------------------------------
// Generators and worlds

enum class GeneratorKind : std::uint8_t { Predicate, Object, Schema };

struct GeneratorRef {
  GeneratorKind kind = GeneratorKind::Predicate;
  std::uint32_t index = 0;

  friend auto operator<=>(const GeneratorRef&, const GeneratorRef&) = default;
};

/// Subset selector over the three generator families of a domain.
class GeneratorMask {
 public:
  GeneratorMask() = default;
  GeneratorMask(std::size_t predicates, std::size_t objects, std::size_t schemas, bool value);
  static GeneratorMask none(const PlanningDomain& d) { return {d.predicates.size(), d.objects.size(), d.schemas.size(), false}; }
  static GeneratorMask all(const PlanningDomain& d) { return {d.predicates.size(), d.objects.size(), d.schemas.size(), true}; }

  bool contains(GeneratorRef g) const;
  void insert(GeneratorRef g);
  void erase(GeneratorRef g);

  bool has_predicate(PredicateId p) const { return predicates_[p]; }
  bool has_object(ObjectId o) const { return objects_[o]; }
  bool has_schema(SchemaId s) const { return schemas_[s]; }

  /// Members in (kind, index) order.
  std::vector<GeneratorRef> members() const;
  std::size_t size() const;
  GeneratorMask complement() const;
  bool is_subset_of(const GeneratorMask& other) const;
  bool same_shape(const GeneratorMask& other) const;

  friend bool operator==(const GeneratorMask&, const GeneratorMask&) = default;

 private:
  const std::vector<bool>& family(GeneratorKind k) const;
  std::vector<bool>& family(GeneratorKind k);

  std::vector<bool> predicates_;
  std::vector<bool> objects_;
  std::vector<bool> schemas_;
};

/// A world: a well-formed planning domain plus the species tag and the
/// generators hidden from the species' agents at the start.
class World {
 public:
  World(std::string name, std::string species, PlanningDomain domain, GeneratorMask hidden);

  const std::string& name() const { return name_; }
  const std::string& species() const { return species_; }
  const PlanningDomain& domain() const { return domain_; }
  const GeneratorMask& hidden() const { return hidden_; }

  const AtomIndex& atoms() const { return atoms_; }
  std::size_t atom_count() const { return atoms_.size(); }
  const std::vector<GroundAction>& actions() const { return actions_; }
  const GroundAction& action(GroundActionId id) const { return actions_[id]; }

  /// First action id of each schema; schema s owns [first[s], first[s+1]).
  std::span<const GroundActionId> schema_offsets() const { return schema_offsets_; }
  std::optional<GroundActionId> find_action(SchemaId schema, std::span<const ObjectId> binding) const;

  std::string atom_string(AtomId id) const;
  std::string action_string(GroundActionId id) const;
  std::string generator_string(GeneratorRef g) const;

  /// Flattened masks for the kernels, row-major per ground action.
  const std::vector<simd::Word>& pre_pos_masks() const { return pre_pos_; }
  const std::vector<simd::Word>& pre_neg_masks() const { return pre_neg_; }
  const std::vector<simd::Word>& add_masks() const { return add_; }
  const std::vector<simd::Word>& del_masks() const { return del_; }
  std::size_t state_words() const { return (atoms_.size() + 63) / 64; }

 private:
  std::string name_;
  std::string species_;
  PlanningDomain domain_;
  GeneratorMask hidden_;
  AtomIndex atoms_;
  std::vector<GroundAction> actions_;
  std::vector<GroundActionId> schema_offsets_;
  std::vector<simd::Word> pre_pos_, pre_neg_, add_, del_;
};

using WorldPtr = std::shared_ptr<const World>;

WorldPtr make_world(std::string name, std::string species, PlanningDomain domain,
                    GeneratorMask hidden);

// ---------------------------------------------------------------------------
// States, views, modifications, strategies

using State = AtomSet;

struct Literal {
  AtomId atom = 0;
  bool negated = false;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// Goal as signed ground literals; closed-world, so a negated literal holds
/// when its atom is absent.
struct Goal {
  std::vector<AtomId> positive;
  std::vector<AtomId> negative;

  static Goal from_literals(std::span<const Literal> literals);
  std::vector<Literal> literals() const;
  bool empty() const { return positive.empty() && negative.empty(); }
  friend bool operator==(const Goal&, const Goal&) = default;
};

bool entails_goal(const State& state, std::span<const AtomId> goal);
bool entails_goal(const State& state, const Goal& goal);

bool applicable(const State& state, const GroundAction& action);

/// (state \ del) ∪ add. Throws Error(Precondition) when not applicable.
State apply_action(const State& state, const GroundAction& action);

class SubdomainView {
 public:
  SubdomainView(WorldPtr world, GeneratorMask selected);

  /// Every generator of the world.
  static SubdomainView whole(WorldPtr world);
  /// The world minus its hidden generators.
  static SubdomainView agent(WorldPtr world);

  const World& world() const { return *world_; }
  const WorldPtr& world_ptr() const { return world_; }
  const GeneratorMask& mask() const { return mask_; }

  bool is_whole_world() const;
  bool admits(const GroundAction& action) const;
  bool admits(GroundActionId id) const { return admits(world_->action(id)); }
  bool can_express(AtomId atom) const;

  /// Ground actions available in this view, ascending id.
  std::vector<GroundActionId> ground_actions() const;

  /// The atoms of `state` expressible in the view's vocabulary.
  State observe(const State& state) const;

  friend bool operator==(const SubdomainView& a, const SubdomainView& b) {
    return a.world_ == b.world_ && a.mask_ == b.mask_;
  }

 private:
  WorldPtr world_;
  GeneratorMask mask_;
};

enum class ModificationKind : std::uint8_t { Extension, Contraction };

struct Modification {
  ModificationKind kind = ModificationKind::Extension;
  std::vector<GeneratorRef> payload;  // sorted, unique, nonempty

  static Modification extension(std::vector<GeneratorRef> payload);
  static Modification contraction(std::vector<GeneratorRef> payload);

  friend auto operator<=>(const Modification&, const Modification&) = default;
};

/// Throws Error(World) for references outside the world and
/// Error(Modification) for overlap / missing payload or an empty payload.
void check_modification(const SubdomainView& view, const Modification& m);
SubdomainView apply_modification(const SubdomainView& view, const Modification& m);

struct Plan {
  std::vector<GroundActionId> actions;

  std::size_t size() const { return actions.size(); }
  bool empty() const { return actions.empty(); }
  friend bool operator==(const Plan&, const Plan&) = default;
};

struct ActStep {
  GroundActionId action = 0;
  friend auto operator<=>(const ActStep&, const ActStep&) = default;
};
struct ModifyStep {
  Modification modification;
  friend auto operator<=>(const ModifyStep&, const ModifyStep&) = default;
};
using StrategyStep = std::variant<ActStep, ModifyStep>;

/// Ordered interleaving of actions and domain modifications.
struct Strategy {
  std::vector<StrategyStep> steps;

  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }
  Strategy concat(const Strategy& tail) const;
  friend bool operator==(const Strategy&, const Strategy&) = default;
};

Strategy strategy_from_plan(const Plan& plan);

struct StrategyProjection {
  Plan plan;
  std::vector<Modification> delta;  // as a set: sorted, unique

  bool domain_modifying() const { return !delta.empty(); }
};

StrategyProjection project_strategy(const Strategy& strategy);

struct Context {
  SubdomainView subdomain;
  State state;

  friend bool operator==(const Context&, const Context&) = default;
};

/// State filter compiled from never-constraints: a state is admitted when
/// it makes none of the forbidden literals true.
struct NeverFilter {
  std::vector<Literal> forbidden;

  bool admits(const State& state) const;
  bool empty() const { return forbidden.empty(); }
};

/// Runs `strategy` from `start`, returning the context after every step
/// (front() is `start`). Acts must be admitted by the current view and
/// applicable; resulting states must pass `never`. Throws ExecutionError
/// with the failing step index.
std::vector<Context> execute_strategy(const Context& start, const Strategy& strategy,
                                      const NeverFilter& never = {});

}  // namespace mgpkit
