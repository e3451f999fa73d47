#include "mgpkit/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace mgpkit {

namespace {

template <typename T>
std::optional<std::uint32_t> find_by_name(const std::vector<T>& items, std::string_view name) {
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i].name == name) return static_cast<std::uint32_t>(i);
  return std::nullopt;
}

std::vector<AtomId> sorted_unique(std::vector<AtomId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

PlanningDomain::PlanningDomain() { sorts.push_back(Sort{std::string(kRootSortName), std::nullopt}); }

std::optional<SortId> PlanningDomain::find_sort(std::string_view name) const {
  return find_by_name(sorts, name);
}
std::optional<PredicateId> PlanningDomain::find_predicate(std::string_view name) const {
  return find_by_name(predicates, name);
}
std::optional<ObjectId> PlanningDomain::find_object(std::string_view name) const {
  return find_by_name(objects, name);
}
std::optional<SchemaId> PlanningDomain::find_schema(std::string_view name) const {
  return find_by_name(schemas, name);
}

bool PlanningDomain::is_subsort(SortId sort, SortId ancestor) const {
  // Bounded walk: a malformed (cyclic) hierarchy must not loop forever.
  std::optional<SortId> cur = sort;
  for (std::size_t guard = 0; cur && guard <= sorts.size(); ++guard) {
    if (*cur == ancestor) return true;
    if (*cur >= sorts.size()) return false;
    cur = sorts[*cur].parent;
  }
  return false;
}

std::vector<ObjectId> PlanningDomain::objects_of_sort(SortId sort) const {
  std::vector<ObjectId> out;
  for (std::size_t i = 0; i < objects.size(); ++i)
    if (is_subsort(objects[i].sort, sort)) out.push_back(static_cast<ObjectId>(i));
  return out;
}

void PlanningDomain::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::Schema, msg); };

  if (sorts.empty() || sorts[0].parent) fail("sort 0 must be the root sort");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < sorts.size(); ++i) {
    const Sort& s = sorts[i];
    if (s.name.empty()) fail("empty sort name");
    if (!seen.insert(s.name).second) fail("duplicate sort '" + s.name + "'");
    if (i > 0) {
      if (!s.parent || *s.parent >= sorts.size()) fail("sort '" + s.name + "' has no valid parent");
      if (!is_subsort(i, 0)) fail("sort '" + s.name + "' is not rooted at object (cycle?)");
    }
  }
  seen.clear();
  for (const auto& p : predicates) {
    if (p.name.empty()) fail("empty predicate name");
    if (!seen.insert(p.name).second) fail("duplicate predicate '" + p.name + "'");
    for (SortId s : p.arg_sorts)
      if (s >= sorts.size()) fail("predicate '" + p.name + "' uses an unknown sort");
  }
  seen.clear();
  for (const auto& o : objects) {
    if (o.name.empty()) fail("empty object name");
    if (!seen.insert(o.name).second) fail("duplicate object '" + o.name + "'");
    if (o.sort >= sorts.size()) fail("object '" + o.name + "' has an unknown sort");
  }
  seen.clear();
  for (const auto& a : schemas) {
    if (a.name.empty()) fail("empty schema name");
    if (!seen.insert(a.name).second) fail("duplicate action '" + a.name + "'");
    std::set<std::string> params;
    for (const auto& prm : a.params) {
      if (prm.sort >= sorts.size()) fail("action '" + a.name + "' parameter '" + prm.name + "' has an unknown sort");
      if (!params.insert(prm.name).second) fail("action '" + a.name + "' repeats parameter '" + prm.name + "'");
    }
    auto check = [&](const AtomTemplate& t) {
      if (t.predicate >= predicates.size()) fail("action '" + a.name + "' uses an unknown predicate");
      const auto& p = predicates[t.predicate];
      if (t.args.size() != p.arity())
        fail("action '" + a.name + "': arity mismatch for '" + p.name + "'");
      for (std::size_t k = 0; k < t.args.size(); ++k) {
        const Term& term = t.args[k];
        if (term.kind == Term::Kind::Variable) {
          if (term.index >= a.params.size()) fail("action '" + a.name + "' uses an unbound variable");
        } else {
          if (term.index >= objects.size()) fail("action '" + a.name + "' uses an unknown object");
          if (!is_subsort(objects[term.index].sort, p.arg_sorts[k]))
            fail("action '" + a.name + "': constant '" + objects[term.index].name +
                 "' does not fit argument " + std::to_string(k + 1) + " of '" + p.name + "'");
        }
      }
    };
    for (const auto& t : a.preconditions) check(t);
    for (const auto& t : a.effects) check(t);
    for (const auto& t : a.effects) {
      if (t.negated) continue;
      AtomTemplate neg = t;
      neg.negated = true;
      if (std::find(a.effects.begin(), a.effects.end(), neg) != a.effects.end())
        fail("action '" + a.name + "' both adds and deletes '" + predicates[t.predicate].name + "'");
    }
  }
}

PlanningDomain canonicalize(PlanningDomain d, DomainRemap* remap) {
  auto order_by_name = [](const auto& items) {
    std::vector<std::uint32_t> order(items.size());
    std::iota(order.begin(), order.end(), 0U);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return items[a].name < items[b].name; });
    std::vector<std::uint32_t> old_to_new(items.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) old_to_new[order[i]] = i;
    return std::pair{order, old_to_new};
  };

  // Sorts: root stays at 0, the rest by name.
  {
    std::vector<std::uint32_t> order(d.sorts.size());
    std::iota(order.begin(), order.end(), 0U);
    std::stable_sort(order.begin() + (order.empty() ? 0 : 1), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return d.sorts[a].name < d.sorts[b].name; });
    std::vector<SortId> map(d.sorts.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) map[order[i]] = i;
    std::vector<Sort> sorts;
    for (auto i : order) {
      Sort s = d.sorts[i];
      if (s.parent && *s.parent < map.size()) s.parent = map[*s.parent];
      sorts.push_back(std::move(s));
    }
    d.sorts = std::move(sorts);
    auto fix = [&](SortId& s) { if (s < map.size()) s = map[s]; };
    for (auto& p : d.predicates) for (auto& s : p.arg_sorts) fix(s);
    for (auto& o : d.objects) fix(o.sort);
    for (auto& a : d.schemas) for (auto& prm : a.params) fix(prm.sort);
  }

  auto [pord, pmap] = order_by_name(d.predicates);
  auto [oord, omap] = order_by_name(d.objects);
  auto [sord, smap] = order_by_name(d.schemas);

  std::vector<PredicateSchema> preds;
  for (auto i : pord) preds.push_back(d.predicates[i]);
  std::vector<ObjectConst> objs;
  for (auto i : oord) objs.push_back(d.objects[i]);
  std::vector<ActionSchema> schemas;
  for (auto i : sord) schemas.push_back(d.schemas[i]);

  auto fix_templates = [&](std::vector<AtomTemplate>& ts) {
    for (auto& t : ts) {
      if (t.predicate < pmap.size()) t.predicate = pmap[t.predicate];
      for (auto& term : t.args)
        if (term.kind == Term::Kind::Constant && term.index < omap.size()) term.index = omap[term.index];
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  };
  for (auto& a : schemas) {
    fix_templates(a.preconditions);
    fix_templates(a.effects);
  }
  d.predicates = std::move(preds);
  d.objects = std::move(objs);
  d.schemas = std::move(schemas);
  if (remap) *remap = DomainRemap{pmap, omap, smap};
  return d;
}

// ---------------------------------------------------------------------------

AtomIndex::AtomIndex(const PlanningDomain& domain) {
  const std::size_t nobj = domain.objects.size();
  for (PredicateId p = 0; p < domain.predicates.size(); ++p) {
    const auto& pred = domain.predicates[p];
    PredicateTable table;
    table.offset = static_cast<AtomId>(atoms_.size());
    std::vector<std::vector<ObjectId>> candidates;
    for (SortId s : pred.arg_sorts) {
      candidates.push_back(domain.objects_of_sort(s));
      std::vector<std::int32_t> pos(nobj, -1);
      for (std::size_t k = 0; k < candidates.back().size(); ++k)
        pos[candidates.back()[k]] = static_cast<std::int32_t>(k);
      table.position.push_back(std::move(pos));
      table.extent.push_back(candidates.back().size());
    }
    // Odometer over the candidate lists; last argument varies fastest.
    std::vector<std::size_t> idx(pred.arity(), 0);
    bool any = std::all_of(candidates.begin(), candidates.end(), [](const auto& c) { return !c.empty(); });
    while (any) {
      GroundAtom atom{p, {}};
      for (std::size_t k = 0; k < idx.size(); ++k) atom.args.push_back(candidates[k][idx[k]]);
      atoms_.push_back(std::move(atom));
      std::size_t k = idx.size();
      while (k > 0) {
        --k;
        if (++idx[k] < candidates[k].size()) break;
        idx[k] = 0;
        if (k == 0) { any = false; break; }
      }
      if (idx.empty()) any = false;
    }
    tables_.push_back(std::move(table));
  }
}

std::optional<AtomId> AtomIndex::find(PredicateId predicate, std::span<const ObjectId> args) const {
  if (predicate >= tables_.size()) return std::nullopt;
  const auto& t = tables_[predicate];
  if (args.size() != t.extent.size()) return std::nullopt;
  std::size_t id = 0;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] >= t.position[k].size()) return std::nullopt;
    const std::int32_t slot = t.position[k][args[k]];
    if (slot < 0) return std::nullopt;
    id = id * t.extent[k] + static_cast<std::size_t>(slot);
  }
  return static_cast<AtomId>(t.offset + id);
}

std::vector<GroundAction> ground_schema(const ActionSchema& schema, const PlanningDomain& domain,
                                        const AtomIndex& atoms, SchemaId schema_id) {
  std::vector<std::vector<ObjectId>> candidates;
  for (const auto& prm : schema.params) {
    if (prm.sort >= domain.sorts.size())
      throw Error(ErrorKind::Schema, "action '" + schema.name + "' parameter '" + prm.name + "' has an unknown sort");
    candidates.push_back(domain.objects_of_sort(prm.sort));
  }
  for (const auto& list : {std::cref(schema.preconditions), std::cref(schema.effects)})
    for (const auto& t : list.get())
      if (t.predicate >= domain.predicates.size())
        throw Error(ErrorKind::Schema, "action '" + schema.name + "' uses an unknown predicate");

  std::vector<GroundAction> out;
  if (std::any_of(candidates.begin(), candidates.end(), [](const auto& c) { return c.empty(); }))
    return out;

  std::vector<std::size_t> idx(candidates.size(), 0);
  std::vector<ObjectId> binding(candidates.size());
  std::vector<ObjectId> args;
  for (;;) {
    for (std::size_t k = 0; k < idx.size(); ++k) binding[k] = candidates[k][idx[k]];

    GroundAction ga;
    ga.schema = schema_id;
    ga.binding = binding;
    bool ok = true;
    auto instantiate = [&](const AtomTemplate& t) -> std::optional<AtomId> {
      args.clear();
      for (const Term& term : t.args) args.push_back(term.kind == Term::Kind::Variable ? binding[term.index] : term.index);
      return atoms.find(t.predicate, args);
    };
    for (const auto& t : schema.preconditions) {
      auto a = instantiate(t);
      if (!a) { ok = false; break; }
      (t.negated ? ga.pre_neg : ga.pre_pos).push_back(*a);
      ga.predicates_used.push_back(t.predicate);
    }
    for (const auto& t : schema.effects) {
      if (!ok) break;
      auto a = instantiate(t);
      if (!a) { ok = false; break; }
      (t.negated ? ga.del : ga.add).push_back(*a);
      ga.predicates_used.push_back(t.predicate);
    }
    if (ok) {
      ga.pre_pos = sorted_unique(std::move(ga.pre_pos));
      ga.pre_neg = sorted_unique(std::move(ga.pre_neg));
      ga.add = sorted_unique(std::move(ga.add));
      ga.del = sorted_unique(std::move(ga.del));
      // Add wins over delete when two templates collapse onto one atom.
      std::vector<AtomId> del;
      std::set_difference(ga.del.begin(), ga.del.end(), ga.add.begin(), ga.add.end(), std::back_inserter(del));
      ga.del = std::move(del);
      std::sort(ga.predicates_used.begin(), ga.predicates_used.end());
      ga.predicates_used.erase(std::unique(ga.predicates_used.begin(), ga.predicates_used.end()), ga.predicates_used.end());
      ga.objects_used = binding;
      for (const auto& list : {std::cref(schema.preconditions), std::cref(schema.effects)})
        for (const auto& t : list.get())
          for (const Term& term : t.args)
            if (term.kind == Term::Kind::Constant) ga.objects_used.push_back(term.index);
      std::sort(ga.objects_used.begin(), ga.objects_used.end());
      ga.objects_used.erase(std::unique(ga.objects_used.begin(), ga.objects_used.end()), ga.objects_used.end());
      out.push_back(std::move(ga));
    }

    std::size_t k = idx.size();
    bool done = true;
    while (k > 0) {
      --k;
      if (++idx[k] < candidates[k].size()) { done = false; break; }
      idx[k] = 0;
    }
    if (done) break;
  }
  return out;
}

std::vector<GroundAction> ground_schema(const ActionSchema& schema, const PlanningDomain& domain) {
  AtomIndex atoms(domain);
  auto id = domain.find_schema(schema.name);
  return ground_schema(schema, domain, atoms, id.value_or(0));
}

// ---------------------------------------------------------------------------

GeneratorMask::GeneratorMask(std::size_t predicates, std::size_t objects, std::size_t schemas, bool value)
    : predicates_(predicates, value), objects_(objects, value), schemas_(schemas, value) {}

const std::vector<bool>& GeneratorMask::family(GeneratorKind k) const {
  switch (k) {
    case GeneratorKind::Predicate: return predicates_;
    case GeneratorKind::Object: return objects_;
    case GeneratorKind::Schema: break;
  }
  return schemas_;
}
std::vector<bool>& GeneratorMask::family(GeneratorKind k) {
  return const_cast<std::vector<bool>&>(std::as_const(*this).family(k));
}

bool GeneratorMask::contains(GeneratorRef g) const {
  const auto& f = family(g.kind);
  return g.index < f.size() && f[g.index];
}
void GeneratorMask::insert(GeneratorRef g) {
  auto& f = family(g.kind);
  if (g.index >= f.size()) throw Error(ErrorKind::World, "generator index out of range");
  f[g.index] = true;
}
void GeneratorMask::erase(GeneratorRef g) {
  auto& f = family(g.kind);
  if (g.index >= f.size()) throw Error(ErrorKind::World, "generator index out of range");
  f[g.index] = false;
}

std::vector<GeneratorRef> GeneratorMask::members() const {
  std::vector<GeneratorRef> out;
  for (auto kind : {GeneratorKind::Predicate, GeneratorKind::Object, GeneratorKind::Schema}) {
    const auto& f = family(kind);
    for (std::size_t i = 0; i < f.size(); ++i)
      if (f[i]) out.push_back({kind, static_cast<std::uint32_t>(i)});
  }
  return out;
}

std::size_t GeneratorMask::size() const {
  auto c = [](const std::vector<bool>& v) { return static_cast<std::size_t>(std::count(v.begin(), v.end(), true)); };
  return c(predicates_) + c(objects_) + c(schemas_);
}

GeneratorMask GeneratorMask::complement() const {
  GeneratorMask m = *this;
  m.predicates_.flip();
  m.objects_.flip();
  m.schemas_.flip();
  return m;
}

bool GeneratorMask::same_shape(const GeneratorMask& o) const {
  return predicates_.size() == o.predicates_.size() && objects_.size() == o.objects_.size() &&
         schemas_.size() == o.schemas_.size();
}

bool GeneratorMask::is_subset_of(const GeneratorMask& o) const {
  if (!same_shape(o)) return false;
  for (const auto& g : members())
    if (!o.contains(g)) return false;
  return true;
}

// ---------------------------------------------------------------------------

World::World(std::string name, std::string species, PlanningDomain domain, GeneratorMask hidden)
    : name_(std::move(name)), species_(std::move(species)), domain_(std::move(domain)),
      hidden_(std::move(hidden)), atoms_((domain_.validate(), domain_)) {
  if (!hidden_.same_shape(GeneratorMask::none(domain_)))
    throw Error(ErrorKind::World, "hidden mask does not match the world's generators");
  for (SchemaId s = 0; s < domain_.schemas.size(); ++s) {
    schema_offsets_.push_back(static_cast<GroundActionId>(actions_.size()));
    auto grounded = ground_schema(domain_.schemas[s], domain_, atoms_, s);
    for (auto& ga : grounded) actions_.push_back(std::move(ga));
  }
  schema_offsets_.push_back(static_cast<GroundActionId>(actions_.size()));

  const std::size_t words = state_words();
  pre_pos_.assign(actions_.size() * words, 0);
  pre_neg_.assign(actions_.size() * words, 0);
  add_.assign(actions_.size() * words, 0);
  del_.assign(actions_.size() * words, 0);
  for (std::size_t a = 0; a < actions_.size(); ++a) {
    auto fill = [&](std::vector<simd::Word>& dst, const std::vector<AtomId>& ids) {
      for (AtomId id : ids) dst[a * words + (id >> 6)] |= simd::Word{1} << (id & 63);
    };
    fill(pre_pos_, actions_[a].pre_pos);
    fill(pre_neg_, actions_[a].pre_neg);
    fill(add_, actions_[a].add);
    fill(del_, actions_[a].del);
  }
}

std::optional<GroundActionId> World::find_action(SchemaId schema, std::span<const ObjectId> binding) const {
  if (schema + 1 >= schema_offsets_.size()) return std::nullopt;
  for (GroundActionId id = schema_offsets_[schema]; id < schema_offsets_[schema + 1]; ++id)
    if (std::equal(actions_[id].binding.begin(), actions_[id].binding.end(), binding.begin(), binding.end()))
      return id;
  return std::nullopt;
}

std::string World::atom_string(AtomId id) const {
  const auto& a = atoms_.atom(id);
  std::string s = "(" + domain_.predicates[a.predicate].name;
  for (ObjectId o : a.args) s += " " + domain_.objects[o].name;
  return s + ")";
}

std::string World::action_string(GroundActionId id) const {
  const auto& a = actions_[id];
  std::string s = "(" + domain_.schemas[a.schema].name;
  for (ObjectId o : a.binding) s += " " + domain_.objects[o].name;
  return s + ")";
}

std::string World::generator_string(GeneratorRef g) const {
  switch (g.kind) {
    case GeneratorKind::Predicate: return "predicate " + domain_.predicates.at(g.index).name;
    case GeneratorKind::Object: return "object " + domain_.objects.at(g.index).name;
    case GeneratorKind::Schema: break;
  }
  return "action " + domain_.schemas.at(g.index).name;
}

WorldPtr make_world(std::string name, std::string species, PlanningDomain domain, GeneratorMask hidden) {
  return std::make_shared<const World>(std::move(name), std::move(species), std::move(domain), std::move(hidden));
}

// ---------------------------------------------------------------------------

Goal Goal::from_literals(std::span<const Literal> literals) {
  Goal g;
  for (const auto& l : literals) (l.negated ? g.negative : g.positive).push_back(l.atom);
  g.positive = sorted_unique(std::move(g.positive));
  g.negative = sorted_unique(std::move(g.negative));
  return g;
}

std::vector<Literal> Goal::literals() const {
  std::vector<Literal> out;
  for (AtomId a : positive) out.push_back({a, false});
  for (AtomId a : negative) out.push_back({a, true});
  std::sort(out.begin(), out.end());
  return out;
}

bool entails_goal(const State& state, std::span<const AtomId> goal) {
  return std::all_of(goal.begin(), goal.end(), [&](AtomId a) { return a < state.universe() && state.test(a); });
}

bool entails_goal(const State& state, const Goal& goal) {
  return entails_goal(state, goal.positive) &&
         std::none_of(goal.negative.begin(), goal.negative.end(),
                      [&](AtomId a) { return a < state.universe() && state.test(a); });
}

bool applicable(const State& state, const GroundAction& action) {
  auto has = [&](AtomId a) { return a < state.universe() && state.test(a); };
  return std::all_of(action.pre_pos.begin(), action.pre_pos.end(), has) &&
         std::none_of(action.pre_neg.begin(), action.pre_neg.end(), has);
}

State apply_action(const State& state, const GroundAction& action) {
  if (!applicable(state, action)) throw Error(ErrorKind::Precondition, "action is not applicable in this state");
  State next = state;
  for (AtomId a : action.del) next.reset(a);
  for (AtomId a : action.add) next.set(a);
  return next;
}

// ---------------------------------------------------------------------------

SubdomainView::SubdomainView(WorldPtr world, GeneratorMask selected)
    : world_(std::move(world)), mask_(std::move(selected)) {
  if (!world_) throw Error(ErrorKind::World, "view without a world");
  if (!mask_.same_shape(GeneratorMask::none(world_->domain())))
    throw Error(ErrorKind::World, "subdomain selector does not match the world's generators");
}

SubdomainView SubdomainView::whole(WorldPtr world) {
  auto mask = GeneratorMask::all(world->domain());
  return SubdomainView(std::move(world), std::move(mask));
}

SubdomainView SubdomainView::agent(WorldPtr world) {
  auto mask = world->hidden().complement();
  return SubdomainView(std::move(world), std::move(mask));
}

bool SubdomainView::is_whole_world() const { return mask_ == GeneratorMask::all(world_->domain()); }

bool SubdomainView::admits(const GroundAction& a) const {
  if (!mask_.has_schema(a.schema)) return false;
  for (PredicateId p : a.predicates_used)
    if (!mask_.has_predicate(p)) return false;
  for (ObjectId o : a.objects_used)
    if (!mask_.has_object(o)) return false;
  return true;
}

bool SubdomainView::can_express(AtomId atom) const {
  const auto& a = world_->atoms().atom(atom);
  if (!mask_.has_predicate(a.predicate)) return false;
  return std::all_of(a.args.begin(), a.args.end(), [&](ObjectId o) { return mask_.has_object(o); });
}

std::vector<GroundActionId> SubdomainView::ground_actions() const {
  std::vector<GroundActionId> out;
  const auto offsets = world_->schema_offsets();
  for (SchemaId s = 0; s + 1 < offsets.size(); ++s) {
    if (!mask_.has_schema(s)) continue;
    for (GroundActionId id = offsets[s]; id < offsets[s + 1]; ++id)
      if (admits(world_->action(id))) out.push_back(id);
  }
  return out;
}

State SubdomainView::observe(const State& state) const {
  State out(state.universe());
  for (AtomId a : state.ids())
    if (can_express(a)) out.set(a);
  return out;
}

Modification Modification::extension(std::vector<GeneratorRef> payload) {
  std::sort(payload.begin(), payload.end());
  payload.erase(std::unique(payload.begin(), payload.end()), payload.end());
  return {ModificationKind::Extension, std::move(payload)};
}

Modification Modification::contraction(std::vector<GeneratorRef> payload) {
  auto m = extension(std::move(payload));
  m.kind = ModificationKind::Contraction;
  return m;
}

void check_modification(const SubdomainView& view, const Modification& m) {
  if (m.payload.empty()) throw Error(ErrorKind::Modification, "modification payload is empty");
  const auto whole = GeneratorMask::all(view.world().domain());
  for (const auto& g : m.payload) {
    if (!whole.contains(g)) throw Error(ErrorKind::World, "modification references a generator outside the world");
    const bool known = view.mask().contains(g);
    if (m.kind == ModificationKind::Extension && known)
      throw Error(ErrorKind::Modification, "extension payload overlaps the subdomain: " + view.world().generator_string(g));
    if (m.kind == ModificationKind::Contraction && !known)
      throw Error(ErrorKind::Modification, "contraction payload not in the subdomain: " + view.world().generator_string(g));
  }
}

SubdomainView apply_modification(const SubdomainView& view, const Modification& m) {
  check_modification(view, m);
  GeneratorMask mask = view.mask();
  for (const auto& g : m.payload) {
    if (m.kind == ModificationKind::Extension) mask.insert(g);
    else mask.erase(g);
  }
  return SubdomainView(view.world_ptr(), std::move(mask));
}

Strategy Strategy::concat(const Strategy& tail) const {
  Strategy out = *this;
  out.steps.insert(out.steps.end(), tail.steps.begin(), tail.steps.end());
  return out;
}

Strategy strategy_from_plan(const Plan& plan) {
  Strategy s;
  for (auto a : plan.actions) s.steps.emplace_back(ActStep{a});
  return s;
}

StrategyProjection project_strategy(const Strategy& strategy) {
  StrategyProjection p;
  for (const auto& step : strategy.steps) {
    if (const auto* act = std::get_if<ActStep>(&step)) p.plan.actions.push_back(act->action);
    else p.delta.push_back(std::get<ModifyStep>(step).modification);
  }
  std::sort(p.delta.begin(), p.delta.end());
  p.delta.erase(std::unique(p.delta.begin(), p.delta.end()), p.delta.end());
  return p;
}

bool NeverFilter::admits(const State& state) const {
  for (const auto& l : forbidden) {
    const bool present = l.atom < state.universe() && state.test(l.atom);
    if (present != l.negated) return false;
  }
  return true;
}

std::vector<Context> execute_strategy(const Context& start, const Strategy& strategy, const NeverFilter& never) {
  std::vector<Context> out{start};
  if (!never.admits(start.state)) throw ExecutionError(0, "initial state violates a never-constraint");
  for (std::size_t i = 0; i < strategy.steps.size(); ++i) {
    const Context& cur = out.back();
    const auto& step = strategy.steps[i];
    if (const auto* act = std::get_if<ActStep>(&step)) {
      const auto& world = cur.subdomain.world();
      if (act->action >= world.actions().size())
        throw ExecutionError(i, "step " + std::to_string(i) + ": unknown ground action");
      const auto& ga = world.action(act->action);
      if (!cur.subdomain.admits(ga))
        throw ExecutionError(i, "step " + std::to_string(i) + ": " + world.action_string(act->action) + " is outside the subdomain");
      if (!applicable(cur.state, ga))
        throw ExecutionError(i, "step " + std::to_string(i) + ": " + world.action_string(act->action) + " is not applicable");
      State next = apply_action(cur.state, ga);
      if (!never.admits(next))
        throw ExecutionError(i, "step " + std::to_string(i) + ": " + world.action_string(act->action) + " violates a never-constraint");
      out.push_back(Context{cur.subdomain, std::move(next)});
    } else {
      const auto& m = std::get<ModifyStep>(step).modification;
      try {
        out.push_back(Context{apply_modification(cur.subdomain, m), cur.state});
      } catch (const Error& e) {
        throw ExecutionError(i, "step " + std::to_string(i) + ": " + e.what());
      }
    }
  }
  return out;
}

}  // namespace mgpkit
