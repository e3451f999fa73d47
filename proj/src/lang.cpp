#include "mgpkit/lang.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace mgpkit {

const char* to_string(DiagCode code) {
  switch (code) {
    case DiagCode::Encoding: return "encoding";
    case DiagCode::Syntax: return "syntax";
    case DiagCode::NoWorld: return "no-world";
    case DiagCode::NoProblem: return "no-problem";
    case DiagCode::UnknownSort: return "unknown-sort";
    case DiagCode::UnknownPredicate: return "unknown-predicate";
    case DiagCode::UnknownObject: return "unknown-object";
    case DiagCode::UnknownVariable: return "unknown-variable";
    case DiagCode::UnknownAction: return "unknown-action";
    case DiagCode::ArityMismatch: return "arity-mismatch";
    case DiagCode::DuplicateName: return "duplicate-name";
    case DiagCode::SortMismatch: return "sort-mismatch";
    case DiagCode::Inconsistent: return "inconsistent";
    case DiagCode::WorldMismatch: return "world-mismatch";
    case DiagCode::GoalOutsideSubdomain: return "goal-outside-subdomain";
    case DiagCode::Renamed: return "renamed";
    case DiagCode::Semantic: return "semantic";
  }
  return "unknown";
}

std::string Diagnostic::format(const std::string& origin) const {
  std::ostringstream os;
  os << origin << ':' << line << ':' << column << ": "
     << (severity == Severity::Error ? "error" : "warning") << ": " << message << " ["
     << to_string(code) << ']';
  return os.str();
}

namespace {

constexpr std::size_t kMaxDepth = 256;

struct Node {
  bool is_list = false;
  std::string text;
  int line = 1;
  int col = 1;
  std::vector<Node> items;

  bool is_atom(std::string_view s) const { return !is_list && text == s; }
  bool head_is(std::string_view s) const { return is_list && !items.empty() && items[0].is_atom(s); }
};

class Diags {
 public:
  explicit Diags(std::vector<Diagnostic>& out) : out_(out) {}

  void error(DiagCode code, int line, int col, std::string msg) {
    out_.push_back({Severity::Error, code, line, col, std::move(msg)});
  }
  void error(DiagCode code, const Node& at, std::string msg) { error(code, at.line, at.col, std::move(msg)); }
  void warn(DiagCode code, const Node& at, std::string msg) {
    out_.push_back({Severity::Warning, code, at.line, at.col, std::move(msg)});
  }
  bool has_errors() const {
    return std::any_of(out_.begin(), out_.end(), [](const auto& d) { return d.severity == Severity::Error; });
  }

 private:
  std::vector<Diagnostic>& out_;
};

// Returns the byte offset of the first invalid sequence, or npos.
std::size_t find_invalid_utf8(const std::string& s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) { ++i; continue; }
    if ((c & 0xE0) == 0xC0) { len = 2; cp = c & 0x1F; }
    else if ((c & 0xF0) == 0xE0) { len = 3; cp = c & 0x0F; }
    else if ((c & 0xF8) == 0xF0) { len = 4; cp = c & 0x07; }
    else return i;
    if (i + len > s.size()) return i;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
      return i;
    i += len;
  }
  return std::string::npos;
}

std::pair<int, int> position_of(const std::string& s, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < s.size(); ++i) {
    if (s[i] == '\n') { ++line; col = 1; }
    else ++col;
  }
  return {line, col};
}

// Iterative reader: no recursion on input nesting.
std::optional<std::vector<Node>> read_sexprs(const std::string& text, Diags& diags) {
  if (auto bad = find_invalid_utf8(text); bad != std::string::npos) {
    auto [l, c] = position_of(text, bad);
    diags.error(DiagCode::Encoding, l, c, "invalid UTF-8 byte sequence");
    return std::nullopt;
  }
  std::vector<Node> stack(1);  // stack[0] collects top-level forms
  stack[0].is_list = true;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](char ch) {
    if (ch == '\n') { ++line; col = 1; }
    else ++col;
  };
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == ';') {
      while (i < text.size() && text[i] != '\n') { advance(text[i]); ++i; }
      continue;
    }
    if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\f' || ch == '\v') {
      advance(ch);
      ++i;
      continue;
    }
    if (ch == '(') {
      if (stack.size() > kMaxDepth) {
        diags.error(DiagCode::Syntax, line, col, "nesting deeper than " + std::to_string(kMaxDepth) + " levels");
        return std::nullopt;
      }
      Node n;
      n.is_list = true;
      n.line = line;
      n.col = col;
      stack.push_back(std::move(n));
      advance(ch);
      ++i;
      continue;
    }
    if (ch == ')') {
      if (stack.size() == 1) {
        diags.error(DiagCode::Syntax, line, col, "unmatched ')'");
        return std::nullopt;
      }
      Node done = std::move(stack.back());
      stack.pop_back();
      stack.back().items.push_back(std::move(done));
      advance(ch);
      ++i;
      continue;
    }
    Node atom;
    atom.line = line;
    atom.col = col;
    while (i < text.size()) {
      const char c = text[i];
      if (c == '(' || c == ')' || c == ';' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v')
        break;
      atom.text.push_back(c);
      advance(c);
      ++i;
    }
    stack.back().items.push_back(std::move(atom));
  }
  if (stack.size() > 1) {
    const Node& open = stack.back();
    diags.error(DiagCode::Syntax, open.line, open.col, "unclosed '('");
    return std::nullopt;
  }
  return std::move(stack[0].items);
}

bool is_name(const std::string& s) {
  if (s.empty() || s == "-" || s[0] == '?' || s[0] == ':') return false;
  return true;
}

bool is_variable(const std::string& s) { return s.size() > 1 && s[0] == '?'; }

struct TypedEntry {
  const Node* name;
  const Node* type;  // nullptr: default sort
};

// a b - t c - u d  ->  (a,t) (b,t) (c,u) (d,default)
std::vector<TypedEntry> typed_list(const std::vector<Node>& items, std::size_t start, Diags& diags) {
  std::vector<TypedEntry> out;
  std::size_t pending = 0;
  for (std::size_t i = start; i < items.size(); ++i) {
    const Node& n = items[i];
    if (n.is_list) {
      diags.error(DiagCode::Syntax, n, "expected a name, found a list");
      continue;
    }
    if (n.text == "-") {
      if (i + 1 >= items.size() || items[i + 1].is_list) {
        diags.error(DiagCode::Syntax, n, "'-' must be followed by a sort name");
        continue;
      }
      if (pending == 0) diags.error(DiagCode::Syntax, n, "'-' with no names before it");
      for (std::size_t k = out.size() - pending; k < out.size(); ++k) out[k].type = &items[i + 1];
      pending = 0;
      ++i;
      continue;
    }
    out.push_back({&n, nullptr});
    ++pending;
  }
  return out;
}

struct LiteralAst {
  const Node* node = nullptr;  // the (p ...) list
  bool negated = false;
};

void collect_literals(const Node& f, std::vector<LiteralAst>& out, Diags& diags, bool allow_and) {
  if (!f.is_list) {
    diags.error(DiagCode::Syntax, f, "expected a literal list, found '" + f.text + "'");
    return;
  }
  if (f.items.empty()) return;
  if (allow_and && f.head_is("and")) {
    for (std::size_t i = 1; i < f.items.size(); ++i) collect_literals(f.items[i], out, diags, false);
    return;
  }
  if (f.head_is("not")) {
    if (f.items.size() != 2 || !f.items[1].is_list || f.items[1].items.empty() || f.items[1].items[0].is_list) {
      diags.error(DiagCode::Syntax, f, "'not' takes exactly one atom");
      return;
    }
    out.push_back({&f.items[1], true});
    return;
  }
  if (f.items[0].is_list) {
    diags.error(DiagCode::Syntax, f.items[0], "expected a predicate name");
    return;
  }
  out.push_back({&f, false});
}

// ---------------------------------------------------------------------------
// World builder

struct DeclaredPredicate {
  const Node* name;
  std::vector<TypedEntry> args;
  bool hidden;
};
struct DeclaredObject {
  TypedEntry entry;
  bool hidden;
};
struct DeclaredAction {
  const Node* form;
  bool hidden;
};

class WorldBuilder {
 public:
  explicit WorldBuilder(Diags& diags) : diags_(diags) {}

  std::optional<WorldPtr> build(const Node& world) {
    if (world.items.size() < 2 || world.items[1].is_list || !is_name(world.items[1].text)) {
      diags_.error(DiagCode::Syntax, world, "(:world NAME ...) requires a name");
      return std::nullopt;
    }
    name_ = world.items[1].text;
    for (std::size_t i = 2; i < world.items.size(); ++i) section(world.items[i], false);
    if (diags_.has_errors()) return std::nullopt;

    resolve_sorts();
    resolve_objects();
    resolve_predicates();
    if (diags_.has_errors()) return std::nullopt;
    resolve_actions();
    if (diags_.has_errors()) return std::nullopt;

    DomainRemap remap;
    PlanningDomain canon = canonicalize(domain_, &remap);
    GeneratorMask hidden = GeneratorMask::none(canon);
    for (std::size_t p = 0; p < hidden_preds_.size(); ++p)
      if (hidden_preds_[p]) hidden.insert({GeneratorKind::Predicate, remap.predicates[p]});
    for (std::size_t o = 0; o < hidden_objs_.size(); ++o)
      if (hidden_objs_[o]) hidden.insert({GeneratorKind::Object, remap.objects[o]});
    for (std::size_t s = 0; s < hidden_schemas_.size(); ++s)
      if (hidden_schemas_[s]) hidden.insert({GeneratorKind::Schema, remap.schemas[s]});
    try {
      return make_world(name_, species_, std::move(canon), std::move(hidden));
    } catch (const Error& e) {
      diags_.error(DiagCode::Semantic, world, e.what());
      return std::nullopt;
    }
  }

 private:
  void section(const Node& s, bool hidden) {
    if (!s.is_list || s.items.empty() || s.items[0].is_list) {
      diags_.error(DiagCode::Syntax, s, "expected a (:section ...) form");
      return;
    }
    const std::string& key = s.items[0].text;
    if (key == ":species" && !hidden) {
      if (s.items.size() != 2 || s.items[1].is_list) diags_.error(DiagCode::Syntax, s, "(:species TAG) takes one tag");
      else species_ = s.items[1].text;
    } else if (key == ":sorts" && !hidden) {
      for (const auto& e : typed_list(s.items, 1, diags_)) sorts_.push_back(e);
    } else if (key == ":objects") {
      for (const auto& e : typed_list(s.items, 1, diags_)) objects_.push_back({e, hidden});
    } else if (key == ":predicates") {
      for (std::size_t i = 1; i < s.items.size(); ++i) {
        const Node& p = s.items[i];
        if (!p.is_list || p.items.empty() || p.items[0].is_list) {
          diags_.error(DiagCode::Syntax, p, "expected (name ?arg - sort ...)");
          continue;
        }
        predicates_.push_back({&p.items[0], typed_list(p.items, 1, diags_), hidden});
      }
    } else if (key == ":action") {
      actions_.push_back({&s, hidden});
    } else if (key == ":hidden" && !hidden) {
      for (std::size_t i = 1; i < s.items.size(); ++i) section(s.items[i], true);
    } else {
      diags_.error(DiagCode::Syntax, s.items[0], "unexpected section '" + key + "'" + (hidden ? " inside :hidden" : ""));
    }
  }

  std::optional<SortId> sort_ref(const Node* type) {
    if (!type) return SortId{0};
    if (auto id = domain_.find_sort(type->text)) return id;
    diags_.error(DiagCode::UnknownSort, *type, "unknown sort '" + type->text + "'");
    return std::nullopt;
  }

  void resolve_sorts() {
    for (const auto& e : sorts_) {
      if (!is_name(e.name->text)) {
        diags_.error(DiagCode::Syntax, *e.name, "invalid sort name '" + e.name->text + "'");
        continue;
      }
      if (domain_.find_sort(e.name->text)) {
        diags_.error(DiagCode::DuplicateName, *e.name, "duplicate sort '" + e.name->text + "'");
        continue;
      }
      domain_.sorts.push_back(Sort{e.name->text, SortId{0}});
    }
    for (const auto& e : sorts_) {
      auto id = domain_.find_sort(e.name->text);
      if (!id || *id == 0) continue;
      if (auto parent = sort_ref(e.type)) {
        if (*parent == *id) diags_.error(DiagCode::Semantic, *e.type, "sort '" + e.name->text + "' cannot be its own parent");
        else domain_.sorts[*id].parent = *parent;
      }
    }
    for (SortId s = 1; s < domain_.sorts.size(); ++s)
      if (!domain_.is_subsort(s, 0)) {
        for (const auto& e : sorts_)
          if (e.name->text == domain_.sorts[s].name) {
            diags_.error(DiagCode::Semantic, *e.name, "sort '" + e.name->text + "' is part of a cycle");
            break;
          }
      }
  }

  void resolve_objects() {
    for (const auto& o : objects_) {
      const Node& n = *o.entry.name;
      if (!is_name(n.text)) {
        diags_.error(DiagCode::Syntax, n, "invalid object name '" + n.text + "'");
        continue;
      }
      if (domain_.find_object(n.text)) {
        diags_.error(DiagCode::DuplicateName, n, "duplicate object '" + n.text + "'");
        continue;
      }
      auto sort = sort_ref(o.entry.type);
      if (!sort) continue;
      domain_.objects.push_back({n.text, *sort});
      hidden_objs_.push_back(o.hidden);
    }
  }

  void resolve_predicates() {
    for (const auto& p : predicates_) {
      if (!is_name(p.name->text)) {
        diags_.error(DiagCode::Syntax, *p.name, "invalid predicate name '" + p.name->text + "'");
        continue;
      }
      if (domain_.find_predicate(p.name->text)) {
        diags_.error(DiagCode::DuplicateName, *p.name, "duplicate predicate '" + p.name->text + "'");
        continue;
      }
      PredicateSchema ps{p.name->text, {}};
      bool ok = true;
      for (const auto& a : p.args) {
        if (!is_variable(a.name->text)) {
          diags_.error(DiagCode::Syntax, *a.name, "predicate arguments must be variables, found '" + a.name->text + "'");
          ok = false;
          continue;
        }
        auto s = sort_ref(a.type);
        if (!s) { ok = false; continue; }
        ps.arg_sorts.push_back(*s);
      }
      if (!ok) continue;
      domain_.predicates.push_back(std::move(ps));
      hidden_preds_.push_back(p.hidden);
    }
  }

  std::optional<AtomTemplate> resolve_template(const LiteralAst& lit, const ActionSchema& schema) {
    const Node& n = *lit.node;
    const Node& head = n.items[0];
    auto pid = domain_.find_predicate(head.text);
    if (!pid) {
      diags_.error(DiagCode::UnknownPredicate, head,
                   "action '" + schema.name + "' uses undeclared predicate '" + head.text + "'");
      return std::nullopt;
    }
    const auto& pred = domain_.predicates[*pid];
    if (n.items.size() - 1 != pred.arity()) {
      diags_.error(DiagCode::ArityMismatch, head,
                   "predicate '" + head.text + "' expects " + std::to_string(pred.arity()) + " argument(s), got " +
                       std::to_string(n.items.size() - 1));
      return std::nullopt;
    }
    AtomTemplate t{*pid, {}, lit.negated};
    bool ok = true;
    for (std::size_t k = 1; k < n.items.size(); ++k) {
      const Node& a = n.items[k];
      if (a.is_list) {
        diags_.error(DiagCode::Syntax, a, "nested terms are not supported");
        ok = false;
        continue;
      }
      if (is_variable(a.text)) {
        auto it = std::find_if(schema.params.begin(), schema.params.end(), [&](const Parameter& p) { return p.name == a.text; });
        if (it == schema.params.end()) {
          diags_.error(DiagCode::UnknownVariable, a, "variable '" + a.text + "' is not a parameter of '" + schema.name + "'");
          ok = false;
          continue;
        }
        t.args.push_back(Term::variable(static_cast<std::uint32_t>(it - schema.params.begin())));
      } else {
        auto oid = domain_.find_object(a.text);
        if (!oid) {
          diags_.error(DiagCode::UnknownObject, a, "unknown object '" + a.text + "'");
          ok = false;
          continue;
        }
        if (!domain_.is_subsort(domain_.objects[*oid].sort, pred.arg_sorts[k - 1])) {
          diags_.error(DiagCode::SortMismatch, a,
                       "object '" + a.text + "' does not fit argument " + std::to_string(k) + " of '" + pred.name + "'");
          ok = false;
          continue;
        }
        t.args.push_back(Term::constant(*oid));
      }
    }
    if (!ok) return std::nullopt;
    return t;
  }

  void resolve_actions() {
    for (const auto& a : actions_) {
      const Node& form = *a.form;
      if (form.items.size() < 2 || form.items[1].is_list || !is_name(form.items[1].text)) {
        diags_.error(DiagCode::Syntax, form, "(:action NAME ...) requires a name");
        continue;
      }
      const Node& name = form.items[1];
      if (domain_.find_schema(name.text)) {
        diags_.error(DiagCode::DuplicateName, name, "duplicate action '" + name.text + "'");
        continue;
      }
      ActionSchema schema{name.text, {}, {}, {}};
      const Node* params = nullptr;
      const Node* pre = nullptr;
      const Node* eff = nullptr;
      bool ok = true;
      for (std::size_t i = 2; i < form.items.size(); i += 2) {
        const Node& key = form.items[i];
        if (key.is_list || i + 1 >= form.items.size()) {
          diags_.error(DiagCode::Syntax, key, "expected ':key value' pairs in action '" + name.text + "'");
          ok = false;
          break;
        }
        const Node& value = form.items[i + 1];
        if (key.text == ":parameters") params = &value;
        else if (key.text == ":precondition") pre = &value;
        else if (key.text == ":effect") eff = &value;
        else {
          diags_.error(DiagCode::Syntax, key, "unknown action key '" + key.text + "'");
          ok = false;
        }
      }
      if (!ok) continue;
      if (params) {
        if (!params->is_list) {
          diags_.error(DiagCode::Syntax, *params, ":parameters expects a list");
          continue;
        }
        for (const auto& e : typed_list(params->items, 0, diags_)) {
          if (!is_variable(e.name->text)) {
            diags_.error(DiagCode::Syntax, *e.name, "parameters must be variables, found '" + e.name->text + "'");
            ok = false;
            continue;
          }
          if (std::any_of(schema.params.begin(), schema.params.end(), [&](const Parameter& p) { return p.name == e.name->text; })) {
            diags_.error(DiagCode::DuplicateName, *e.name, "duplicate parameter '" + e.name->text + "'");
            ok = false;
            continue;
          }
          auto s = sort_ref(e.type);
          if (!s) { ok = false; continue; }
          schema.params.push_back({e.name->text, *s});
        }
      }
      std::vector<LiteralAst> pre_lits, eff_lits;
      if (pre) collect_literals(*pre, pre_lits, diags_, true);
      if (eff) collect_literals(*eff, eff_lits, diags_, true);
      for (const auto& l : pre_lits)
        if (auto t = resolve_template(l, schema)) schema.preconditions.push_back(*t); else ok = false;
      for (const auto& l : eff_lits)
        if (auto t = resolve_template(l, schema)) schema.effects.push_back(*t); else ok = false;
      if (!ok) continue;
      for (const auto& t : schema.effects) {
        if (t.negated) continue;
        AtomTemplate neg = t;
        neg.negated = true;
        if (std::find(schema.effects.begin(), schema.effects.end(), neg) != schema.effects.end()) {
          diags_.error(DiagCode::Semantic, name,
                       "action '" + name.text + "' both adds and deletes '" + domain_.predicates[t.predicate].name + "'");
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      domain_.schemas.push_back(std::move(schema));
      hidden_schemas_.push_back(a.hidden);
    }
  }

  Diags& diags_;
  std::string name_;
  std::string species_ = "default";
  std::vector<TypedEntry> sorts_;
  std::vector<DeclaredObject> objects_;
  std::vector<DeclaredPredicate> predicates_;
  std::vector<DeclaredAction> actions_;
  PlanningDomain domain_;
  std::vector<bool> hidden_preds_, hidden_objs_, hidden_schemas_;
};

// Finds the single top-level form with the given head.
const Node* single_form(const std::vector<Node>& forms, std::string_view head, DiagCode missing,
                        const std::string& missing_msg, Diags& diags) {
  if (forms.empty()) {
    diags.error(missing, 1, 1, missing_msg);
    return nullptr;
  }
  const Node* found = nullptr;
  for (const auto& f : forms) {
    if (!f.head_is(head)) {
      diags.error(DiagCode::Syntax, f, "unexpected top-level form; expected (" + std::string(head) + " ...)");
      continue;
    }
    if (found) {
      diags.error(DiagCode::Syntax, f, "more than one (" + std::string(head) + " ...) form");
      continue;
    }
    found = &f;
  }
  if (!found && !diags.has_errors()) diags.error(missing, forms.front(), missing_msg);
  return found;
}

// Ground atom (p a b) against a world.
std::optional<AtomId> resolve_ground(const Node& n, const World& world, Diags& diags) {
  const auto& d = world.domain();
  const Node& head = n.items[0];
  auto pid = d.find_predicate(head.text);
  if (!pid) {
    diags.error(DiagCode::UnknownPredicate, head, "unknown predicate '" + head.text + "'");
    return std::nullopt;
  }
  const auto& pred = d.predicates[*pid];
  if (n.items.size() - 1 != pred.arity()) {
    diags.error(DiagCode::ArityMismatch, head,
                "predicate '" + head.text + "' expects " + std::to_string(pred.arity()) + " argument(s), got " +
                    std::to_string(n.items.size() - 1));
    return std::nullopt;
  }
  std::vector<ObjectId> args;
  bool ok = true;
  for (std::size_t k = 1; k < n.items.size(); ++k) {
    const Node& a = n.items[k];
    if (a.is_list) {
      diags.error(DiagCode::Syntax, a, "expected an object name");
      ok = false;
      continue;
    }
    auto oid = d.find_object(a.text);
    if (!oid) {
      diags.error(DiagCode::UnknownObject, a, "unknown object '" + a.text + "'");
      ok = false;
      continue;
    }
    if (!d.is_subsort(d.objects[*oid].sort, pred.arg_sorts[k - 1])) {
      diags.error(DiagCode::SortMismatch, a,
                  "object '" + a.text + "' does not fit argument " + std::to_string(k) + " of '" + pred.name + "'");
      ok = false;
      continue;
    }
    args.push_back(*oid);
  }
  if (!ok) return std::nullopt;
  return world.atoms().find(*pid, args);
}

}  // namespace

ParseResult<WorldPtr> parse_world(const SourceDoc& doc) {
  ParseResult<WorldPtr> result;
  Diags diags(result.diagnostics);
  auto forms = read_sexprs(doc.text, diags);
  if (!forms) return result;
  const Node* world = single_form(*forms, ":world", DiagCode::NoWorld, "no world declaration", diags);
  if (!world || diags.has_errors()) return result;
  WorldBuilder builder(diags);
  result.value = builder.build(*world);
  if (diags.has_errors()) result.value.reset();
  return result;
}

std::optional<std::string> referenced_world(const SourceDoc& doc) {
  std::vector<Diagnostic> sink;
  Diags diags(sink);
  auto forms = read_sexprs(doc.text, diags);
  if (!forms) return std::nullopt;
  for (const auto& f : *forms) {
    if (!f.head_is(":problem")) continue;
    for (const auto& s : f.items)
      if (s.head_is(":world") && s.items.size() == 2 && !s.items[1].is_list) return s.items[1].text;
  }
  return std::nullopt;
}

ParseResult<Problem> parse_problem(const SourceDoc& doc, const WorldPtr& world) {
  ParseResult<Problem> result;
  Diags diags(result.diagnostics);
  if (!world) throw Error(ErrorKind::Argument, "parse_problem needs a world");
  auto forms = read_sexprs(doc.text, diags);
  if (!forms) return result;
  const Node* prob = single_form(*forms, ":problem", DiagCode::NoProblem, "no problem declaration", diags);
  if (!prob || diags.has_errors()) return result;
  if (prob->items.size() < 2 || prob->items[1].is_list || !is_name(prob->items[1].text)) {
    diags.error(DiagCode::Syntax, *prob, "(:problem NAME ...) requires a name");
    return result;
  }

  const auto& d = world->domain();
  const Node* world_clause = nullptr;
  const Node* sub_clause = nullptr;
  std::vector<const Node*> init_nodes, goal_nodes, never_nodes;
  for (std::size_t i = 2; i < prob->items.size(); ++i) {
    const Node& s = prob->items[i];
    if (!s.is_list || s.items.empty() || s.items[0].is_list) {
      diags.error(DiagCode::Syntax, s, "expected a (:section ...) form");
      continue;
    }
    const std::string& key = s.items[0].text;
    if (key == ":world") world_clause = &s;
    else if (key == ":subdomain") sub_clause = &s;
    else if (key == ":init") init_nodes.push_back(&s);
    else if (key == ":goal") goal_nodes.push_back(&s);
    else if (key == ":never") never_nodes.push_back(&s);
    else diags.error(DiagCode::Syntax, s.items[0], "unexpected section '" + key + "'");
  }
  if (!world_clause) {
    diags.error(DiagCode::Syntax, *prob, "problem lacks a (:world NAME) clause");
    return result;
  }
  if (world_clause->items.size() != 2 || world_clause->items[1].is_list) {
    diags.error(DiagCode::Syntax, *world_clause, "(:world NAME) takes one name");
    return result;
  }
  if (world_clause->items[1].text != world->name()) {
    diags.error(DiagCode::WorldMismatch, world_clause->items[1],
                "problem targets world '" + world_clause->items[1].text + "' but world '" + world->name() + "' was given");
    return result;
  }

  GeneratorMask mask = world->hidden().complement();
  if (sub_clause) {
    for (std::size_t i = 1; i < sub_clause->items.size(); ++i) {
      const Node& sel = sub_clause->items[i];
      if (!sel.is_list || sel.items.empty() || sel.items[0].is_list) {
        diags.error(DiagCode::Syntax, sel, "expected (:predicates ...), (:objects ...) or (:actions ...)");
        continue;
      }
      const std::string& key = sel.items[0].text;
      GeneratorKind kind;
      if (key == ":predicates") kind = GeneratorKind::Predicate;
      else if (key == ":objects") kind = GeneratorKind::Object;
      else if (key == ":actions") kind = GeneratorKind::Schema;
      else {
        diags.error(DiagCode::Syntax, sel.items[0], "unexpected selector '" + key + "'");
        continue;
      }
      const std::size_t n = kind == GeneratorKind::Predicate ? d.predicates.size()
                            : kind == GeneratorKind::Object  ? d.objects.size()
                                                             : d.schemas.size();
      for (std::uint32_t k = 0; k < n; ++k) mask.erase({kind, k});
      for (std::size_t k = 1; k < sel.items.size(); ++k) {
        const Node& nm = sel.items[k];
        std::optional<std::uint32_t> id;
        if (!nm.is_list) {
          id = kind == GeneratorKind::Predicate ? d.find_predicate(nm.text)
               : kind == GeneratorKind::Object  ? d.find_object(nm.text)
                                                : d.find_schema(nm.text);
        }
        if (!id) {
          const DiagCode code = kind == GeneratorKind::Predicate ? DiagCode::UnknownPredicate
                                : kind == GeneratorKind::Object  ? DiagCode::UnknownObject
                                                                 : DiagCode::UnknownAction;
          diags.error(code, nm, "subdomain selects unknown name '" + nm.text + "'");
          continue;
        }
        mask.insert({kind, *id});
      }
    }
  }

  auto literals_of = [&](const std::vector<const Node*>& sections) {
    std::vector<LiteralAst> lits;
    for (const Node* s : sections)
      for (std::size_t i = 1; i < s->items.size(); ++i) collect_literals(s->items[i], lits, diags, true);
    return lits;
  };

  State init(world->atom_count());
  std::map<AtomId, const Node*> negated_init;
  for (const auto& l : literals_of(init_nodes)) {
    auto a = resolve_ground(*l.node, *world, diags);
    if (!a) continue;
    if (l.negated) negated_init.emplace(*a, l.node);
    else init.set(*a);
  }
  for (const auto& [a, node] : negated_init)
    if (init.test(a))
      diags.error(DiagCode::Inconsistent, *node, "init declares " + world->atom_string(a) + " both true and false");

  SubdomainView view(world, mask);
  std::vector<Literal> goal;
  for (const auto& l : literals_of(goal_nodes)) {
    auto a = resolve_ground(*l.node, *world, diags);
    if (!a) continue;
    goal.push_back({*a, l.negated});
    if (!view.can_express(*a))
      diags.warn(DiagCode::GoalOutsideSubdomain, *l.node,
                 "goal literal " + world->atom_string(*a) + " is outside the agent subdomain's vocabulary");
  }
  std::vector<Literal> never;
  for (const auto& l : literals_of(never_nodes)) {
    auto a = resolve_ground(*l.node, *world, diags);
    if (a) never.push_back({*a, l.negated});
  }
  if (diags.has_errors()) return result;

  std::sort(never.begin(), never.end());
  never.erase(std::unique(never.begin(), never.end()), never.end());
  result.value = Problem{prob->items[1].text, world, std::move(view), std::move(init), Goal::from_literals(goal),
                         NeverFilter{std::move(never)}};
  return result;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string template_string(const PlanningDomain& d, const ActionSchema& a, const AtomTemplate& t) {
  std::string s = "(" + d.predicates[t.predicate].name;
  for (const Term& term : t.args)
    s += " " + (term.kind == Term::Kind::Variable ? a.params[term.index].name : d.objects[term.index].name);
  s += ")";
  return t.negated ? "(not " + s + ")" : s;
}

std::string literal_block(const std::vector<AtomTemplate>& ts, const PlanningDomain& d, const ActionSchema& a) {
  if (ts.empty()) return "()";
  std::string s = "(and";
  for (const auto& t : ts) s += " " + template_string(d, a, t);
  return s + ")";
}

std::string ground_literal(const World& w, const Literal& l) {
  return l.negated ? "(not " + w.atom_string(l.atom) + ")" : w.atom_string(l.atom);
}

}  // namespace

std::string print_schema(const PlanningDomain& d, const ActionSchema& a) {
  std::string s = "(:action " + a.name + "\n    :parameters (";
  for (std::size_t i = 0; i < a.params.size(); ++i)
    s += (i ? " " : "") + a.params[i].name + " - " + d.sorts[a.params[i].sort].name;
  s += ")\n    :precondition " + literal_block(a.preconditions, d, a);
  s += "\n    :effect " + literal_block(a.effects, d, a) + ")";
  return s;
}

std::string print_world(const World& w) {
  const auto& d = w.domain();
  const auto& hidden = w.hidden();
  std::ostringstream os;
  os << "(:world " << w.name() << "\n  (:species " << w.species() << ")\n";
  if (d.sorts.size() > 1) {
    os << "  (:sorts";
    for (std::size_t s = 1; s < d.sorts.size(); ++s)
      os << ' ' << d.sorts[s].name << " - " << d.sorts[*d.sorts[s].parent].name;
    os << ")\n";
  }
  auto emit = [&](bool want_hidden, const std::string& indent) {
    bool any_obj = false;
    for (ObjectId o = 0; o < d.objects.size(); ++o) {
      if (hidden.has_object(o) != want_hidden) continue;
      if (!any_obj) os << indent << "(:objects";
      any_obj = true;
      os << ' ' << d.objects[o].name << " - " << d.sorts[d.objects[o].sort].name;
    }
    if (any_obj) os << ")\n";
    bool any_pred = false;
    for (PredicateId p = 0; p < d.predicates.size(); ++p) {
      if (hidden.has_predicate(p) != want_hidden) continue;
      if (!any_pred) os << indent << "(:predicates";
      any_pred = true;
      os << "\n" << indent << "  (" << d.predicates[p].name;
      for (std::size_t k = 0; k < d.predicates[p].arity(); ++k)
        os << " ?x" << k + 1 << " - " << d.sorts[d.predicates[p].arg_sorts[k]].name;
      os << ')';
    }
    if (any_pred) os << ")\n";
    for (SchemaId s = 0; s < d.schemas.size(); ++s) {
      if (hidden.has_schema(s) != want_hidden) continue;
      std::string text = print_schema(d, d.schemas[s]);
      std::string indented;
      for (char c : text) {
        indented += c;
        if (c == '\n') indented += indent.substr(2);
      }
      os << indent << indented << "\n";
    }
  };
  emit(false, "  ");
  if (hidden.size() > 0) {
    os << "  (:hidden\n";
    emit(true, "    ");
    os << "  )\n";
  }
  os << ")\n";
  return os.str();
}

std::string print_problem(const Problem& p) {
  const World& w = *p.world;
  const auto& d = w.domain();
  std::ostringstream os;
  os << "(:problem " << p.name << "\n  (:world " << w.name() << ")\n";
  if (p.subdomain.mask() != w.hidden().complement()) {
    const auto& m = p.subdomain.mask();
    os << "  (:subdomain\n    (:predicates";
    for (PredicateId i = 0; i < d.predicates.size(); ++i) if (m.has_predicate(i)) os << ' ' << d.predicates[i].name;
    os << ")\n    (:objects";
    for (ObjectId i = 0; i < d.objects.size(); ++i) if (m.has_object(i)) os << ' ' << d.objects[i].name;
    os << ")\n    (:actions";
    for (SchemaId i = 0; i < d.schemas.size(); ++i) if (m.has_schema(i)) os << ' ' << d.schemas[i].name;
    os << "))\n";
  }
  os << "  (:init";
  for (AtomId a : p.init.ids()) os << "\n    " << w.atom_string(a);
  os << ")\n  (:goal";
  for (const auto& l : p.goal.literals()) os << "\n    " << ground_literal(w, l);
  os << ")\n";
  if (!p.never.empty()) {
    os << "  (:never";
    for (const auto& l : p.never.forbidden) os << ' ' << ground_literal(w, l);
    os << ")\n";
  }
  os << ")\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Canonical bytes

namespace {

class ByteWriter {
 public:
  ByteWriter() { bytes_ = {'M', 'G'}; }
  explicit ByteWriter(bool header) { if (header) bytes_ = {'M', 'G'}; }

  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) bytes_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
  void count(std::size_t n) { u32(static_cast<std::uint32_t>(n)); }
  void str(std::string_view s) {
    count(s.size());
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  void blob(const Bytes& b) {
    count(b.size());
    bytes_.insert(bytes_.end(), b.begin(), b.end());
  }
  Bytes take() { return std::move(bytes_); }

 private:
  Bytes bytes_;
};

void write_template(ByteWriter& w, const PlanningDomain& d, const AtomTemplate& t) {
  w.u8(t.negated ? 1 : 0);
  w.str(d.predicates[t.predicate].name);
  w.count(t.args.size());
  for (const Term& term : t.args) {
    if (term.kind == Term::Kind::Variable) {
      w.u8('v');
      w.u32(term.index);
    } else {
      w.u8('c');
      w.str(d.objects[term.index].name);
    }
  }
}

void write_schema(ByteWriter& w, const PlanningDomain& d, const ActionSchema& a) {
  w.str(a.name);
  w.count(a.params.size());
  for (const auto& p : a.params) {
    w.str(p.name);
    w.str(d.sorts[p.sort].name);
  }
  w.count(a.preconditions.size());
  for (const auto& t : a.preconditions) write_template(w, d, t);
  w.count(a.effects.size());
  for (const auto& t : a.effects) write_template(w, d, t);
}

void write_generator(ByteWriter& w, const PlanningDomain& d, GeneratorRef g) {
  w.u8(static_cast<std::uint8_t>(g.kind));
  switch (g.kind) {
    case GeneratorKind::Predicate: {
      const auto& p = d.predicates.at(g.index);
      w.str(p.name);
      w.count(p.arity());
      for (SortId s : p.arg_sorts) w.str(d.sorts[s].name);
      break;
    }
    case GeneratorKind::Object:
      w.str(d.objects.at(g.index).name);
      w.str(d.sorts[d.objects.at(g.index).sort].name);
      break;
    case GeneratorKind::Schema:
      write_schema(w, d, d.schemas.at(g.index));
      break;
  }
}

Bytes strategy_body(const Strategy& s, const World& world) {
  const auto& d = world.domain();
  ByteWriter w(false);
  w.count(s.steps.size());
  for (const auto& step : s.steps) {
    if (const auto* act = std::get_if<ActStep>(&step)) {
      const auto& ga = world.action(act->action);
      w.u8('A');
      w.str(d.schemas[ga.schema].name);
      w.count(ga.binding.size());
      for (ObjectId o : ga.binding) w.str(d.objects[o].name);
    } else {
      const auto& m = std::get<ModifyStep>(step).modification;
      w.u8('M');
      w.u8(m.kind == ModificationKind::Extension ? '+' : '-');
      w.count(m.payload.size());
      for (const auto& g : m.payload) write_generator(w, d, g);
    }
  }
  return w.take();
}

}  // namespace

Bytes canonical_serialize(const World& world) {
  const auto& d = world.domain();
  ByteWriter w;
  w.u8('W');
  w.str(world.name());
  w.str(world.species());
  w.count(d.sorts.size());
  for (const auto& s : d.sorts) {
    w.str(s.name);
    w.str(s.parent ? d.sorts[*s.parent].name : std::string());
  }
  w.count(d.predicates.size());
  for (PredicateId p = 0; p < d.predicates.size(); ++p) write_generator(w, d, {GeneratorKind::Predicate, p});
  w.count(d.objects.size());
  for (ObjectId o = 0; o < d.objects.size(); ++o) write_generator(w, d, {GeneratorKind::Object, o});
  w.count(d.schemas.size());
  for (const auto& a : d.schemas) write_schema(w, d, a);
  const auto hidden = world.hidden().members();
  w.count(hidden.size());
  for (const auto& g : hidden) {
    w.u8(static_cast<std::uint8_t>(g.kind));
    w.u32(g.index);
  }
  return w.take();
}

Bytes canonical_serialize(const Problem& p) {
  const World& world = *p.world;
  ByteWriter w;
  w.u8('P');
  w.str(p.name);
  w.str(world.name());
  const auto members = p.subdomain.mask().members();
  w.count(members.size());
  for (const auto& g : members) {
    w.u8(static_cast<std::uint8_t>(g.kind));
    w.u32(g.index);
  }
  const auto init = p.init.ids();
  w.count(init.size());
  for (AtomId a : init) w.str(world.atom_string(a));
  const auto goal = p.goal.literals();
  w.count(goal.size());
  for (const auto& l : goal) {
    w.u8(l.negated);
    w.str(world.atom_string(l.atom));
  }
  w.count(p.never.forbidden.size());
  for (const auto& l : p.never.forbidden) {
    w.u8(l.negated);
    w.str(world.atom_string(l.atom));
  }
  return w.take();
}

Bytes canonical_serialize(const Strategy& s, const World& world) {
  ByteWriter w;
  w.u8('T');
  w.blob(strategy_body(s, world));
  return w.take();
}

Bytes canonical_serialize(const StrategySet& set) {
  ByteWriter w;
  if (set.empty()) return w.take();
  w.u8('S');
  w.u8(set.kind() == StrategySetKind::Optimal ? 'O' : 'I');
  w.count(set.size());
  for (const auto& s : set.strategies()) w.blob(strategy_body(s, *set.world()));
  return w.take();
}

void StrategySet::insert(Strategy s) {
  const Bytes key = strategy_body(s, *world_);
  auto pos = std::lower_bound(strategies_.begin(), strategies_.end(), key,
                              [&](const Strategy& a, const Bytes& k) { return strategy_body(a, *world_) < k; });
  if (pos != strategies_.end() && strategy_body(*pos, *world_) == key) return;
  strategies_.insert(pos, std::move(s));
}

}  // namespace mgpkit
