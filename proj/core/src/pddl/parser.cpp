#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "findplan/error.hpp"
#include "findplan/pddl/parser.hpp"

namespace findplan::pddl {

bool Domain::has_requirement(std::string_view r) const {
  return std::find(requirements.begin(), requirements.end(), r) != requirements.end();
}

const PredicateSchema* Domain::find_predicate(std::string_view n) const {
  for (const auto& p : predicates) {
    if (p.name == n) return &p;
  }
  return nullptr;
}

const FunctionSchema* Domain::find_function(std::string_view n) const {
  for (const auto& f : functions) {
    if (f.name == n) return &f;
  }
  return nullptr;
}

const ActionSchema* Domain::find_action(std::string_view n) const {
  for (const auto& a : actions) {
    if (a.name == n) return &a;
  }
  return nullptr;
}

namespace {

[[noreturn]] void fail(const SExpr& at, const std::string& what) {
  throw ParseError(what, at.line, at.column);
}

const std::string& symbol(const SExpr& e, const char* what) {
  if (e.is_list) fail(e, std::string("expected ") + what + ", found a list");
  return e.token;
}

const SExpr& list(const SExpr& e, const char* what) {
  if (!e.is_list) fail(e, std::string("expected ") + what + ", found '" + e.token + "'");
  return e;
}

bool is_keyword(const SExpr& e, std::string_view kw) { return !e.is_list && e.token == kw; }

bool is_variable(std::string_view s) { return !s.empty() && s[0] == '?'; }

/// `a b - t c - u d` (trailing untyped names default to `object`).
std::vector<TypedName> typed_list(const SExpr& owner, std::size_t first) {
  std::vector<TypedName> out;
  std::size_t pending_from = 0;
  for (std::size_t i = first; i < owner.items.size(); ++i) {
    const SExpr& item = owner.items[i];
    if (is_keyword(item, "-")) {
      if (i + 1 >= owner.items.size()) fail(item, "missing type after '-'");
      const SExpr& type = owner.items[i + 1];
      if (type.is_list) fail(type, "composite types (either ...) are not supported");
      if (pending_from == out.size()) fail(item, "'-' without preceding names");
      for (std::size_t k = pending_from; k < out.size(); ++k) out[k].type = type.token;
      pending_from = out.size();
      ++i;
      continue;
    }
    out.push_back({symbol(item, "a name"), "object"});
  }
  return out;
}

double number(const SExpr& e) {
  const std::string& t = symbol(e, "a number");
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size()) fail(e, "expected a number, found '" + t + "'");
  return v;
}

Atom atom(const SExpr& e) {
  const SExpr& l = list(e, "an atom");
  if (l.items.empty()) fail(e, "empty atom");
  Atom a;
  a.predicate = symbol(l.items[0], "a predicate name");
  for (std::size_t i = 1; i < l.items.size(); ++i) a.args.push_back(symbol(l.items[i], "a term"));
  return a;
}

Condition condition(const SExpr& e) {
  const SExpr& l = list(e, "a condition");
  if (l.items.empty()) return Condition::make_and({});
  const std::string& head = symbol(l.items[0], "a condition head");
  if (head == "and") {
    std::vector<Condition> children;
    for (std::size_t i = 1; i < l.items.size(); ++i) children.push_back(condition(l.items[i]));
    return Condition::make_and(std::move(children));
  }
  if (head == "not") {
    if (l.items.size() != 2) fail(e, "'not' takes exactly one argument");
    return Condition::make_not(condition(l.items[1]));
  }
  if (head == "or" || head == "imply" || head == "forall" || head == "exists" || head == "=" ||
      head == "when") {
    fail(e, "unsupported condition construct '" + head + "'");
  }
  return Condition::make_atom(atom(e));
}

void collect_effect(const SExpr& e, Effect& out) {
  const SExpr& l = list(e, "an effect");
  if (l.items.empty()) return;
  const std::string& head = symbol(l.items[0], "an effect head");
  if (head == "and") {
    for (std::size_t i = 1; i < l.items.size(); ++i) collect_effect(l.items[i], out);
    return;
  }
  if (head == "not") {
    if (l.items.size() != 2) fail(e, "'not' takes exactly one argument");
    out.literals.push_back({atom(l.items[1]), true});
    return;
  }
  if (head == "increase") {
    if (l.items.size() != 3) fail(e, "'increase' takes a function term and an amount");
    Increase inc;
    inc.function = atom(l.items[1]);
    if (l.items[2].is_list) {
      inc.amount = atom(l.items[2]);
    } else {
      inc.amount = number(l.items[2]);
    }
    out.increases.push_back(std::move(inc));
    return;
  }
  if (head == "when" || head == "forall" || head == "decrease" || head == "assign" ||
      head == "scale-up" || head == "scale-down") {
    fail(e, "unsupported effect construct '" + head + "'");
  }
  out.literals.push_back({atom(e), false});
}

/// Type lattice over declared types; `object` is the implicit root.
class TypeTable {
 public:
  explicit TypeTable(const std::vector<TypedName>& types) {
    parent_["object"] = "";
    for (const auto& t : types) parent_[t.name] = t.type;
  }
  bool declared(const std::string& t) const { return parent_.contains(t); }
  bool is_subtype(std::string t, const std::string& of) const {
    for (int guard = 0; guard < 1000 && !t.empty(); ++guard) {
      if (t == of) return true;
      auto it = parent_.find(t);
      if (it == parent_.end()) return false;
      t = it->second;
    }
    return false;
  }

 private:
  std::map<std::string, std::string> parent_;
};

struct Scope {
  std::map<std::string, std::string> type_of;  // variable or constant -> type
};

void check_atom_args(const SExpr& at, const std::vector<std::string>& args,
                     const std::vector<TypedName>& params, const Scope& scope,
                     const TypeTable& types, const std::string& what) {
  if (args.size() != params.size()) {
    fail(at, what + " expects " + std::to_string(params.size()) + " arguments, got " +
                 std::to_string(args.size()));
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    auto it = scope.type_of.find(args[i]);
    if (it == scope.type_of.end()) {
      fail(at, "undeclared " + std::string(is_variable(args[i]) ? "variable" : "constant") +
                   " '" + args[i] + "' in " + what);
    }
    if (!types.is_subtype(it->second, params[i].type)) {
      fail(at, "argument '" + args[i] + "' of type '" + it->second + "' does not match '" +
                   params[i].type + "' in " + what);
    }
  }
}

void check_condition(const SExpr& at, const Condition& c, const Domain& d, const Scope& scope,
                     const TypeTable& types) {
  switch (c.kind) {
    case Condition::Kind::And:
    case Condition::Kind::Not:
      for (const auto& child : c.children) check_condition(at, child, d, scope, types);
      if (c.kind == Condition::Kind::Not && !d.has_requirement(":negative-preconditions")) {
        fail(at, "negative precondition requires :negative-preconditions");
      }
      return;
    case Condition::Kind::Atom: {
      const auto* p = d.find_predicate(c.atom.predicate);
      if (!p) fail(at, "undeclared predicate '" + c.atom.predicate + "'");
      check_atom_args(at, c.atom.args, p->params, scope, types, "(" + c.atom.predicate + ")");
      return;
    }
  }
}

void check_types_declared(const SExpr& at, const std::vector<TypedName>& names,
                          const TypeTable& types) {
  for (const auto& n : names) {
    if (!types.declared(n.type)) fail(at, "undeclared type '" + n.type + "'");
  }
}

const SExpr& header(const SExpr& root, const char* kind, std::string& name) {
  const SExpr& l = list(root, "(define ...)");
  if (l.items.size() < 2 || !is_keyword(l.items[0], "define")) fail(root, "expected (define ...)");
  const SExpr& h = list(l.items[1], "a header");
  if (h.items.size() != 2 || !is_keyword(h.items[0], kind)) {
    fail(h, std::string("expected (") + kind + " <name>)");
  }
  name = symbol(h.items[1], "a name");
  return l;
}

SExpr single_root(std::string_view text) {
  auto roots = read_sexprs(text);
  if (roots.empty()) throw ParseError("expected a (define ...) form", 1);
  if (roots.size() > 1) {
    throw ParseError("unexpected second top-level form", roots[1].line, roots[1].column);
  }
  return std::move(roots[0]);
}

}  // namespace

Domain parse_domain(std::string_view text) {
  const SExpr root = single_root(text);
  Domain d;
  const SExpr& def = header(root, "domain", d.name);
  std::vector<const SExpr*> action_forms;
  const SExpr* functions_form = nullptr;

  for (std::size_t i = 2; i < def.items.size(); ++i) {
    const SExpr& section = list(def.items[i], "a domain section");
    if (section.items.empty()) fail(section, "empty domain section");
    const std::string& key = symbol(section.items[0], "a section keyword");
    if (key == ":requirements") {
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        const std::string& r = symbol(section.items[k], "a requirement flag");
        if (std::find(std::begin(kSupportedRequirements), std::end(kSupportedRequirements), r) ==
            std::end(kSupportedRequirements)) {
          throw UnsupportedRequirementError("line " + std::to_string(section.items[k].line) +
                                            ": unsupported requirement '" + r + "'");
        }
        d.requirements.push_back(r);
      }
    } else if (key == ":types") {
      d.types = typed_list(section, 1);
    } else if (key == ":constants") {
      d.constants = typed_list(section, 1);
    } else if (key == ":predicates") {
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        const SExpr& p = list(section.items[k], "a predicate declaration");
        if (p.items.empty()) fail(p, "empty predicate declaration");
        d.predicates.push_back({symbol(p.items[0], "a predicate name"), typed_list(p, 1)});
      }
    } else if (key == ":functions") {
      functions_form = &section;
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        const SExpr& item = section.items[k];
        if (is_keyword(item, "-")) {
          if (k + 1 >= section.items.size() || !is_keyword(section.items[k + 1], "number")) {
            fail(item, "only numeric functions are supported");
          }
          ++k;
          continue;
        }
        const SExpr& f = list(item, "a function declaration");
        if (f.items.empty()) fail(f, "empty function declaration");
        d.functions.push_back({symbol(f.items[0], "a function name"), typed_list(f, 1)});
      }
    } else if (key == ":action") {
      action_forms.push_back(&section);
    } else {
      fail(section, "unsupported domain section '" + key + "'");
    }
  }

  const TypeTable types(d.types);
  for (const auto& t : d.types) {
    if (!types.declared(t.type)) fail(root, "type '" + t.name + "' has undeclared parent '" + t.type + "'");
    if (t.name != "object" && types.is_subtype(t.type, t.name)) {
      fail(root, "cyclic type hierarchy at '" + t.name + "'");
    }
  }
  check_types_declared(root, d.constants, types);
  std::set<std::string> seen;
  for (const auto& p : d.predicates) {
    if (!seen.insert(p.name).second) fail(root, "duplicate predicate '" + p.name + "'");
    check_types_declared(root, p.params, types);
  }
  seen.clear();
  for (const auto& f : d.functions) {
    if (!seen.insert(f.name).second) fail(*functions_form, "duplicate function '" + f.name + "'");
    check_types_declared(*functions_form, f.params, types);
  }

  Scope constants;
  for (const auto& c : d.constants) constants.type_of[c.name] = c.type;

  seen.clear();
  for (const SExpr* form : action_forms) {
    const SExpr& a = *form;
    if (a.items.size() < 2) fail(a, "action needs a name");
    ActionSchema action;
    action.name = symbol(a.items[1], "an action name");
    if (!seen.insert(action.name).second) fail(a, "duplicate action '" + action.name + "'");
    action.precondition = Condition::make_and({});
    for (std::size_t k = 2; k < a.items.size(); k += 2) {
      const std::string& key = symbol(a.items[k], "an action keyword");
      if (k + 1 >= a.items.size()) fail(a.items[k], "missing value for '" + key + "'");
      const SExpr& value = a.items[k + 1];
      if (key == ":parameters") {
        action.params = typed_list(list(value, "a parameter list"), 0);
      } else if (key == ":precondition") {
        action.precondition = condition(value);
      } else if (key == ":effect") {
        collect_effect(value, action.effect);
      } else {
        fail(a.items[k], "unsupported action keyword '" + key + "'");
      }
    }

    Scope scope = constants;
    for (const auto& p : action.params) {
      if (!is_variable(p.name)) fail(a, "parameter '" + p.name + "' must start with '?'");
      if (!types.declared(p.type)) fail(a, "undeclared type '" + p.type + "'");
      if (!scope.type_of.emplace(p.name, p.type).second) {
        fail(a, "duplicate parameter '" + p.name + "'");
      }
    }
    check_condition(a, action.precondition, d, scope, types);
    for (const auto& lit : action.effect.literals) {
      const auto* p = d.find_predicate(lit.atom.predicate);
      if (!p) fail(a, "undeclared predicate '" + lit.atom.predicate + "' in effect");
      check_atom_args(a, lit.atom.args, p->params, scope, types, "(" + lit.atom.predicate + ")");
    }
    for (const auto& inc : action.effect.increases) {
      if (!d.has_requirement(":action-costs")) fail(a, "increase effects require :action-costs");
      const auto* f = d.find_function(inc.function.predicate);
      if (!f) fail(a, "increase targets undeclared function '" + inc.function.predicate + "'");
      check_atom_args(a, inc.function.args, f->params, scope, types, "(" + f->name + ")");
      if (const auto* term = std::get_if<Atom>(&inc.amount)) {
        const auto* g = d.find_function(term->predicate);
        if (!g) fail(a, "undeclared function '" + term->predicate + "' in cost expression");
        check_atom_args(a, term->args, g->params, scope, types, "(" + g->name + ")");
      } else if (std::get<double>(inc.amount) < 0.0) {
        fail(a, "negative action cost in '" + action.name + "'");
      }
    }
    d.actions.push_back(std::move(action));
  }
  return d;
}

namespace {

void check_ground_condition(const SExpr& at, const Condition& c) {
  if (c.kind == Condition::Kind::Atom) {
    for (const auto& arg : c.atom.args) {
      if (is_variable(arg)) fail(at, "variable '" + arg + "' in a ground formula");
    }
  }
  for (const auto& child : c.children) check_ground_condition(at, child);
}

}  // namespace

Problem parse_problem(std::string_view text, const Domain& domain) {
  const SExpr root = single_root(text);
  Problem p;
  const SExpr& def = header(root, "problem", p.name);
  const TypeTable types(domain.types);
  bool have_goal = false;

  for (std::size_t i = 2; i < def.items.size(); ++i) {
    const SExpr& section = list(def.items[i], "a problem section");
    if (section.items.empty()) fail(section, "empty problem section");
    const std::string& key = symbol(section.items[0], "a section keyword");
    if (key == ":domain") {
      if (section.items.size() != 2) fail(section, "(:domain <name>) expected");
      p.domain_name = symbol(section.items[1], "a domain name");
      if (p.domain_name != domain.name) {
        fail(section, "problem targets domain '" + p.domain_name + "' but '" + domain.name +
                          "' was given");
      }
    } else if (key == ":objects") {
      p.objects = typed_list(section, 1);
      check_types_declared(section, p.objects, types);
      std::set<std::string> names;
      for (const auto& c : domain.constants) names.insert(c.name);
      for (const auto& o : p.objects) {
        if (!names.insert(o.name).second) fail(section, "duplicate object '" + o.name + "'");
      }
    } else if (key == ":init") {
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        const SExpr& fact = list(section.items[k], "an init fact");
        if (!fact.items.empty() && is_keyword(fact.items[0], "=")) {
          if (fact.items.size() != 3) fail(fact, "(= <term> <number>) expected");
          p.init_numeric.push_back({atom(fact.items[1]), number(fact.items[2])});
        } else {
          Atom a = atom(fact);
          for (const auto& arg : a.args) {
            if (is_variable(arg)) fail(fact, "variable '" + arg + "' in init");
          }
          p.init.push_back(std::move(a));
        }
      }
    } else if (key == ":goal") {
      if (section.items.size() != 2) fail(section, "(:goal <condition>) expected");
      p.goal = condition(section.items[1]);
      check_ground_condition(section, p.goal);
      have_goal = true;
    } else if (key == ":metric") {
      if (section.items.size() != 3 || !is_keyword(section.items[1], "minimize")) {
        fail(section, "only (:metric minimize <term>) is supported");
      }
      p.metric = atom(section.items[2]);
    } else {
      fail(section, "unsupported problem section '" + key + "'");
    }
  }
  if (p.domain_name.empty()) fail(root, "problem lacks (:domain ...)");
  if (!have_goal) fail(root, "problem lacks (:goal ...)");
  return p;
}

}  // namespace findplan::pddl
