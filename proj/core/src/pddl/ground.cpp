#include "findplan/pddl/ground.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "findplan/error.hpp"

namespace findplan::pddl {

std::optional<std::size_t> GroundTask::find_action(std::string_view name) const {
  auto it = action_index.find(std::string(name));
  if (it == action_index.end()) return std::nullopt;
  return it->second;
}

namespace {

std::string key_of(const std::string& head, const std::vector<std::string>& args) {
  std::string k = "(" + head;
  for (const auto& a : args) k += " " + a;
  return k + ")";
}

std::string key_of(const Atom& a) { return key_of(a.predicate, a.args); }

struct SchemaLiteral {
  Atom atom;
  bool negated = false;
  bool is_static = false;
  std::size_t ready_depth = 0;  // params needed before it can be checked
  std::vector<int> arg_param;   // -1 for constants
};

void flatten(const Condition& c, bool negated, std::vector<Literal>& out, const std::string& where) {
  switch (c.kind) {
    case Condition::Kind::And:
      if (negated) throw GroundingError("negated conjunction in " + where + " is not supported");
      for (const auto& child : c.children) flatten(child, false, out, where);
      return;
    case Condition::Kind::Not:
      flatten(c.children.at(0), !negated, out, where);
      return;
    case Condition::Kind::Atom:
      out.push_back({c.atom, negated});
      return;
  }
}

class TypeIndex {
 public:
  TypeIndex(const Domain& d, const std::vector<TypedName>& objects) {
    parent_["object"] = "";
    for (const auto& t : d.types) parent_[t.name] = t.type;
    for (const auto& o : objects) {
      type_of_[o.name] = o.type;
      order_.push_back(o.name);
    }
  }

  bool is_subtype(std::string t, const std::string& of) const {
    for (int guard = 0; guard < 1000 && !t.empty(); ++guard) {
      if (t == of) return true;
      auto it = parent_.find(t);
      if (it == parent_.end()) return false;
      t = it->second;
    }
    return false;
  }

  const std::vector<std::string>& objects_of(const std::string& type) {
    auto it = cache_.find(type);
    if (it != cache_.end()) return it->second;
    std::vector<std::string> out;
    for (const auto& o : order_) {
      if (is_subtype(type_of_.at(o), type)) out.push_back(o);
    }
    return cache_.emplace(type, std::move(out)).first->second;
  }

  const std::string* type_of(const std::string& object) const {
    auto it = type_of_.find(object);
    return it == type_of_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::string, std::string> parent_;
  std::map<std::string, std::string> type_of_;
  std::vector<std::string> order_;
  std::map<std::string, std::vector<std::string>> cache_;
};

void check_ground_atom(const Atom& a, const Domain& d, const TypeIndex& types, const char* where) {
  const auto* p = d.find_predicate(a.predicate);
  if (!p) throw GroundingError(std::string(where) + " uses undeclared predicate '" + a.predicate + "'");
  if (p->params.size() != a.args.size()) {
    throw GroundingError(std::string(where) + " atom " + key_of(a) + " has wrong arity");
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    const auto* t = types.type_of(a.args[i]);
    if (!t) throw GroundingError(std::string(where) + " atom " + key_of(a) + " names unknown object '" + a.args[i] + "'");
    if (!types.is_subtype(*t, p->params[i].type)) {
      throw GroundingError(std::string(where) + " atom " + key_of(a) + " has an argument of the wrong type");
    }
  }
}

struct Candidate {
  std::string name;
  std::vector<std::string> pre, pre_neg, add, del;
  double cost = 0.0;
  std::optional<std::string> unresolved;
};

}  // namespace

GroundTask ground(const Domain& domain, const Problem& problem) {
  std::vector<TypedName> objects = domain.constants;
  objects.insert(objects.end(), problem.objects.begin(), problem.objects.end());
  TypeIndex types(domain, objects);

  std::set<std::string> fluent_predicates;
  for (const auto& a : domain.actions) {
    for (const auto& lit : a.effect.literals) fluent_predicates.insert(lit.atom.predicate);
  }

  std::set<std::string> static_true;
  std::vector<std::string> init_fluents;
  for (const auto& a : problem.init) {
    check_ground_atom(a, domain, types, "init");
    if (fluent_predicates.contains(a.predicate)) {
      init_fluents.push_back(key_of(a));
    } else {
      static_true.insert(key_of(a));
    }
  }
  std::map<std::string, double> numeric;
  for (const auto& f : problem.init_numeric) {
    const auto* fn = domain.find_function(f.term.predicate);
    if (!fn) throw GroundingError("init assigns undeclared function '" + f.term.predicate + "'");
    if (fn->params.size() != f.term.args.size()) {
      throw GroundingError("init term " + key_of(f.term) + " has wrong arity");
    }
    numeric[key_of(f.term)] = f.value;
  }

  std::vector<Literal> goal_literals;
  flatten(problem.goal, false, goal_literals, "goal");
  for (const auto& lit : goal_literals) check_ground_atom(lit.atom, domain, types, "goal");

  const bool action_costs = domain.has_requirement(":action-costs");

  // Enumerate bindings per schema, pruning with static literals as soon as
  // all of their parameters are bound.
  std::vector<Candidate> candidates;
  for (const auto& schema : domain.actions) {
    std::vector<Literal> pre;
    flatten(schema.precondition, false, pre, "action '" + schema.name + "'");

    std::map<std::string, int> param_index;
    for (std::size_t i = 0; i < schema.params.size(); ++i) param_index[schema.params[i].name] = static_cast<int>(i);

    std::vector<SchemaLiteral> lits;
    for (const auto& l : pre) {
      SchemaLiteral sl;
      sl.atom = l.atom;
      sl.negated = l.negated;
      sl.is_static = !fluent_predicates.contains(l.atom.predicate);
      for (const auto& arg : l.atom.args) {
        auto it = param_index.find(arg);
        const int idx = it == param_index.end() ? -1 : it->second;
        sl.arg_param.push_back(idx);
        sl.ready_depth = std::max<std::size_t>(sl.ready_depth, static_cast<std::size_t>(idx + 1));
      }
      lits.push_back(std::move(sl));
    }

    std::vector<const std::vector<std::string>*> domains;
    for (const auto& p : schema.params) domains.push_back(&types.objects_of(p.type));

    std::vector<std::string> binding(schema.params.size());
    auto instantiate = [&](const Atom& a) {
      std::vector<std::string> args;
      for (const auto& arg : a.args) {
        auto it = param_index.find(arg);
        args.push_back(it == param_index.end() ? arg : binding[static_cast<std::size_t>(it->second)]);
      }
      return key_of(a.predicate, args);
    };
    auto static_ok = [&](std::size_t depth) {
      for (const auto& l : lits) {
        if (!l.is_static || l.ready_depth != depth) continue;
        const bool holds = static_true.contains(instantiate(l.atom));
        if (holds == l.negated) return false;
      }
      return true;
    };

    auto emit = [&]() {
      Candidate c;
      std::vector<std::string> bound(binding.begin(), binding.end());
      c.name = key_of(schema.name, bound);
      for (const auto& l : lits) {
        if (l.is_static) continue;
        (l.negated ? c.pre_neg : c.pre).push_back(instantiate(l.atom));
      }
      for (const auto& lit : schema.effect.literals) {
        (lit.negated ? c.del : c.add).push_back(instantiate(lit.atom));
      }
      if (!action_costs) {
        c.cost = 1.0;
      } else {
        for (const auto& inc : schema.effect.increases) {
          if (inc.function.predicate != "total-cost" || !inc.function.args.empty()) {
            throw GroundingError("only (total-cost) may be increased, found (" + inc.function.predicate + ")");
          }
          if (const auto* term = std::get_if<Atom>(&inc.amount)) {
            const std::string k = instantiate(*term);
            auto it = numeric.find(k);
            if (it == numeric.end()) {
              if (!c.unresolved) c.unresolved = k;
            } else {
              c.cost += it->second;
            }
          } else {
            c.cost += std::get<double>(inc.amount);
          }
        }
      }
      candidates.push_back(std::move(c));
    };

    if (!static_ok(0)) continue;
    // Iterative depth-first enumeration over parameter domains.
    std::vector<std::size_t> cursor(schema.params.size(), 0);
    std::size_t depth = 0;
    if (schema.params.empty()) {
      emit();
      continue;
    }
    while (true) {
      if (cursor[depth] >= domains[depth]->size()) {
        if (depth == 0) break;
        cursor[depth] = 0;
        --depth;
        ++cursor[depth];
        continue;
      }
      binding[depth] = (*domains[depth])[cursor[depth]];
      if (!static_ok(depth + 1)) {
        ++cursor[depth];
        continue;
      }
      if (depth + 1 == schema.params.size()) {
        emit();
        ++cursor[depth];
      } else {
        ++depth;
      }
    }
  }

  // Delete-relaxed reachability with precondition counters.
  std::map<std::string, std::vector<std::size_t>> waiting;
  std::vector<std::size_t> missing(candidates.size(), 0);
  std::set<std::string> reached(init_fluents.begin(), init_fluents.end());
  std::vector<std::string> queue(reached.begin(), reached.end());
  std::vector<bool> enabled(candidates.size(), false);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::set<std::string> need(candidates[i].pre.begin(), candidates[i].pre.end());
    for (const auto& f : need) {
      if (reached.contains(f)) continue;
      waiting[f].push_back(i);
      ++missing[i];
    }
  }
  auto fire = [&](std::size_t i) {
    enabled[i] = true;
    for (const auto& f : candidates[i].add) {
      if (reached.insert(f).second) queue.push_back(f);
    }
  };
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (missing[i] == 0) fire(i);
  }
  for (std::size_t q = 0; q < queue.size(); ++q) {
    auto it = waiting.find(queue[q]);
    if (it == waiting.end()) continue;
    for (std::size_t i : it->second) {
      if (--missing[i] == 0) fire(i);
    }
  }

  GroundTask task;
  std::map<std::string, std::size_t> fact_id;
  auto intern = [&](const std::string& f) {
    auto [it, inserted] = fact_id.emplace(f, task.facts.size());
    if (inserted) task.facts.push_back(f);
    return it->second;
  };
  for (const auto& f : init_fluents) task.initial.push_back(intern(f));

  for (const auto& lit : goal_literals) {
    const std::string k = key_of(lit.atom);
    if (!fluent_predicates.contains(lit.atom.predicate)) {
      if (static_true.contains(k) == lit.negated) task.goal_impossible = true;
      continue;
    }
    if (lit.negated) {
      if (reached.contains(k)) task.goal_neg.push_back(intern(k));
    } else {
      task.goal.push_back(intern(k));
    }
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (enabled[i]) order.push_back(i);
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return candidates[a].name < candidates[b].name; });

  for (std::size_t i : order) {
    auto& c = candidates[i];
    if (c.unresolved) throw GroundingError("unresolved function term " + *c.unresolved + " in " + c.name);
    if (!std::isfinite(c.cost) || c.cost < 0.0) {
      throw GroundingError("action " + c.name + " has a negative or non-finite cost");
    }
    GroundAction a;
    a.name = c.name;
    a.cost = c.cost;
    std::set<std::size_t> pre, pre_neg, add, del;
    for (const auto& f : c.pre) pre.insert(intern(f));
    for (const auto& f : c.pre_neg) {
      if (reached.contains(f)) pre_neg.insert(intern(f));
    }
    for (const auto& f : c.add) add.insert(intern(f));
    for (const auto& f : c.del) {
      const std::size_t id = intern(f);
      if (!add.contains(id)) del.insert(id);
    }
    const bool adds_nothing = std::includes(pre.begin(), pre.end(), add.begin(), add.end());
    if (adds_nothing && del.empty()) continue;  // no-op
    a.pre.assign(pre.begin(), pre.end());
    a.pre_neg.assign(pre_neg.begin(), pre_neg.end());
    a.add.assign(add.begin(), add.end());
    a.del.assign(del.begin(), del.end());
    task.action_index.emplace(a.name, task.actions.size());
    task.actions.push_back(std::move(a));
  }
  return task;
}

}  // namespace findplan::pddl
