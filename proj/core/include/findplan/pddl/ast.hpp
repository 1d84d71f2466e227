#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace findplan::pddl {

/// Names are stored lower-cased; variables keep their leading '?'.
struct TypedName {
  std::string name;
  std::string type = "object";

  friend bool operator==(const TypedName&, const TypedName&) = default;
};

struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Precondition / goal tree restricted to and, not and atoms.
struct Condition {
  enum class Kind { And, Not, Atom };

  Kind kind = Kind::And;
  Atom atom;                        ///< Kind::Atom
  std::vector<Condition> children;  ///< Kind::And (any arity) and Kind::Not (one child)

  static Condition make_and(std::vector<Condition> children) {
    return {Kind::And, {}, std::move(children)};
  }
  static Condition make_not(Condition child) { return {Kind::Not, {}, {std::move(child)}}; }
  static Condition make_atom(Atom atom) { return {Kind::Atom, std::move(atom), {}}; }

  friend bool operator==(const Condition&, const Condition&) = default;
};

struct Literal {
  Atom atom;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Numeric cost expression: a constant or a function term.
using NumericExpr = std::variant<double, Atom>;

struct Increase {
  Atom function;  ///< target fluent, normally (total-cost)
  NumericExpr amount;

  friend bool operator==(const Increase&, const Increase&) = default;
};

/// Effects are kept flat: nested conjunctions are merged at parse time.
struct Effect {
  std::vector<Literal> literals;
  std::vector<Increase> increases;

  friend bool operator==(const Effect&, const Effect&) = default;
};

struct PredicateSchema {
  std::string name;
  std::vector<TypedName> params;

  friend bool operator==(const PredicateSchema&, const PredicateSchema&) = default;
};

struct FunctionSchema {
  std::string name;
  std::vector<TypedName> params;

  friend bool operator==(const FunctionSchema&, const FunctionSchema&) = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  Condition precondition;
  Effect effect;

  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

struct Domain {
  std::string name;
  std::vector<std::string> requirements;  ///< e.g. ":strips"
  std::vector<TypedName> types;           ///< name with parent type
  std::vector<TypedName> constants;
  std::vector<PredicateSchema> predicates;
  std::vector<FunctionSchema> functions;
  std::vector<ActionSchema> actions;

  bool has_requirement(std::string_view r) const;
  const PredicateSchema* find_predicate(std::string_view name) const;
  const FunctionSchema* find_function(std::string_view name) const;
  const ActionSchema* find_action(std::string_view name) const;

  friend bool operator==(const Domain&, const Domain&) = default;
};

struct NumericFact {
  Atom term;
  double value = 0.0;

  friend bool operator==(const NumericFact&, const NumericFact&) = default;
};

struct Problem {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::vector<Atom> init;
  std::vector<NumericFact> init_numeric;
  Condition goal;
  std::optional<Atom> metric;  ///< minimized function term, e.g. (total-cost)

  friend bool operator==(const Problem&, const Problem&) = default;
};

}  // namespace findplan::pddl
