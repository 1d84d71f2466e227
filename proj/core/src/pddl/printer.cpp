#include <sstream>

#include "findplan/format.hpp"
#include "findplan/pddl/parser.hpp"

namespace findplan::pddl {

namespace {

void print_typed(std::ostream& out, const std::vector<TypedName>& names) {
  bool first = true;
  for (const auto& n : names) {
    if (!first) out << ' ';
    first = false;
    out << n.name << " - " << n.type;
  }
}

void print_atom(std::ostream& out, const Atom& a) {
  out << '(' << a.predicate;
  for (const auto& arg : a.args) out << ' ' << arg;
  out << ')';
}

void print_condition(std::ostream& out, const Condition& c) {
  switch (c.kind) {
    case Condition::Kind::Atom:
      print_atom(out, c.atom);
      return;
    case Condition::Kind::Not:
      out << "(not ";
      print_condition(out, c.children.at(0));
      out << ')';
      return;
    case Condition::Kind::And:
      out << "(and";
      for (const auto& child : c.children) {
        out << ' ';
        print_condition(out, child);
      }
      out << ')';
      return;
  }
}

void print_effect(std::ostream& out, const Effect& e) {
  out << "(and";
  for (const auto& lit : e.literals) {
    out << ' ';
    if (lit.negated) out << "(not ";
    print_atom(out, lit.atom);
    if (lit.negated) out << ')';
  }
  for (const auto& inc : e.increases) {
    out << " (increase ";
    print_atom(out, inc.function);
    out << ' ';
    if (const auto* term = std::get_if<Atom>(&inc.amount)) {
      print_atom(out, *term);
    } else {
      out << format_real(std::get<double>(inc.amount));
    }
    out << ')';
  }
  out << ')';
}

}  // namespace

std::string print_domain(const Domain& d) {
  std::ostringstream out;
  out << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    out << "  (:requirements";
    for (const auto& r : d.requirements) out << ' ' << r;
    out << ")\n";
  }
  if (!d.types.empty()) {
    out << "  (:types ";
    print_typed(out, d.types);
    out << ")\n";
  }
  if (!d.constants.empty()) {
    out << "  (:constants ";
    print_typed(out, d.constants);
    out << ")\n";
  }
  if (!d.predicates.empty()) {
    out << "  (:predicates";
    for (const auto& p : d.predicates) {
      out << "\n    (" << p.name;
      if (!p.params.empty()) out << ' ';
      print_typed(out, p.params);
      out << ')';
    }
    out << ")\n";
  }
  if (!d.functions.empty()) {
    out << "  (:functions";
    for (const auto& f : d.functions) {
      out << "\n    (" << f.name;
      if (!f.params.empty()) out << ' ';
      print_typed(out, f.params);
      out << ") - number";
    }
    out << ")\n";
  }
  for (const auto& a : d.actions) {
    out << "  (:action " << a.name << "\n    :parameters (";
    print_typed(out, a.params);
    out << ")\n    :precondition ";
    print_condition(out, a.precondition);
    out << "\n    :effect ";
    print_effect(out, a.effect);
    out << ")\n";
  }
  out << ")\n";
  return out.str();
}

std::string print_problem(const Problem& p) {
  std::ostringstream out;
  out << "(define (problem " << p.name << ")\n";
  out << "  (:domain " << p.domain_name << ")\n";
  out << "  (:objects";
  if (!p.objects.empty()) out << ' ';
  print_typed(out, p.objects);
  out << ")\n  (:init";
  for (const auto& a : p.init) {
    out << "\n    ";
    print_atom(out, a);
  }
  for (const auto& f : p.init_numeric) {
    out << "\n    (= ";
    print_atom(out, f.term);
    out << ' ' << format_real(f.value) << ')';
  }
  out << ")\n  (:goal ";
  print_condition(out, p.goal);
  out << ")\n";
  if (p.metric) {
    out << "  (:metric minimize ";
    print_atom(out, *p.metric);
    out << ")\n";
  }
  out << ")\n";
  return out.str();
}

}  // namespace findplan::pddl
