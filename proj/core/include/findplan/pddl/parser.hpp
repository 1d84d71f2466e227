#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "findplan/pddl/ast.hpp"

namespace findplan::pddl {

/// Parsed s-expression node with its source position.
struct SExpr {
  bool is_list = false;
  std::string token;  ///< symbol or number text, lower-cased
  std::vector<SExpr> items;
  int line = 0;
  int column = 0;
};

/// Splits PDDL text into a list of top-level s-expressions. Comments run
/// from ';' to end of line. Throws ParseError with line/column on
/// unbalanced parentheses or stray characters.
std::vector<SExpr> read_sexprs(std::string_view text);

/// Supported requirement flags.
inline constexpr std::string_view kSupportedRequirements[] = {
    ":strips", ":typing", ":negative-preconditions", ":action-costs"};

/// Parses and checks a domain: declared types, predicate and function
/// arities, variable scoping. Throws ParseError, UnsupportedRequirementError.
Domain parse_domain(std::string_view text);

/// Parses a problem against `domain`. Object types are checked here;
/// init and goal atoms are checked when grounding.
Problem parse_problem(std::string_view text, const Domain& domain);

std::string print_domain(const Domain& domain);
std::string print_problem(const Problem& problem);

}  // namespace findplan::pddl
