#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "findplan/pddl/ast.hpp"

namespace findplan::pddl {

struct GroundAction {
  std::string name;  ///< e.g. "(move kitchen_1 hall_2)"
  std::vector<std::size_t> pre;      ///< fluent facts that must hold
  std::vector<std::size_t> pre_neg;  ///< fluent facts that must not hold
  std::vector<std::size_t> add;
  std::vector<std::size_t> del;
  double cost = 0.0;
};

/// Propositional task: facts are indexed, actions sorted by name.
struct GroundTask {
  std::vector<std::string> facts;
  std::vector<GroundAction> actions;
  std::vector<std::size_t> initial;
  std::vector<std::size_t> goal;      ///< positive goal facts
  std::vector<std::size_t> goal_neg;  ///< facts that must be false
  bool goal_impossible = false;       ///< a static goal literal is false

  std::optional<std::size_t> find_action(std::string_view name) const;

  std::unordered_map<std::string, std::size_t> action_index;
};

/// Instantiates every type-consistent binding of every schema, keeps those
/// reachable in the delete relaxation, and resolves cost terms from the
/// problem's numeric init. Throws GroundingError for undeclared predicates,
/// unknown objects, arity mismatches, or unresolved function terms.
GroundTask ground(const Domain& domain, const Problem& problem);

}  // namespace findplan::pddl
