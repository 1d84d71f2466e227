#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "findplan/error.hpp"
#include "findplan/pddl/ground.hpp"

namespace findplan::pddl {

struct Plan {
  std::vector<std::string> actions;
  double cost = 0.0;

  friend bool operator==(const Plan&, const Plan&) = default;
};

enum class PlanStatus { Solved, Unsolvable, Timeout };

const char* to_string(PlanStatus status);

struct PlanOptions {
  double weight = 2.0;                          ///< f = g + weight * h
  std::optional<double> timeout_seconds;        ///< wall-clock limit
  std::optional<std::size_t> max_expansions;    ///< deterministic effort limit
};

struct PlanResult {
  PlanStatus status = PlanStatus::Unsolvable;
  Plan plan;
  std::size_t expansions = 0;
  std::size_t evaluations = 0;
  double seconds = 0.0;
};

/// Weighted A* with a cost-sensitive relaxed-plan (FF) heuristic and
/// reopening. Ties on f are broken by lower h, then by the name of the
/// generating action, then by generation order.
PlanResult plan(const GroundTask& task, const PlanOptions& options = {});

/// Relaxed-plan heuristic value of the initial state; infinity for dead ends.
double relaxed_plan_cost(const GroundTask& task, const std::vector<std::size_t>& state);

/// Thrown by validate; `step()` is the zero-based index of the offending
/// action, or the plan length when the goal is not reached.
class PlanValidationError : public ValidationError {
 public:
  PlanValidationError(const std::string& what, std::size_t step)
      : ValidationError("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// Replays the plan from the initial state, checking every precondition and
/// the goal. Returns the accumulated cost.
double validate(const Plan& plan, const GroundTask& task);

/// Plan text: one "(action args)" per line followed by "; cost = <c>".
std::string format_plan(const Plan& plan);

}  // namespace findplan::pddl
