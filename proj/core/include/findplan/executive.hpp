#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "findplan/belief.hpp"
#include "findplan/estimator.hpp"
#include "findplan/lios.hpp"
#include "findplan/tasks.hpp"
#include "findplan/world.hpp"

namespace findplan {

enum class Strategy { OptGreedy, PesGreedy, OptLIOS, PesLIOS, ModelLIOS };

inline constexpr Strategy kAllStrategies[] = {Strategy::OptGreedy, Strategy::PesGreedy, Strategy::OptLIOS,
                                              Strategy::PesLIOS, Strategy::ModelLIOS};

enum class FindCostMode { Optimistic, Pessimistic, Model };
enum class SearchPolicy { Greedy, Lios };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view name);  ///< case-insensitive; throws ScenarioError
FindCostMode find_cost_mode(Strategy s);
SearchPolicy search_policy(Strategy s);

/// One executed primitive. `verb` is move, search, pick, place or op; for
/// op the first argument is the operator name. Arguments are world ids.
struct TraceStep {
  std::string verb;
  std::vector<std::string> args;
  double cost = 0.0;

  std::string text() const;  ///< "move a b"

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct FindOutcome {
  std::size_t object = 0;
  double cost = 0.0;
  std::size_t containers_searched = 0;
  std::size_t recomputations = 0;  ///< times the candidate subset ran dry
};

/// Runs `policy` against the ground truth: visit each container in turn,
/// search it, and on success pick the object and carry it to q_to. When the
/// sequence is exhausted without success the policy is recomputed over the
/// remaining unsearched containers (LIOS when `est` is given, Greedy
/// otherwise). Updates `belief` in place and appends to `trace` if given.
/// Throws PreconditionError if the robot is not at q_from, already holds an
/// object, or the object is already known; InternalError if every container
/// is searched without finding it.
FindOutcome execute_find(const WorldModel& world, BeliefState& belief, const FindPolicy& policy,
                         const CostModel& costs, const Estimator* est = nullptr,
                         std::vector<TraceStep>* trace = nullptr,
                         std::size_t max_candidates = kDefaultMaxCandidates);

/// Planner effort granted per second of a scenario's time budget. Budgets
/// are enforced as node-expansion limits so results do not depend on
/// machine speed; the wall-clock budget is kept as a backstop.
inline constexpr double kExpansionsPerSecond = 250.0;

struct ExecutiveOptions {
  /// Plain A* ordering by default: with an inflated heuristic the planner
  /// prefers to run the most expensive find first, since the costs still
  /// ahead are counted `weight` times.
  double planner_weight = 1.0;
  double expansions_per_second = kExpansionsPerSecond;
  bool wall_clock_backstop = true;
  FindGrounding grounding = FindGrounding::GoalAnchored;
  std::size_t max_candidates = kDefaultMaxCandidates;
  std::size_t max_replans = 100;
};

struct TrialRecord {
  std::string scenario;
  std::string strategy;
  std::uint64_t seed = 0;
  bool success = false;
  double cost = 0.0;  ///< r_fail on failure
  std::string failure;  ///< empty on success
  std::size_t containers_searched = 0;
  std::size_t replans = 0;
  std::size_t expansions = 0;
  double planner_seconds = 0.0;  ///< wall time; not part of the JSON record
  std::vector<TraceStep> trace;

  /// One-line JSON object. Wall time is left out so records are reproducible.
  std::string to_json() const;
};

/// Plan, execute, observe and replan until the scenario goal holds or the
/// planner fails within its budget. Never throws for trial-level failures;
/// they are folded into the record.
TrialRecord run_trial(const WorldModel& world, const ScenarioSpec& scenario, Strategy strategy,
                      const Estimator& est, const CostModel& costs, std::uint64_t seed,
                      const ExecutiveOptions& options = {});

/// Replays a trace against the world from the scenario's start and checks
/// every step's preconditions and cost, then the scenario goal. Returns the
/// summed cost; throws ValidationError naming the offending step.
double validate_trace(const WorldModel& world, const ScenarioSpec& scenario, const std::vector<TraceStep>& trace,
                      const CostModel& costs);

}  // namespace findplan
