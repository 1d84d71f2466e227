#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "findplan/belief.hpp"
#include "findplan/lios.hpp"
#include "findplan/world.hpp"

namespace findplan {

enum class ScenarioKind { Deliver3, Breakfast, Coffee, BreakfastCoffee, AnyOfThree };

inline constexpr ScenarioKind kAllScenarios[] = {ScenarioKind::Deliver3, ScenarioKind::Breakfast,
                                                 ScenarioKind::Coffee, ScenarioKind::BreakfastCoffee,
                                                 ScenarioKind::AnyOfThree};

std::string_view to_string(ScenarioKind kind);
/// Accepts the canonical names ("Deliver3", "AnyOfThree", ...), case-insensitively.
ScenarioKind parse_scenario_kind(std::string_view name);

/// One instantiated task. Object and location references are world indices.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::Deliver3;
  std::string name;
  double t_max = 0.0;   ///< planning time budget per planner call, seconds
  double r_fail = 0.0;  ///< cost reported for a failed trial
  std::size_t start = 0;  ///< robot start container

  std::vector<std::pair<std::size_t, std::size_t>> deliveries;  ///< Deliver3: (object, container)
  std::vector<std::size_t> options;                            ///< AnyOfThree candidates
  std::optional<std::size_t> site;  ///< serve site, or the return site for AnyOfThree

  std::vector<std::size_t> relevant_objects;  ///< sorted
  std::vector<std::size_t> goal_locations;    ///< sorted, distinct
  std::vector<std::string> operators;         ///< operator names in the emitted domain, besides find

  std::string goal_text(const WorldModel& world) const;
};

/// Draws the scenario's random choices (start, objects, targets, site).
/// Throws ScenarioError when the world lacks the object types it needs.
ScenarioSpec build_scenario(ScenarioKind kind, const WorldModel& world, std::uint64_t seed);

/// Which start locations `find` is grounded with. GoalAnchored adds every
/// goal location to the robot's current location so later finds in a plan
/// can start where earlier ones ended; CurrentOnly keeps just the current
/// location.
enum class FindGrounding { GoalAnchored, CurrentOnly };

struct FindKey {
  std::size_t object = 0;
  std::size_t start = 0;
  std::size_t target = 0;

  friend auto operator<=>(const FindKey&, const FindKey&) = default;
};

struct FindCostTable {
  std::map<FindKey, double> entries;

  void set(const FindKey& key, double cost) { entries[key] = cost; }
  std::optional<double> get(const FindKey& key) const;
};

/// Goal-relevant objects the robot has neither seen nor is holding.
std::vector<std::size_t> missing_objects(const BeliefState& belief, const ScenarioSpec& scenario);

/// Every (object, start, target) triple for which a find grounding is emitted.
std::vector<FindKey> find_groundings(const BeliefState& belief, const ScenarioSpec& scenario,
                                     FindGrounding mode = FindGrounding::GoalAnchored);

/// Locations named in the emitted problem: the robot's location, goal
/// locations and known positions of goal-relevant objects. Sorted.
std::vector<std::size_t> relevant_locations(const BeliefState& belief, const ScenarioSpec& scenario);

struct PddlText {
  std::string domain;
  std::string problem;
};

/// Domain and problem for the current belief. `facts` carries task progress
/// atoms such as "(boiled egg_1)" that persist across replanning. Throws
/// EmissionError when a find grounding has no valid cost.
PddlText emit_pddl(const WorldModel& world, const BeliefState& belief, const ScenarioSpec& scenario,
                   const std::set<std::string>& facts, const FindCostTable& find_costs,
                   const CostModel& costs, FindGrounding mode = FindGrounding::GoalAnchored);

/// True when the predicate of a ground atom "(pred args...)" is task
/// progress state rather than robot or object position.
bool is_progress_fact(std::string_view atom);

}  // namespace findplan
