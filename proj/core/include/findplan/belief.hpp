#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "findplan/world.hpp"

namespace findplan {

/// What the robot currently knows. Object and container references are
/// indices into the WorldModel the belief was created for.
struct BeliefState {
  std::size_t robot_location = 0;                   ///< container the robot stands at
  std::map<std::size_t, std::size_t> known_objects;  ///< object -> container
  std::vector<bool> searched;                        ///< per container
  std::optional<std::size_t> holding;
  std::map<std::size_t, std::size_t> placed_overrides;  ///< objects the robot moved

  static BeliefState initial(const WorldModel& world, std::size_t start_container);

  Cell robot_pose(const WorldModel& world) const {
    return world.container(robot_location).pose;
  }
  bool is_searched(std::size_t c) const { return searched.at(c); }
  std::vector<std::size_t> unsearched() const;
  bool is_known(std::size_t object) const {
    return known_objects.contains(object) || holding == object;
  }

  /// Marks the container searched and records revealed objects that the
  /// robot has not already moved or picked up.
  void apply(const Observation& obs);

  friend bool operator==(const BeliefState&, const BeliefState&) = default;
};

}  // namespace findplan
