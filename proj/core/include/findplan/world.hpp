#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace findplan {

struct BeliefState;

struct Cell {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Occupancy grid with unit-cost 4-connected motion.
class GridMap {
 public:
  GridMap() = default;
  GridMap(int width, int height, bool free = false);

  int width() const { return width_; }
  int height() const { return height_; }
  double cell_size() const { return 1.0; }

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  bool is_free(Cell c) const { return in_bounds(c) && cells_[offset(c)] != 0; }
  void set_free(Cell c, bool free) { cells_.at(offset(c)) = free ? 1 : 0; }

  std::size_t offset(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }
  std::size_t cell_count() const { return cells_.size(); }
  std::size_t free_count() const;

  /// Breadth-first distances (in cells) from `source` to every cell; -1 marks
  /// blocked or unreachable cells.
  std::vector<int> distances_from(Cell source) const;

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> cells_;
};

/// Shortest 4-connected path length between two free cells (A* search).
/// Throws PreconditionError if either endpoint is blocked and UnreachableError
/// if no path exists.
double path_cost(const GridMap& grid, Cell a, Cell b);

struct Room {
  std::string id;
  std::string type_name;
  Cell lo;  ///< inclusive interior bounds
  Cell hi;

  friend bool operator==(const Room&, const Room&) = default;
};

struct Container {
  std::string id;
  std::string type_name;
  std::string room_id;
  std::string room_type;
  Cell pose;

  friend bool operator==(const Container&, const Container&) = default;
};

struct WorldObject {
  std::string id;
  std::string type_name;
  std::string true_container;

  friend bool operator==(const WorldObject&, const WorldObject&) = default;
};

/// Result of searching one container. `revealed` holds object indices.
struct Observation {
  std::size_t container = 0;
  std::vector<std::size_t> revealed;
  bool already_searched = false;
};

/// Ground-truth environment. Immutable once constructed; the constructor
/// checks every invariant and precomputes container-to-container distances.
class WorldModel {
 public:
  WorldModel(GridMap grid, std::vector<Room> rooms, std::vector<Container> containers,
             std::vector<WorldObject> objects, std::uint64_t seed,
             std::uint64_t config_digest);

  const GridMap& grid() const { return grid_; }
  const std::vector<Room>& rooms() const { return rooms_; }
  const std::vector<Container>& containers() const { return containers_; }
  const std::vector<WorldObject>& objects() const { return objects_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t config_digest() const { return config_digest_; }

  const Container& container(std::size_t i) const { return containers_.at(i); }
  const WorldObject& object(std::size_t i) const { return objects_.at(i); }

  std::optional<std::size_t> find_container(std::string_view id) const;
  std::optional<std::size_t> find_object(std::string_view id) const;
  std::size_t container_index(std::string_view id) const;
  std::size_t object_index(std::string_view id) const;

  /// Container index holding object `i` in the generated placement.
  std::size_t true_container_of(std::size_t object) const { return object_container_[object]; }
  /// Object indices placed in container `c`, ascending.
  std::span<const std::size_t> contents(std::size_t c) const { return contents_[c]; }

  /// Path cost between the poses of two containers.
  double distance(std::size_t a, std::size_t b) const {
    return distances_[a * containers_.size() + b];
  }

  friend bool operator==(const WorldModel& a, const WorldModel& b) {
    return a.seed_ == b.seed_ && a.config_digest_ == b.config_digest_ && a.grid_ == b.grid_ &&
           a.rooms_ == b.rooms_ && a.containers_ == b.containers_ && a.objects_ == b.objects_;
  }

 private:
  GridMap grid_;
  std::vector<Room> rooms_;
  std::vector<Container> containers_;
  std::vector<WorldObject> objects_;
  std::uint64_t seed_;
  std::uint64_t config_digest_;

  std::unordered_map<std::string, std::size_t> container_by_id_;
  std::unordered_map<std::string, std::size_t> object_by_id_;
  std::vector<std::size_t> object_container_;
  std::vector<std::vector<std::size_t>> contents_;
  std::vector<double> distances_;
};

struct IntRange {
  int min = 0;
  int max = 0;

  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct RoomTypeSpec {
  std::string name;
  std::vector<std::string> required_containers;
  std::vector<std::string> optional_containers;

  friend bool operator==(const RoomTypeSpec&, const RoomTypeSpec&) = default;
};

struct PlacementWeight {
  std::string container_type;
  std::string room_type;
  double weight = 0.0;

  friend bool operator==(const PlacementWeight&, const PlacementWeight&) = default;
};

struct ObjectSpec {
  std::string type_name;
  int count = 1;
  std::vector<PlacementWeight> placements;

  friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;
};

/// Declarative description of the household distribution.
///
/// Rooms are laid out on a near-square grid of equally sized blocks. Every
/// room type in `required_rooms` appears once; remaining rooms are drawn
/// uniformly from `room_types`. Each room receives its type's required
/// containers plus random optional ones up to a count drawn from
/// `containers_per_room`. Each object instance is placed in a container drawn
/// proportionally to its (container type, room type) weight; when no
/// container in the world carries positive weight the draw is uniform.
struct WorldConfig {
  IntRange room_count{1, 1};
  IntRange containers_per_room{1, 1};
  int room_width = 6;
  int room_height = 5;
  double extra_door_probability = 0.0;
  std::vector<std::string> required_rooms;
  std::vector<RoomTypeSpec> room_types;
  std::vector<ObjectSpec> objects;

  /// Throws ConfigError describing the first violated rule.
  void validate() const;

  /// Stable 64-bit fingerprint of the canonical JSON form.
  std::uint64_t digest() const;

  std::string to_json() const;
  static WorldConfig from_json(std::string_view text);
  static WorldConfig load(const std::filesystem::path& path);

  /// Desk-scale household used by the CLI and benchmarks.
  static WorldConfig household();

  friend bool operator==(const WorldConfig&, const WorldConfig&) = default;
};

WorldModel generate_world(std::uint64_t seed, const WorldConfig& config);

/// Reveals the contents of container `c`. The robot must stand at `c`.
/// Searching an already searched container returns an observation with
/// `already_searched` set and nothing revealed.
Observation search_container(const WorldModel& world, const BeliefState& belief, std::size_t c);

std::string serialize_world(const WorldModel& world);
WorldModel parse_world(std::string_view text);
void save_world(const WorldModel& world, const std::filesystem::path& path);
WorldModel load_world(const std::filesystem::path& path);

}  // namespace findplan
