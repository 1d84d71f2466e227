#include "findplan/world.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <queue>
#include <set>

#include "findplan/belief.hpp"
#include "findplan/error.hpp"
#include "findplan/rng.hpp"

namespace findplan {

GridMap::GridMap(int width, int height, bool free) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw ValidationError("grid dimensions must be nonnegative");
  cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                free ? 1 : 0);
}

std::size_t GridMap::free_count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1));
}

std::vector<int> GridMap::distances_from(Cell source) const {
  std::vector<int> dist(cells_.size(), -1);
  if (!is_free(source)) return dist;
  std::deque<Cell> frontier{source};
  dist[offset(source)] = 0;
  constexpr int dx[] = {1, -1, 0, 0};
  constexpr int dy[] = {0, 0, 1, -1};
  while (!frontier.empty()) {
    Cell c = frontier.front();
    frontier.pop_front();
    const int d = dist[offset(c)];
    for (int k = 0; k < 4; ++k) {
      Cell n{c.x + dx[k], c.y + dy[k]};
      if (!is_free(n) || dist[offset(n)] >= 0) continue;
      dist[offset(n)] = d + 1;
      frontier.push_back(n);
    }
  }
  return dist;
}

double path_cost(const GridMap& grid, Cell a, Cell b) {
  if (!grid.is_free(a) || !grid.is_free(b)) {
    throw PreconditionError("path_cost endpoints must be free cells");
  }
  if (a == b) return 0.0;

  auto heuristic = [&](Cell c) { return std::abs(c.x - b.x) + std::abs(c.y - b.y); };
  // (f, g, offset); the Manhattan heuristic is consistent on a unit 4-grid,
  // so the first pop of `b` is optimal.
  using Entry = std::tuple<int, int, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::vector<int> g(grid.cell_count(), -1);
  g[grid.offset(a)] = 0;
  open.emplace(heuristic(a), 0, grid.offset(a));
  constexpr int dx[] = {1, -1, 0, 0};
  constexpr int dy[] = {0, 0, 1, -1};
  const auto width = static_cast<std::size_t>(grid.width());
  while (!open.empty()) {
    auto [f, cost, off] = open.top();
    open.pop();
    if (cost > g[off]) continue;
    Cell c{static_cast<int>(off % width), static_cast<int>(off / width)};
    if (c == b) return static_cast<double>(cost) * grid.cell_size();
    for (int k = 0; k < 4; ++k) {
      Cell n{c.x + dx[k], c.y + dy[k]};
      if (!grid.is_free(n)) continue;
      const std::size_t noff = grid.offset(n);
      if (g[noff] >= 0 && g[noff] <= cost + 1) continue;
      g[noff] = cost + 1;
      open.emplace(cost + 1 + heuristic(n), cost + 1, noff);
    }
  }
  throw UnreachableError("no path between (" + std::to_string(a.x) + "," + std::to_string(a.y) +
                         ") and (" + std::to_string(b.x) + "," + std::to_string(b.y) + ")");
}

WorldModel::WorldModel(GridMap grid, std::vector<Room> rooms, std::vector<Container> containers,
                       std::vector<WorldObject> objects, std::uint64_t seed,
                       std::uint64_t config_digest)
    : grid_(std::move(grid)),
      rooms_(std::move(rooms)),
      containers_(std::move(containers)),
      objects_(std::move(objects)),
      seed_(seed),
      config_digest_(config_digest) {
  if (containers_.empty()) throw ValidationError("world has no containers");

  std::unordered_map<std::string, const Room*> room_by_id;
  for (const auto& r : rooms_) {
    if (!room_by_id.emplace(r.id, &r).second) {
      throw ValidationError("duplicate room id '" + r.id + "'");
    }
  }
  for (std::size_t i = 0; i < containers_.size(); ++i) {
    const auto& c = containers_[i];
    if (!container_by_id_.emplace(c.id, i).second) {
      throw ValidationError("duplicate container id '" + c.id + "'");
    }
    if (!grid_.is_free(c.pose)) {
      throw ValidationError("container '" + c.id + "' is not on a free cell");
    }
    if (!c.room_id.empty()) {
      auto it = room_by_id.find(c.room_id);
      if (it == room_by_id.end()) {
        throw ValidationError("container '" + c.id + "' references unknown room '" + c.room_id + "'");
      }
      if (it->second->type_name != c.room_type) {
        throw ValidationError("container '" + c.id + "' room type disagrees with room '" +
                              c.room_id + "'");
      }
    }
  }

  contents_.assign(containers_.size(), {});
  object_container_.reserve(objects_.size());
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    const auto& o = objects_[i];
    if (!object_by_id_.emplace(o.id, i).second) {
      throw ValidationError("duplicate object id '" + o.id + "'");
    }
    auto it = container_by_id_.find(o.true_container);
    if (it == container_by_id_.end()) {
      throw ValidationError("object '" + o.id + "' placed in unknown container '" +
                            o.true_container + "'");
    }
    object_container_.push_back(it->second);
    contents_[it->second].push_back(i);
  }

  // One BFS per container gives the full distance table and doubles as the
  // connectivity check: every free cell must be reachable from container 0.
  const std::size_t n = containers_.size();
  distances_.assign(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    const auto dist = grid_.distances_from(containers_[a].pose);
    if (a == 0) {
      const auto reached = static_cast<std::size_t>(
          std::count_if(dist.begin(), dist.end(), [](int d) { return d >= 0; }));
      if (reached != grid_.free_count()) {
        throw ValidationError("free cells do not form a single connected component");
      }
    }
    for (std::size_t b = 0; b < n; ++b) {
      distances_[a * n + b] =
          static_cast<double>(dist[grid_.offset(containers_[b].pose)]) * grid_.cell_size();
    }
  }
}

std::optional<std::size_t> WorldModel::find_container(std::string_view id) const {
  auto it = container_by_id_.find(std::string(id));
  if (it == container_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> WorldModel::find_object(std::string_view id) const {
  auto it = object_by_id_.find(std::string(id));
  if (it == object_by_id_.end()) return std::nullopt;
  return it->second;
}

std::size_t WorldModel::container_index(std::string_view id) const {
  if (auto i = find_container(id)) return *i;
  throw ValidationError("unknown container '" + std::string(id) + "'");
}

std::size_t WorldModel::object_index(std::string_view id) const {
  if (auto i = find_object(id)) return *i;
  throw ValidationError("unknown object '" + std::string(id) + "'");
}

namespace {

struct Slot {
  int col = 0;
  int row = 0;
};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::string next_id(std::unordered_map<std::string, int>& counters, const std::string& type) {
  return type + "_" + std::to_string(++counters[type]);
}

}  // namespace

WorldModel generate_world(std::uint64_t seed, const WorldConfig& config) {
  config.validate();

  Rng layout_rng(derive_seed(seed, 1));
  Rng container_rng(derive_seed(seed, 2));
  Rng object_rng(derive_seed(seed, 3));

  // Room types: required rooms first, then uniform extras; order shuffled
  // across layout slots.
  const int required = static_cast<int>(config.required_rooms.size());
  int room_count = layout_rng.range(config.room_count.min, config.room_count.max);
  room_count = std::max(room_count, required);
  std::vector<std::string> room_types(config.required_rooms.begin(), config.required_rooms.end());
  while (static_cast<int>(room_types.size()) < room_count) {
    room_types.push_back(config.room_types[layout_rng.index(config.room_types.size())].name);
  }
  layout_rng.shuffle(room_types);

  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(room_count))));
  const int rows = (room_count + cols - 1) / cols;
  const int w = config.room_width;
  const int h = config.room_height;
  GridMap grid(cols * (w + 1) + 1, rows * (h + 1) + 1, false);

  std::vector<Slot> slots;
  std::vector<Room> rooms;
  std::unordered_map<std::string, int> room_counters;
  for (int i = 0; i < room_count; ++i) {
    Slot s{i % cols, i / cols};
    slots.push_back(s);
    Room room;
    room.type_name = room_types[static_cast<std::size_t>(i)];
    room.id = next_id(room_counters, room.type_name);
    room.lo = {s.col * (w + 1) + 1, s.row * (h + 1) + 1};
    room.hi = {room.lo.x + w - 1, room.lo.y + h - 1};
    for (int y = room.lo.y; y <= room.hi.y; ++y) {
      for (int x = room.lo.x; x <= room.hi.x; ++x) grid.set_free({x, y}, true);
    }
    rooms.push_back(std::move(room));
  }

  // Doors: a random spanning tree over slot adjacency plus optional extras.
  struct Edge {
    std::size_t a, b;
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    for (std::size_t j = i + 1; j < slots.size(); ++j) {
      const int dc = std::abs(slots[i].col - slots[j].col);
      const int dr = std::abs(slots[i].row - slots[j].row);
      if (dc + dr == 1) edges.push_back({i, j});
    }
  }
  layout_rng.shuffle(edges);
  DisjointSets sets(slots.size());
  for (const auto& e : edges) {
    const bool tree_edge = sets.unite(e.a, e.b);
    if (!tree_edge && !layout_rng.bernoulli(config.extra_door_probability)) continue;
    const Slot& sa = slots[e.a];
    const Slot& sb = slots[e.b];
    Cell door;
    if (sa.row == sb.row) {
      const int wall_x = std::max(sa.col, sb.col) * (w + 1);
      door = {wall_x, sa.row * (h + 1) + 1 + static_cast<int>(layout_rng.index(
                                                   static_cast<std::size_t>(h)))};
    } else {
      const int wall_y = std::max(sa.row, sb.row) * (h + 1);
      door = {sa.col * (w + 1) + 1 + static_cast<int>(layout_rng.index(static_cast<std::size_t>(w))),
              wall_y};
    }
    grid.set_free(door, true);
  }

  std::unordered_map<std::string, const RoomTypeSpec*> spec_by_name;
  for (const auto& spec : config.room_types) spec_by_name[spec.name] = &spec;

  std::vector<Container> containers;
  std::unordered_map<std::string, int> container_counters;
  for (const auto& room : rooms) {
    const RoomTypeSpec& spec = *spec_by_name.at(room.type_name);
    std::vector<std::string> types = spec.required_containers;
    std::vector<std::string> optional = spec.optional_containers;
    container_rng.shuffle(optional);
    const int wanted = container_rng.range(config.containers_per_room.min,
                                           config.containers_per_room.max);
    for (const auto& t : optional) {
      if (static_cast<int>(types.size()) >= wanted) break;
      types.push_back(t);
    }

    std::vector<Cell> cells;
    for (int y = room.lo.y; y <= room.hi.y; ++y) {
      for (int x = room.lo.x; x <= room.hi.x; ++x) cells.push_back({x, y});
    }
    container_rng.shuffle(cells);
    if (types.size() > cells.size()) {
      throw ConfigError("room '" + room.type_name + "' is too small for its containers");
    }
    for (std::size_t k = 0; k < types.size(); ++k) {
      Container c;
      c.type_name = types[k];
      c.id = next_id(container_counters, c.type_name);
      c.room_id = room.id;
      c.room_type = room.type_name;
      c.pose = cells[k];
      containers.push_back(std::move(c));
    }
  }

  std::vector<WorldObject> objects;
  std::unordered_map<std::string, int> object_counters;
  std::vector<double> weights(containers.size());
  for (const auto& spec : config.objects) {
    bool any_positive = false;
    for (std::size_t i = 0; i < containers.size(); ++i) {
      double w_i = 0.0;
      for (const auto& p : spec.placements) {
        if (p.container_type == containers[i].type_name && p.room_type == containers[i].room_type) {
          w_i += p.weight;
        }
      }
      weights[i] = w_i;
      any_positive = any_positive || w_i > 0.0;
    }
    if (!any_positive) std::fill(weights.begin(), weights.end(), 1.0);
    for (int k = 0; k < spec.count; ++k) {
      WorldObject o;
      o.type_name = spec.type_name;
      o.id = next_id(object_counters, spec.type_name);
      o.true_container = containers[object_rng.weighted(weights)].id;
      objects.push_back(std::move(o));
    }
  }

  return WorldModel(std::move(grid), std::move(rooms), std::move(containers), std::move(objects),
                    seed, config.digest());
}

Observation search_container(const WorldModel& world, const BeliefState& belief,
                             std::size_t c) {
  if (c >= world.containers().size()) {
    throw PreconditionError("unknown container index " + std::to_string(c));
  }
  if (belief.robot_pose(world) != world.container(c).pose) {
    throw PreconditionError("robot is not at container '" + world.container(c).id + "'");
  }
  Observation obs;
  obs.container = c;
  if (belief.is_searched(c)) {
    obs.already_searched = true;
    return obs;
  }
  const auto contents = world.contents(c);
  obs.revealed.assign(contents.begin(), contents.end());
  return obs;
}

BeliefState BeliefState::initial(const WorldModel& world, std::size_t start_container) {
  if (start_container >= world.containers().size()) {
    throw PreconditionError("start container out of range");
  }
  BeliefState b;
  b.robot_location = start_container;
  b.searched.assign(world.containers().size(), false);
  return b;
}

std::vector<std::size_t> BeliefState::unsearched() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < searched.size(); ++i) {
    if (!searched[i]) out.push_back(i);
  }
  return out;
}

void BeliefState::apply(const Observation& obs) {
  searched.at(obs.container) = true;
  for (std::size_t o : obs.revealed) {
    if (holding == o || placed_overrides.contains(o)) continue;
    known_objects[o] = obs.container;
  }
}

}  // namespace findplan
