#include <gtest/gtest.h>

#include <deque>
#include <set>

#include "findplan/belief.hpp"
#include "findplan/error.hpp"
#include "findplan/rng.hpp"
#include "findplan/world.hpp"
#include "support.hpp"

using namespace findplan;

namespace {

WorldConfig tiny_config() {
  WorldConfig cfg;
  cfg.room_types = {{"kitchen", {"shelf"}, {}}};
  cfg.required_rooms = {"kitchen"};
  cfg.objects = {{"mug", 1, {{"shelf", "kitchen", 1.0}}}};
  return cfg;
}

// One kitchen with a shelf and a box; mugs prefer shelves 3:1.
WorldConfig three_to_one_config() {
  WorldConfig cfg;
  cfg.containers_per_room = {2, 2};
  cfg.room_types = {{"kitchen", {"shelf", "box"}, {}}};
  cfg.required_rooms = {"kitchen"};
  cfg.objects = {{"mug", 1, {{"shelf", "kitchen", 3.0}, {"box", "kitchen", 1.0}}}};
  return cfg;
}

int bfs(const GridMap& g, Cell a, Cell b) {
  std::vector<int> dist(g.cell_count(), -1);
  std::deque<Cell> queue{a};
  dist[g.offset(a)] = 0;
  while (!queue.empty()) {
    Cell c = queue.front();
    queue.pop_front();
    if (c == b) return dist[g.offset(c)];
    for (Cell n : {Cell{c.x + 1, c.y}, Cell{c.x - 1, c.y}, Cell{c.x, c.y + 1}, Cell{c.x, c.y - 1}}) {
      if (g.is_free(n) && dist[g.offset(n)] < 0) {
        dist[g.offset(n)] = dist[g.offset(c)] + 1;
        queue.push_back(n);
      }
    }
  }
  return -1;
}

}  // namespace

TEST(GenerateWorld, SingleLegalPlacement) {
  const auto world = generate_world(0, tiny_config());
  ASSERT_EQ(world.containers().size(), 1u);
  ASSERT_EQ(world.objects().size(), 1u);
  EXPECT_EQ(world.objects()[0].true_container, world.containers()[0].id);
}

TEST(GenerateWorld, SameSeedSameWorld) {
  const auto cfg = WorldConfig::household();
  const auto a = generate_world(7, cfg);
  const auto b = generate_world(7, cfg);
  EXPECT_EQ(a, b);
  EXPECT_EQ(serialize_world(a), serialize_world(b));
  EXPECT_NE(serialize_world(a), serialize_world(generate_world(8, cfg)));
}

TEST(GenerateWorld, PlacementFrequencyFollowsWeights) {
  const auto cfg = three_to_one_config();
  int on_shelf = 0;
  const int n = 10000;
  for (int s = 0; s < n; ++s) {
    const auto w = generate_world(static_cast<std::uint64_t>(s), cfg);
    const auto c = w.true_container_of(0);
    if (w.container(c).type_name == "shelf") ++on_shelf;
  }
  EXPECT_NEAR(on_shelf / double(n), 0.75, 0.02);
}

TEST(GenerateWorld, HouseholdInvariants) {
  const auto cfg = WorldConfig::household();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto w = generate_world(seed, cfg);
    std::set<std::string> ids;
    for (const auto& c : w.containers()) {
      EXPECT_TRUE(w.grid().is_free(c.pose));
      EXPECT_TRUE(ids.insert(c.id).second);
    }
    for (std::size_t i = 0; i < w.objects().size(); ++i) {
      EXPECT_TRUE(w.find_container(w.object(i).true_container).has_value());
    }
    // every free cell is connected to the first container
    const auto dist = w.grid().distances_from(w.container(0).pose);
    for (int y = 0; y < w.grid().height(); ++y) {
      for (int x = 0; x < w.grid().width(); ++x) {
        if (w.grid().is_free({x, y})) EXPECT_GE(dist[w.grid().offset({x, y})], 0);
      }
    }
  }
}

TEST(GenerateWorld, InvalidConfigRejected) {
  auto cfg = tiny_config();
  cfg.objects.clear();
  EXPECT_THROW(generate_world(0, cfg), ConfigError);

  cfg = tiny_config();
  cfg.room_count = {0, 0};
  cfg.required_rooms.clear();
  EXPECT_THROW(generate_world(0, cfg), ConfigError);

  cfg = tiny_config();
  cfg.objects[0].placements[0].weight = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);

  cfg = tiny_config();
  cfg.objects[0].placements[0].weight = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(WorldConfig, JsonRoundTrip) {
  const auto cfg = WorldConfig::household();
  const auto back = WorldConfig::from_json(cfg.to_json());
  EXPECT_EQ(cfg, back);
  EXPECT_EQ(cfg.digest(), back.digest());
  EXPECT_THROW(WorldConfig::from_json("{ not json"), ConfigError);
}

TEST(PathCost, Identity) {
  GridMap g(4, 4, true);
  EXPECT_EQ(path_cost(g, {2, 2}, {2, 2}), 0.0);
}

TEST(PathCost, StraightCorridor) {
  GridMap g(7, 1, true);
  EXPECT_EQ(path_cost(g, {0, 0}, {6, 0}), 6.0);
}

TEST(PathCost, DetourMatchesBfs) {
  GridMap g(10, 10, true);
  for (int y = 0; y < 9; ++y) g.set_free({5, y}, false);  // wall with a gap at the bottom
  EXPECT_EQ(path_cost(g, {2, 2}, {8, 2}), bfs(g, {2, 2}, {8, 2}));
  EXPECT_EQ(path_cost(g, {2, 2}, {8, 2}), 20.0);
}

TEST(PathCost, RandomGridsMatchBfs) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    GridMap g(12, 9, true);
    for (int k = 0; k < 40; ++k) g.set_free({rng.range(0, 11), rng.range(0, 8)}, false);
    Cell a{rng.range(0, 11), rng.range(0, 8)};
    Cell b{rng.range(0, 11), rng.range(0, 8)};
    g.set_free(a, true);
    g.set_free(b, true);
    const int expected = bfs(g, a, b);
    if (expected < 0) {
      EXPECT_THROW(path_cost(g, a, b), UnreachableError);
    } else {
      EXPECT_EQ(path_cost(g, a, b), expected);
    }
  }
}

TEST(PathCost, Errors) {
  GridMap g(5, 1, true);
  g.set_free({2, 0}, false);
  EXPECT_THROW(path_cost(g, {0, 0}, {4, 0}), UnreachableError);
  EXPECT_THROW(path_cost(g, {0, 0}, {2, 0}), PreconditionError);
}

TEST(PathCost, SymmetricAndTriangle) {
  const auto w = generate_world(11, WorldConfig::household());
  std::vector<Cell> free;
  for (int y = 0; y < w.grid().height(); ++y) {
    for (int x = 0; x < w.grid().width(); ++x) {
      if (w.grid().is_free({x, y})) free.push_back({x, y});
    }
  }
  Rng rng(5);
  for (int t = 0; t < 1000; ++t) {
    Cell a = free[rng.index(free.size())];
    Cell b = free[rng.index(free.size())];
    Cell c = free[rng.index(free.size())];
    const double ab = path_cost(w.grid(), a, b);
    EXPECT_EQ(ab, path_cost(w.grid(), b, a));
    EXPECT_LE(path_cost(w.grid(), a, c), ab + path_cost(w.grid(), b, c) + 1e-9);
  }
}

TEST(SearchContainer, RevealsGroundTruth) {
  const auto w = fptest::corridor({{"a", "shelf", 0}, {"b", "shelf", 3}}, {{"mug_1", "mug", "b"}});
  auto belief = BeliefState::initial(w, 0);
  EXPECT_TRUE(search_container(w, belief, 0).revealed.empty());

  belief.robot_location = 1;
  const auto obs = search_container(w, belief, 1);
  ASSERT_EQ(obs.revealed.size(), 1u);
  EXPECT_EQ(w.object(obs.revealed[0]).id, "mug_1");
  belief.apply(obs);
  EXPECT_TRUE(belief.is_searched(1));
  EXPECT_EQ(belief.known_objects.at(0), 1u);

  const auto again = search_container(w, belief, 1);
  EXPECT_TRUE(again.already_searched);
  EXPECT_TRUE(again.revealed.empty());
}

TEST(SearchContainer, RobotMustBeThere) {
  const auto w = fptest::corridor({{"a", "shelf", 0}, {"b", "shelf", 3}}, {});
  const auto belief = BeliefState::initial(w, 0);
  EXPECT_THROW(search_container(w, belief, 1), PreconditionError);
}

TEST(SearchContainer, UnionOfObservationsIsPartition) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto w = generate_world(seed, WorldConfig::household());
    auto belief = BeliefState::initial(w, 0);
    std::vector<std::size_t> seen;
    for (std::size_t c = 0; c < w.containers().size(); ++c) {
      belief.robot_location = c;
      const auto obs = search_container(w, belief, c);
      for (auto o : obs.revealed) EXPECT_EQ(w.true_container_of(o), c);
      seen.insert(seen.end(), obs.revealed.begin(), obs.revealed.end());
      belief.apply(obs);
    }
    std::sort(seen.begin(), seen.end());
    ASSERT_EQ(seen.size(), w.objects().size());
    for (std::size_t i = 0; i < seen.size(); ++i) EXPECT_EQ(seen[i], i);
  }
}

TEST(WorldFile, RoundTrip) {
  const auto w = generate_world(42, WorldConfig::household());
  const auto text = serialize_world(w);
  const auto back = parse_world(text);
  EXPECT_EQ(w, back);
  EXPECT_EQ(text, serialize_world(back));

  const auto dir = fptest::temp_dir("world_file");
  save_world(w, dir / "w.world");
  EXPECT_EQ(load_world(dir / "w.world"), w);
}

TEST(WorldFile, MalformedInputReportsLine) {
  auto text = serialize_world(generate_world(1, WorldConfig::household()));
  const auto grid_row = text.find('\n', text.find("grid ")) + 1;
  text[grid_row + 1] = '?';
  try {
    parse_world(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5);
  }
  EXPECT_THROW(parse_world(text.substr(0, text.size() / 2)), ParseError);
  EXPECT_THROW(parse_world("findplan-world 9\n"), ParseError);
}

TEST(WorldConfig, ShippedHouseholdMatchesBuiltin) {
  EXPECT_EQ(WorldConfig::load(std::string(FINDPLAN_CONFIG_DIR) + "/household.json"), WorldConfig::household());
  const auto small = WorldConfig::load(std::string(FINDPLAN_CONFIG_DIR) + "/studio.json");
  EXPECT_NO_THROW(small.validate());
  EXPECT_NO_THROW(generate_world(1, small));
}
