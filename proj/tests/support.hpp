#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "findplan/world.hpp"

namespace fptest {

struct Spot {
  std::string id;
  std::string type;
  int x = 0;
  std::string room_type = "kitchen";
};

struct Item {
  std::string id;
  std::string type;
  std::string container;
};

// Containers along a one-cell-high open corridor, so the distance between
// two containers is just |x_a - x_b|.
inline findplan::WorldModel corridor(const std::vector<Spot>& spots, const std::vector<Item>& items,
                                     int width = 0) {
  for (const auto& s : spots) width = std::max(width, s.x + 1);
  findplan::GridMap grid(width, 1, true);
  std::vector<findplan::Container> containers;
  for (const auto& s : spots) containers.push_back({s.id, s.type, "", s.room_type, {s.x, 0}});
  std::vector<findplan::WorldObject> objects;
  for (const auto& i : items) objects.push_back({i.id, i.type, i.container});
  return findplan::WorldModel(std::move(grid), {}, std::move(containers), std::move(objects), 0, 0);
}

inline std::filesystem::path fixture(const std::string& rel) {
  return std::filesystem::path(FINDPLAN_FIXTURE_DIR) / rel;
}

inline std::string read_fixture(const std::string& rel) {
  std::ifstream in(fixture(rel), std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("findplan_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fptest
