#include <fstream>
#include <set>
#include <sstream>

#include "findplan/error.hpp"
#include "findplan/world.hpp"
#include "json.hpp"

namespace findplan {

using json = nlohmann::ordered_json;

void WorldConfig::validate() const {
  if (room_count.min < 1) throw ConfigError("room_count must allow at least one room");
  if (room_count.min > room_count.max) throw ConfigError("room_count min exceeds max");
  if (containers_per_room.min < 1) throw ConfigError("containers_per_room min must be >= 1");
  if (containers_per_room.min > containers_per_room.max) {
    throw ConfigError("containers_per_room min exceeds max");
  }
  if (room_width < 1 || room_height < 1) throw ConfigError("room_size must be positive");
  if (extra_door_probability < 0.0 || extra_door_probability > 1.0) {
    throw ConfigError("extra_door_probability must lie in [0, 1]");
  }
  if (room_types.empty()) throw ConfigError("room_types catalog is empty");
  if (objects.empty()) throw ConfigError("object catalog is empty");

  std::set<std::string> room_names;
  std::set<std::string> container_names;
  for (const auto& rt : room_types) {
    if (rt.name.empty()) throw ConfigError("room type with empty name");
    if (!room_names.insert(rt.name).second) {
      throw ConfigError("duplicate room type '" + rt.name + "'");
    }
    if (rt.required_containers.empty() && rt.optional_containers.empty()) {
      throw ConfigError("room type '" + rt.name + "' lists no containers");
    }
    const auto total = rt.required_containers.size() + rt.optional_containers.size();
    const auto needed = std::max<std::size_t>(rt.required_containers.size(),
                                              static_cast<std::size_t>(containers_per_room.max));
    if (std::min(total, needed) > static_cast<std::size_t>(room_width * room_height)) {
      throw ConfigError("room type '" + rt.name + "' does not fit its containers");
    }
    for (const auto& c : rt.required_containers) container_names.insert(c);
    for (const auto& c : rt.optional_containers) container_names.insert(c);
  }
  if (required_rooms.size() > static_cast<std::size_t>(room_count.max)) {
    throw ConfigError("more required rooms than room_count max");
  }
  for (const auto& r : required_rooms) {
    if (!room_names.contains(r)) throw ConfigError("required room '" + r + "' is not a room type");
  }

  std::set<std::string> object_names;
  for (const auto& o : objects) {
    if (o.type_name.empty()) throw ConfigError("object type with empty name");
    if (!object_names.insert(o.type_name).second) {
      throw ConfigError("duplicate object type '" + o.type_name + "'");
    }
    if (o.count < 1) throw ConfigError("object '" + o.type_name + "' count must be >= 1");
    bool positive = false;
    for (const auto& p : o.placements) {
      if (p.weight < 0.0) {
        throw ConfigError("object '" + o.type_name + "' has a negative placement weight");
      }
      if (!room_names.contains(p.room_type)) {
        throw ConfigError("object '" + o.type_name + "' references unknown room type '" +
                          p.room_type + "'");
      }
      if (!container_names.contains(p.container_type)) {
        throw ConfigError("object '" + o.type_name + "' references unknown container type '" +
                          p.container_type + "'");
      }
      positive = positive || p.weight > 0.0;
    }
    if (!positive) {
      throw ConfigError("object '" + o.type_name + "' has no positive placement weight");
    }
  }
}

std::string WorldConfig::to_json() const {
  json j;
  j["room_count"] = {room_count.min, room_count.max};
  j["containers_per_room"] = {containers_per_room.min, containers_per_room.max};
  j["room_size"] = {room_width, room_height};
  j["extra_door_probability"] = extra_door_probability;
  j["required_rooms"] = required_rooms;
  json rooms = json::array();
  for (const auto& rt : room_types) {
    rooms.push_back({{"name", rt.name},
                     {"required", rt.required_containers},
                     {"optional", rt.optional_containers}});
  }
  j["room_types"] = rooms;
  json objs = json::array();
  for (const auto& o : objects) {
    json placements = json::array();
    for (const auto& p : o.placements) {
      placements.push_back({p.container_type, p.room_type, p.weight});
    }
    objs.push_back({{"type", o.type_name}, {"count", o.count}, {"placements", placements}});
  }
  j["objects"] = objs;
  return j.dump(2);
}

namespace {

IntRange read_range(const json& j, const char* key, IntRange fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_number_integer()) return {v.get<int>(), v.get<int>()};
  if (!v.is_array() || v.size() != 2) {
    throw ConfigError(std::string(key) + " must be an integer or a [min, max] pair");
  }
  return {v[0].get<int>(), v[1].get<int>()};
}

}  // namespace

WorldConfig WorldConfig::from_json(std::string_view text) {
  WorldConfig cfg;
  try {
    const json j = json::parse(text);
    cfg.room_count = read_range(j, "room_count", cfg.room_count);
    cfg.containers_per_room = read_range(j, "containers_per_room", cfg.containers_per_room);
    if (j.contains("room_size")) {
      const auto& s = j.at("room_size");
      if (!s.is_array() || s.size() != 2) throw ConfigError("room_size must be [width, height]");
      cfg.room_width = s[0].get<int>();
      cfg.room_height = s[1].get<int>();
    }
    cfg.extra_door_probability = j.value("extra_door_probability", 0.0);
    cfg.required_rooms = j.value("required_rooms", std::vector<std::string>{});
    for (const auto& rt : j.at("room_types")) {
      RoomTypeSpec spec;
      spec.name = rt.at("name").get<std::string>();
      spec.required_containers = rt.value("required", std::vector<std::string>{});
      spec.optional_containers = rt.value("optional", std::vector<std::string>{});
      cfg.room_types.push_back(std::move(spec));
    }
    for (const auto& o : j.at("objects")) {
      ObjectSpec spec;
      spec.type_name = o.at("type").get<std::string>();
      spec.count = o.value("count", 1);
      for (const auto& p : o.at("placements")) {
        if (!p.is_array() || p.size() != 3) {
          throw ConfigError("placement of '" + spec.type_name +
                            "' must be [container_type, room_type, weight]");
        }
        spec.placements.push_back(
            {p[0].get<std::string>(), p[1].get<std::string>(), p[2].get<double>()});
      }
      cfg.objects.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed world config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

WorldConfig WorldConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

std::uint64_t WorldConfig::digest() const {
  // FNV-1a over the canonical JSON text.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : to_json()) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

WorldConfig WorldConfig::household() {
  WorldConfig cfg;
  cfg.room_count = {4, 6};
  cfg.containers_per_room = {3, 5};
  cfg.room_width = 8;
  cfg.room_height = 6;
  cfg.extra_door_probability = 0.25;
  cfg.required_rooms = {"kitchen", "living_room", "bedroom", "bathroom"};
  cfg.room_types = {
      {"kitchen", {"countertop", "fridge", "cabinet", "stove"}, {"sink", "dining_table"}},
      {"living_room", {"sofa", "tv_stand"}, {"coffee_table", "shelf", "armchair"}},
      {"bedroom", {"bed", "nightstand"}, {"desk", "dresser", "wardrobe"}},
      {"bathroom", {"vanity"}, {"bathtub", "towel_rack", "laundry_basket"}},
      {"office", {"desk", "shelf"}, {"filing_cabinet", "armchair"}},
  };

  auto obj = [](std::string type, std::vector<PlacementWeight> placements) {
    return ObjectSpec{std::move(type), 1, std::move(placements)};
  };
  const std::string k = "kitchen";
  const std::string lr = "living_room";
  const std::string br = "bedroom";
  const std::string ba = "bathroom";
  const std::string of = "office";
  cfg.objects = {
      obj("egg", {{"fridge", k, 9}, {"countertop", k, 1}}),
      obj("potato", {{"cabinet", k, 5}, {"countertop", k, 3}, {"fridge", k, 1}}),
      obj("tomato", {{"fridge", k, 6}, {"countertop", k, 3}}),
      obj("apple", {{"countertop", k, 3}, {"dining_table", k, 3}, {"fridge", k, 2},
                    {"coffee_table", lr, 1}}),
      obj("bread", {{"countertop", k, 6}, {"cabinet", k, 2}, {"dining_table", k, 2}}),
      obj("knife", {{"countertop", k, 4}, {"cabinet", k, 4}, {"sink", k, 2}}),
      obj("pot", {{"stove", k, 7}, {"cabinet", k, 3}, {"sink", k, 1}}),
      obj("kettle", {{"stove", k, 6}, {"countertop", k, 4}}),
      obj("coffee_machine", {{"countertop", k, 9}, {"dining_table", k, 1}}),
      obj("toaster", {{"countertop", k, 9}, {"cabinet", k, 1}}),
      obj("bowl", {{"cabinet", k, 6}, {"dining_table", k, 3}, {"sink", k, 2}}),
      obj("plate", {{"cabinet", k, 5}, {"dining_table", k, 4}, {"sink", k, 2}}),
      obj("mug", {{"cabinet", k, 4}, {"coffee_table", lr, 2}, {"desk", br, 1}, {"desk", of, 2},
                  {"sink", k, 1}}),
      obj("coffee_grinds", {{"cabinet", k, 7}, {"countertop", k, 3}}),
      obj("water_bottle", {{"fridge", k, 6}, {"nightstand", br, 2}, {"desk", of, 2},
                           {"countertop", k, 1}}),
      obj("cellphone", {{"nightstand", br, 4}, {"bed", br, 3}, {"sofa", lr, 2},
                        {"desk", of, 2}}),
      obj("laptop", {{"desk", of, 6}, {"desk", br, 4}, {"bed", br, 2}, {"sofa", lr, 1}}),
      obj("remote", {{"tv_stand", lr, 5}, {"sofa", lr, 4}, {"coffee_table", lr, 3}}),
      obj("book", {{"shelf", lr, 5}, {"shelf", of, 5}, {"nightstand", br, 2},
                   {"coffee_table", lr, 1}}),
      obj("pillow", {{"bed", br, 7}, {"sofa", lr, 3}, {"armchair", lr, 1}}),
      obj("towel", {{"towel_rack", ba, 6}, {"bathtub", ba, 2}, {"vanity", ba, 2},
                    {"laundry_basket", ba, 2}}),
      obj("soap", {{"vanity", ba, 7}, {"bathtub", ba, 3}, {"sink", k, 1}}),
      obj("toothbrush", {{"vanity", ba, 9}}),
      obj("alarm_clock", {{"nightstand", br, 7}, {"dresser", br, 2}, {"desk", br, 1}}),
      obj("keys", {{"dresser", br, 3}, {"coffee_table", lr, 3}, {"tv_stand", lr, 2},
                   {"countertop", k, 1}}),
      obj("shirt", {{"wardrobe", br, 5}, {"dresser", br, 4}, {"laundry_basket", ba, 3},
                    {"bed", br, 1}}),
  };
  return cfg;
}

}  // namespace findplan
