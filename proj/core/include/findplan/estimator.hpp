#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>

#include "findplan/world.hpp"

namespace findplan {

/// Count-based P_found table with additive smoothing.
///
/// Each cell counts, over training container instances of a given
/// (container type, room type), how many held at least one object of the
/// object type. Queries return (positives + alpha) / (total + 2 alpha), which
/// stays strictly inside (0, 1). Unknown triples fall back to the same
/// formula with zero counts, i.e. 1/2.
class Estimator {
 public:
  struct Count {
    std::uint64_t positives = 0;
    std::uint64_t total = 0;

    friend bool operator==(const Count&, const Count&) = default;
  };
  using Key = std::tuple<std::string, std::string, std::string>;  // object, container, room

  explicit Estimator(double alpha = 1.0);

  /// Throws TrainingError on an empty corpus.
  static Estimator train(std::span<const WorldModel> worlds, double alpha = 1.0);

  /// Estimator with no data: every query returns 1/2.
  static Estimator uniform() { return Estimator(1.0); }

  double p_found(std::string_view object_type, std::string_view container_type,
                 std::string_view room_type) const;

  /// P_found for every container of `world`, in container order.
  std::vector<double> p_found_all(const WorldModel& world, std::string_view object_type) const;

  /// Adds one container instance to a cell.
  void observe(std::string_view object_type, std::string_view container_type,
               std::string_view room_type, bool contains_object);

  double alpha() const { return alpha_; }
  const std::map<Key, Count, std::less<>>& counts() const { return counts_; }
  const std::set<std::string, std::less<>>& object_types() const { return object_types_; }
  const std::set<std::string, std::less<>>& container_types() const { return container_types_; }
  const std::set<std::string, std::less<>>& room_types() const { return room_types_; }

  std::string serialize() const;
  static Estimator parse(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static Estimator load(const std::filesystem::path& path);

  friend bool operator==(const Estimator&, const Estimator&) = default;

 private:
  double alpha_;
  std::map<Key, Count, std::less<>> counts_;
  std::set<std::string, std::less<>> object_types_;
  std::set<std::string, std::less<>> container_types_;
  std::set<std::string, std::less<>> room_types_;
};

}  // namespace findplan
