#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "findplan/belief.hpp"
#include "findplan/estimator.hpp"
#include "findplan/world.hpp"

namespace findplan {

/// Action costs. Travel cost (R_move) always comes from the world's path
/// costs and is not stored here.
struct CostModel {
  double r_search = 0.0;
  double r_pick = 5.0;
  double r_place = 5.0;
  double fixed_op_cost = 5.0;  ///< every known-space operator besides move
  double pessimistic_penalty = 100.0;

  /// Throws ValidationError if any cost is negative or not finite.
  void validate() const;
};

/// Travel costs of one single-object search problem: a start point, a
/// terminal point and `size()` candidate containers. Candidate `i` is
/// addressed by its position in this table.
struct SearchGeometry {
  std::vector<double> from_start;  ///< R_move(q_from, c_i)
  std::vector<double> to_goal;     ///< R_move(c_i, q_to)
  std::vector<double> between;     ///< R_move(c_i, c_j), row-major

  std::size_t size() const { return from_start.size(); }
  double move(std::size_t i, std::size_t j) const { return between[i * size() + j]; }

  static SearchGeometry from_world(const WorldModel& world, std::size_t q_from, std::size_t q_to,
                                   std::span<const std::size_t> candidates);
};

/// A single-object search policy: visit `sequence` in order until the
/// object turns up, then pick it and carry it to `q_to`.
struct FindPolicy {
  std::size_t target_object = 0;  ///< object index in the world
  std::string object_type;
  std::vector<std::size_t> sequence;  ///< container indices
  std::vector<double> step_probs;     ///< success probability of each step given earlier misses
  std::size_t q_from = 0;             ///< container indices for both endpoints
  std::size_t q_to = 0;
  double expected_cost = 0.0;

  std::string to_json(const WorldModel& world) const;
};

/// Expected cost of searching candidates in `order` with the given
/// conditional step probabilities:
///
///   Q_k = R_move(prev, a_k) + R_search
///         + p_k [R_pick + R_move(a_k, q_to)] + (1 - p_k) Q_{k+1}
///
/// The last step probability must be 1. Throws DomainError on an empty
/// order or malformed probabilities.
double evaluate_policy(const SearchGeometry& geometry, std::span<const std::size_t> order,
                       std::span<const double> step_probs, const CostModel& costs);

/// World-level form: `sequence` holds container indices.
double evaluate_policy(const WorldModel& world, std::span<const std::size_t> sequence,
                       std::span<const double> step_probs, std::size_t q_from, std::size_t q_to,
                       const CostModel& costs);

/// Conditional success probability of each step when the object is known
/// to be inside the candidate set: marginals are normalized to sum to one,
/// then p_k = m_k / (1 - sum_{j<k} m_j). The final entry is exactly 1.
std::vector<double> conditional_step_probs(std::span<const double> marginals);

struct OrderResult {
  std::vector<std::size_t> order;
  double expected_cost = 0.0;
};

/// Exact minimum-expected-cost ordering of all candidates by dynamic
/// programming over (searched subset, last container). Marginals are
/// normalized internally. Ties go to the lexicographically smallest order
/// of candidate positions. Supports up to 20 candidates.
OrderResult optimal_order(const SearchGeometry& geometry, std::span<const double> marginals,
                          const CostModel& costs);

/// Nearest-neighbour chain over all candidates starting from q_from. Ties
/// go to the lower candidate position.
std::vector<std::size_t> greedy_order(const SearchGeometry& geometry);

/// min_i [R_move(q_from, c_i) + R_search + R_pick + R_move(c_i, q_to)].
double optimistic_cost(const SearchGeometry& geometry, const CostModel& costs);

/// Up to `max_candidates` unsearched containers with the highest P_found
/// for `object_type`, ties broken by container id; returned in id order.
std::vector<std::size_t> select_candidates(const WorldModel& world, const BeliefState& belief,
                                           const Estimator& est, std::string_view object_type,
                                           std::size_t max_candidates);

inline constexpr std::size_t kDefaultMaxCandidates = 8;

/// Learning-informed search policy for `object` from q_from to q_to.
/// Throws SearchExhaustedError when every container has been searched.
FindPolicy optimal_find_policy(const WorldModel& world, const BeliefState& belief,
                               std::size_t object, std::size_t q_from, std::size_t q_to,
                               const Estimator& est, const CostModel& costs,
                               std::size_t max_candidates = kDefaultMaxCandidates);

/// Nearest-unsearched-container chain. Probabilities are not consulted;
/// the stored step probabilities and expected cost assume a uniform
/// placement over the unsearched containers.
FindPolicy greedy_find_policy(const WorldModel& world, const BeliefState& belief,
                              std::size_t object, std::size_t q_from, std::size_t q_to,
                              const CostModel& costs);

/// Lower bound on find cost: success guaranteed at the best unsearched
/// container. Throws SearchExhaustedError when none is left.
double optimistic_cost(const WorldModel& world, const BeliefState& belief, std::size_t q_from,
                       std::size_t q_to, const CostModel& costs);

/// optimistic_cost + costs.pessimistic_penalty.
double pessimistic_cost(const WorldModel& world, const BeliefState& belief, std::size_t q_from,
                        std::size_t q_to, const CostModel& costs);

}  // namespace findplan
