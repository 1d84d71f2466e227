#include "findplan/lios.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "findplan/error.hpp"
#include "json.hpp"

namespace findplan {

void CostModel::validate() const {
  for (double c : {r_search, r_pick, r_place, fixed_op_cost, pessimistic_penalty}) {
    if (!std::isfinite(c) || c < 0.0) {
      throw ValidationError("action costs must be finite and nonnegative");
    }
  }
}

SearchGeometry SearchGeometry::from_world(const WorldModel& world, std::size_t q_from,
                                          std::size_t q_to,
                                          std::span<const std::size_t> candidates) {
  SearchGeometry g;
  const std::size_t n = candidates.size();
  g.from_start.reserve(n);
  g.to_goal.reserve(n);
  g.between.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    g.from_start.push_back(world.distance(q_from, candidates[i]));
    g.to_goal.push_back(world.distance(candidates[i], q_to));
    for (std::size_t j = 0; j < n; ++j) {
      g.between[i * n + j] = world.distance(candidates[i], candidates[j]);
    }
  }
  return g;
}

double evaluate_policy(const SearchGeometry& geometry, std::span<const std::size_t> order,
                       std::span<const double> step_probs, const CostModel& costs) {
  if (order.empty()) throw DomainError("cannot evaluate an empty search sequence");
  if (order.size() != step_probs.size()) {
    throw DomainError("search sequence and step probabilities differ in length");
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k] >= geometry.size()) throw DomainError("search sequence index out of range");
    const double p = step_probs[k];
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("step probabilities must lie in (0, 1]");
  }
  if (std::abs(step_probs.back() - 1.0) > 1e-9) {
    throw DomainError("the final step probability must be 1");
  }

  // Unroll the recursion from the terminal step backwards.
  double q = 0.0;
  for (std::size_t k = order.size(); k-- > 0;) {
    const std::size_t a = order[k];
    const double move_in = k == 0 ? geometry.from_start[a] : geometry.move(order[k - 1], a);
    const double p = k + 1 == order.size() ? 1.0 : step_probs[k];
    q = move_in + costs.r_search + p * (costs.r_pick + geometry.to_goal[a]) + (1.0 - p) * q;
  }
  return q;
}

double evaluate_policy(const WorldModel& world, std::span<const std::size_t> sequence,
                       std::span<const double> step_probs, std::size_t q_from, std::size_t q_to,
                       const CostModel& costs) {
  std::vector<std::size_t> positions(sequence.size());
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  const auto geometry = SearchGeometry::from_world(world, q_from, q_to, sequence);
  return evaluate_policy(geometry, positions, step_probs, costs);
}

std::vector<double> conditional_step_probs(std::span<const double> marginals) {
  if (marginals.empty()) throw DomainError("no marginals to condition");
  double total = 0.0;
  for (double m : marginals) {
    if (!std::isfinite(m) || m < 0.0) throw DomainError("marginals must be finite and nonnegative");
    total += m;
  }
  if (total <= 0.0) throw DomainError("cannot normalize all-zero marginals");
  for (double m : marginals) {
    if (m <= 0.0) throw DomainError("every candidate needs a positive marginal");
  }

  std::vector<double> probs;
  probs.reserve(marginals.size());
  double remaining = 1.0;
  for (std::size_t k = 0; k < marginals.size(); ++k) {
    const double m = marginals[k] / total;
    double p = k + 1 == marginals.size() ? 1.0 : m / remaining;
    p = std::min(p, 1.0);
    probs.push_back(p);
    remaining -= m;
  }
  return probs;
}

OrderResult optimal_order(const SearchGeometry& geometry, std::span<const double> marginals,
                          const CostModel& costs) {
  const std::size_t n = geometry.size();
  if (n == 0) throw DomainError("no candidate containers");
  if (n > 20) throw DomainError("optimal_order supports at most 20 candidates");
  if (marginals.size() != n) throw DomainError("one marginal per candidate required");

  double total = 0.0;
  for (double m : marginals) total += m;
  if (!(total > 0.0)) throw DomainError("cannot normalize all-zero marginals");
  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = marginals[i] / total;

  const std::size_t subsets = std::size_t{1} << n;
  const std::size_t full = subsets - 1;
  std::vector<double> mass(subsets, 0.0);
  for (std::size_t s = 1; s < subsets; ++s) {
    const auto low = static_cast<std::size_t>(std::countr_zero(s));
    mass[s] = mass[s & (s - 1)] + m[low];
  }

  // Expected contribution of visiting j next after `last`, when the
  // searched set has total mass `searched_mass`.
  auto step = [&](double searched_mass, double move_in, std::size_t j) {
    const double miss = std::max(0.0, 1.0 - searched_mass);
    return miss * (move_in + costs.r_search) + m[j] * (costs.r_pick + geometry.to_goal[j]);
  };

  // cost_to_go[s * n + last]: minimal expected remaining cost having
  // searched set s and standing at `last` (last in s).
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cost_to_go(subsets * n, inf);
  for (std::size_t last = 0; last < n; ++last) cost_to_go[full * n + last] = 0.0;
  for (std::size_t s = full; s-- > 1;) {
    for (std::size_t last = 0; last < n; ++last) {
      if (!(s >> last & 1u)) continue;
      double best = inf;
      for (std::size_t j = 0; j < n; ++j) {
        if (s >> j & 1u) continue;
        const std::size_t next = s | (std::size_t{1} << j);
        best = std::min(best, step(mass[s], geometry.move(last, j), j) + cost_to_go[next * n + j]);
      }
      cost_to_go[s * n + last] = best;
    }
  }

  auto tolerance = [](double v) { return 1e-12 * std::max(1.0, std::abs(v)); };

  OrderResult result;
  std::size_t s = 0;
  std::size_t last = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double best = inf;
    std::vector<double> value(n, inf);
    for (std::size_t j = 0; j < n; ++j) {
      if (s >> j & 1u) continue;
      const double move_in = k == 0 ? geometry.from_start[j] : geometry.move(last, j);
      const std::size_t next = s | (std::size_t{1} << j);
      value[j] = step(mass[s], move_in, j) + cost_to_go[next * n + j];
      best = std::min(best, value[j]);
    }
    std::size_t pick = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (value[j] <= best + tolerance(best)) {
        pick = j;
        break;
      }
    }
    if (k == 0) result.expected_cost = best;
    result.order.push_back(pick);
    s |= std::size_t{1} << pick;
    last = pick;
  }
  return result;
}

std::vector<std::size_t> greedy_order(const SearchGeometry& geometry) {
  const std::size_t n = geometry.size();
  std::vector<std::size_t> order;
  std::vector<bool> used(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pick = n;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double d = k == 0 ? geometry.from_start[j] : geometry.move(order.back(), j);
      if (d < best) {
        best = d;
        pick = j;
      }
    }
    used[pick] = true;
    order.push_back(pick);
  }
  return order;
}

double optimistic_cost(const SearchGeometry& geometry, const CostModel& costs) {
  if (geometry.size() == 0) throw SearchExhaustedError("no unsearched containers");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < geometry.size(); ++i) {
    best = std::min(best, geometry.from_start[i] + costs.r_search + costs.r_pick +
                              geometry.to_goal[i]);
  }
  return best;
}

std::vector<std::size_t> select_candidates(const WorldModel& world, const BeliefState& belief,
                                           const Estimator& est, std::string_view object_type,
                                           std::size_t max_candidates) {
  struct Ranked {
    double p;
    std::size_t container;
  };
  std::vector<Ranked> ranked;
  for (std::size_t c : belief.unsearched()) {
    const auto& container = world.container(c);
    ranked.push_back({est.p_found(object_type, container.type_name, container.room_type), c});
  }
  auto by_id = [&](std::size_t a, std::size_t b) {
    return world.container(a).id < world.container(b).id;
  };
  std::sort(ranked.begin(), ranked.end(), [&](const Ranked& a, const Ranked& b) {
    if (a.p != b.p) return a.p > b.p;
    return by_id(a.container, b.container);
  });
  if (ranked.size() > max_candidates) ranked.resize(max_candidates);
  std::vector<std::size_t> out;
  for (const auto& r : ranked) out.push_back(r.container);
  std::sort(out.begin(), out.end(), by_id);
  return out;
}

namespace {

std::vector<std::size_t> unsearched_by_id(const WorldModel& world, const BeliefState& belief) {
  auto out = belief.unsearched();
  std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    return world.container(a).id < world.container(b).id;
  });
  return out;
}

}  // namespace

FindPolicy optimal_find_policy(const WorldModel& world, const BeliefState& belief,
                               std::size_t object, std::size_t q_from, std::size_t q_to,
                               const Estimator& est, const CostModel& costs,
                               std::size_t max_candidates) {
  FindPolicy policy;
  policy.target_object = object;
  policy.object_type = world.object(object).type_name;
  policy.q_from = q_from;
  policy.q_to = q_to;

  const auto candidates =
      select_candidates(world, belief, est, policy.object_type, std::max<std::size_t>(1, max_candidates));
  if (candidates.empty()) {
    throw SearchExhaustedError("no unsearched containers left for '" + world.object(object).id + "'");
  }
  std::vector<double> marginals;
  for (std::size_t c : candidates) {
    const auto& container = world.container(c);
    marginals.push_back(est.p_found(policy.object_type, container.type_name, container.room_type));
  }
  const auto geometry = SearchGeometry::from_world(world, q_from, q_to, candidates);
  const auto best = optimal_order(geometry, marginals, costs);

  std::vector<double> ordered_marginals;
  for (std::size_t i : best.order) {
    policy.sequence.push_back(candidates[i]);
    ordered_marginals.push_back(marginals[i]);
  }
  policy.step_probs = conditional_step_probs(ordered_marginals);
  policy.expected_cost = evaluate_policy(geometry, best.order, policy.step_probs, costs);
  return policy;
}

FindPolicy greedy_find_policy(const WorldModel& world, const BeliefState& belief,
                              std::size_t object, std::size_t q_from, std::size_t q_to,
                              const CostModel& costs) {
  FindPolicy policy;
  policy.target_object = object;
  policy.object_type = world.object(object).type_name;
  policy.q_from = q_from;
  policy.q_to = q_to;

  const auto candidates = unsearched_by_id(world, belief);
  if (candidates.empty()) {
    throw SearchExhaustedError("no unsearched containers left for '" + world.object(object).id + "'");
  }
  const auto geometry = SearchGeometry::from_world(world, q_from, q_to, candidates);
  const auto order = greedy_order(geometry);
  for (std::size_t i : order) policy.sequence.push_back(candidates[i]);
  const std::vector<double> uniform(order.size(), 1.0);
  policy.step_probs = conditional_step_probs(uniform);
  policy.expected_cost = evaluate_policy(geometry, order, policy.step_probs, costs);
  return policy;
}

double optimistic_cost(const WorldModel& world, const BeliefState& belief, std::size_t q_from,
                       std::size_t q_to, const CostModel& costs) {
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t c = 0; c < world.containers().size(); ++c) {
    if (belief.is_searched(c)) continue;
    any = true;
    best = std::min(best, world.distance(q_from, c) + costs.r_search + costs.r_pick +
                              world.distance(c, q_to));
  }
  if (!any) throw SearchExhaustedError("no unsearched containers");
  return best;
}

double pessimistic_cost(const WorldModel& world, const BeliefState& belief, std::size_t q_from,
                        std::size_t q_to, const CostModel& costs) {
  return optimistic_cost(world, belief, q_from, q_to, costs) + costs.pessimistic_penalty;
}

std::string FindPolicy::to_json(const WorldModel& world) const {
  nlohmann::ordered_json j;
  j["object"] = world.object(target_object).id;
  j["object_type"] = object_type;
  j["q_from"] = world.container(q_from).id;
  j["q_to"] = world.container(q_to).id;
  auto seq = nlohmann::ordered_json::array();
  for (std::size_t c : sequence) seq.push_back(world.container(c).id);
  j["sequence"] = seq;
  j["step_probs"] = step_probs;
  j["expected_cost"] = expected_cost;
  return j.dump();
}

}  // namespace findplan
