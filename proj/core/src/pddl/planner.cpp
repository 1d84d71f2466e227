#include "findplan/pddl/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "findplan/format.hpp"

namespace findplan::pddl {

const char* to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::Solved: return "solved";
    case PlanStatus::Unsolvable: return "unsolvable";
    case PlanStatus::Timeout: return "timeout";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Bits = std::vector<std::uint64_t>;

struct BitsHash {
  std::size_t operator()(const Bits& b) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto w : b) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

bool test(const Bits& s, std::size_t f) { return (s[f >> 6] >> (f & 63)) & 1U; }
void set(Bits& s, std::size_t f) { s[f >> 6] |= std::uint64_t{1} << (f & 63); }
void clear(Bits& s, std::size_t f) { s[f >> 6] &= ~(std::uint64_t{1} << (f & 63)); }

bool applicable(const GroundAction& a, const Bits& s) {
  for (auto f : a.pre) {
    if (!test(s, f)) return false;
  }
  for (auto f : a.pre_neg) {
    if (test(s, f)) return false;
  }
  return true;
}

Bits successor(const GroundAction& a, const Bits& s) {
  Bits next = s;
  for (auto f : a.del) clear(next, f);
  for (auto f : a.add) set(next, f);
  return next;
}

bool is_goal(const GroundTask& task, const Bits& s) {
  if (task.goal_impossible) return false;
  for (auto f : task.goal) {
    if (!test(s, f)) return false;
  }
  for (auto f : task.goal_neg) {
    if (test(s, f)) return false;
  }
  return true;
}

// Cost-sensitive FF: h_add supporters, then the cost of the extracted
// relaxed plan.
class RelaxedPlanHeuristic {
 public:
  explicit RelaxedPlanHeuristic(const GroundTask& task) : task_(task) {
    const std::size_t nf = task.facts.size();
    consumers_.resize(nf);
    for (std::size_t i = 0; i < task.actions.size(); ++i) {
      const auto& a = task.actions[i];
      if (a.pre.empty()) {
        free_actions_.push_back(i);
      }
      for (auto f : a.pre) consumers_[f].push_back(i);
    }
    cost_.resize(nf);
    supporter_.resize(nf);
    remaining_.resize(task.actions.size());
    action_cost_.resize(task.actions.size());
    in_plan_.resize(task.actions.size());
    marked_.resize(nf);
  }

  double operator()(const Bits& s) {
    if (task_.goal_impossible) return kInf;
    const std::size_t nf = task_.facts.size();
    std::fill(cost_.begin(), cost_.end(), kInf);
    std::fill(supporter_.begin(), supporter_.end(), kNone);
    for (std::size_t i = 0; i < task_.actions.size(); ++i) {
      remaining_[i] = task_.actions[i].pre.size();
      action_cost_[i] = 0.0;
    }
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    for (std::size_t f = 0; f < nf; ++f) {
      if (test(s, f)) {
        cost_[f] = 0.0;
        pq.emplace(0.0, f);
      }
    }
    auto relax = [&](std::size_t ai) {
      const auto& a = task_.actions[ai];
      const double c = action_cost_[ai] + a.cost;
      for (auto g : a.add) {
        if (c < cost_[g]) {
          cost_[g] = c;
          supporter_[g] = ai;
          pq.emplace(c, g);
        }
      }
    };
    for (auto ai : free_actions_) relax(ai);
    while (!pq.empty()) {
      auto [c, f] = pq.top();
      pq.pop();
      if (c > cost_[f]) continue;
      for (auto ai : consumers_[f]) {
        action_cost_[ai] += c;
        if (--remaining_[ai] == 0) relax(ai);
      }
    }

    std::fill(in_plan_.begin(), in_plan_.end(), false);
    std::fill(marked_.begin(), marked_.end(), false);
    std::vector<std::size_t> stack;
    for (auto g : task_.goal) {
      if (cost_[g] == kInf) return kInf;
      stack.push_back(g);
    }
    double h = 0.0;
    while (!stack.empty()) {
      const std::size_t f = stack.back();
      stack.pop_back();
      if (marked_[f]) continue;
      marked_[f] = true;
      if (cost_[f] == 0.0 && test(s, f)) continue;
      const std::size_t ai = supporter_[f];
      if (in_plan_[ai]) continue;
      in_plan_[ai] = true;
      h += task_.actions[ai].cost;
      for (auto p : task_.actions[ai].pre) stack.push_back(p);
    }
    return h;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  const GroundTask& task_;
  std::vector<std::vector<std::size_t>> consumers_;
  std::vector<std::size_t> free_actions_;
  std::vector<double> cost_;
  std::vector<std::size_t> supporter_;
  std::vector<std::size_t> remaining_;
  std::vector<double> action_cost_;
  std::vector<bool> in_plan_;
  std::vector<bool> marked_;
};

Bits make_state(const GroundTask& task, const std::vector<std::size_t>& facts) {
  Bits s((task.facts.size() + 63) / 64 + 1, 0);
  for (auto f : facts) set(s, f);
  return s;
}

struct Node {
  Bits state;
  double g = 0.0;
  double h = 0.0;
  std::size_t parent = 0;
  std::size_t via = 0;  // action index
  bool root = false;
};

struct OpenEntry {
  double f;
  double h;
  std::size_t rank;
  std::size_t id;
  double g;
};

struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    if (a.rank != b.rank) return a.rank > b.rank;
    return a.id > b.id;
  }
};

}  // namespace

double relaxed_plan_cost(const GroundTask& task, const std::vector<std::size_t>& state) {
  RelaxedPlanHeuristic h(task);
  return h(make_state(task, state));
}

PlanResult plan(const GroundTask& task, const PlanOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  PlanResult result;
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };

  RelaxedPlanHeuristic heuristic(task);
  std::vector<Node> nodes;
  std::unordered_map<Bits, std::size_t, BitsHash> index;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;

  Node root;
  root.state = make_state(task, task.initial);
  root.root = true;
  root.h = heuristic(root.state);
  ++result.evaluations;
  if (root.h == kInf) {
    result.status = PlanStatus::Unsolvable;
    result.seconds = elapsed();
    return result;
  }
  index.emplace(root.state, 0);
  nodes.push_back(root);
  open.push({options.weight * root.h, root.h, 0, 0, 0.0});

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (top.g > nodes[top.id].g) continue;  // stale
    const std::size_t id = top.id;

    if (is_goal(task, nodes[id].state)) {
      std::vector<std::string> names;
      for (std::size_t n = id; !nodes[n].root; n = nodes[n].parent) {
        names.push_back(task.actions[nodes[n].via].name);
      }
      std::reverse(names.begin(), names.end());
      result.status = PlanStatus::Solved;
      result.plan.actions = std::move(names);
      result.plan.cost = nodes[id].g;
      result.seconds = elapsed();
      return result;
    }

    if (options.max_expansions && result.expansions >= *options.max_expansions) {
      result.status = PlanStatus::Timeout;
      result.seconds = elapsed();
      return result;
    }
    if (options.timeout_seconds && (result.expansions & 63) == 0 && elapsed() > *options.timeout_seconds) {
      result.status = PlanStatus::Timeout;
      result.seconds = elapsed();
      return result;
    }
    ++result.expansions;

    for (std::size_t ai = 0; ai < task.actions.size(); ++ai) {
      const auto& a = task.actions[ai];
      if (!applicable(a, nodes[id].state)) continue;
      Bits next = successor(a, nodes[id].state);
      const double g = nodes[id].g + a.cost;
      auto it = index.find(next);
      if (it != index.end()) {
        Node& known = nodes[it->second];
        if (g >= known.g) continue;
        known.g = g;
        known.parent = id;
        known.via = ai;
        if (known.h == kInf) continue;
        open.push({g + options.weight * known.h, known.h, ai, it->second, g});
        continue;
      }
      Node child;
      child.h = heuristic(next);
      ++result.evaluations;
      child.g = g;
      child.parent = id;
      child.via = ai;
      const std::size_t child_id = nodes.size();
      index.emplace(next, child_id);
      child.state = std::move(next);
      const double h = child.h;
      nodes.push_back(std::move(child));
      if (h == kInf) continue;
      open.push({g + options.weight * h, h, ai, child_id, g});
    }
  }
  result.status = PlanStatus::Unsolvable;
  result.seconds = elapsed();
  return result;
}

double validate(const Plan& plan, const GroundTask& task) {
  Bits s = make_state(task, task.initial);
  double cost = 0.0;
  for (std::size_t i = 0; i < plan.actions.size(); ++i) {
    auto ai = task.find_action(plan.actions[i]);
    if (!ai) throw PlanValidationError("unknown action " + plan.actions[i], i);
    const auto& a = task.actions[*ai];
    for (auto f : a.pre) {
      if (!test(s, f)) throw PlanValidationError("precondition " + task.facts[f] + " of " + a.name + " does not hold", i);
    }
    for (auto f : a.pre_neg) {
      if (test(s, f)) throw PlanValidationError("negative precondition " + task.facts[f] + " of " + a.name + " is violated", i);
    }
    s = successor(a, s);
    cost += a.cost;
  }
  if (!is_goal(task, s)) throw PlanValidationError("goal not reached", plan.actions.size());
  return cost;
}

std::string format_plan(const Plan& plan) {
  std::ostringstream out;
  for (const auto& a : plan.actions) out << a << '\n';
  out << "; cost = " << format_real(plan.cost) << '\n';
  return out.str();
}

}  // namespace findplan::pddl
