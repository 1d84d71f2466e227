#include "findplan/executive.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

#include "json.hpp"

#include "findplan/error.hpp"
#include "findplan/pddl/ground.hpp"
#include "findplan/pddl/parser.hpp"
#include "findplan/pddl/planner.hpp"

namespace findplan {

namespace {

struct StrategyRow {
  Strategy strategy;
  std::string_view name;
  FindCostMode cost;
  SearchPolicy search;
};

constexpr StrategyRow kStrategyTable[] = {
    {Strategy::OptGreedy, "OptGreedy", FindCostMode::Optimistic, SearchPolicy::Greedy},
    {Strategy::PesGreedy, "PesGreedy", FindCostMode::Pessimistic, SearchPolicy::Greedy},
    {Strategy::OptLIOS, "OptLIOS", FindCostMode::Optimistic, SearchPolicy::Lios},
    {Strategy::PesLIOS, "PesLIOS", FindCostMode::Pessimistic, SearchPolicy::Lios},
    {Strategy::ModelLIOS, "ModelLIOS", FindCostMode::Model, SearchPolicy::Lios},
};

const StrategyRow& row(Strategy s) {
  for (const auto& r : kStrategyTable) {
    if (r.strategy == s) return r;
  }
  throw InternalError("unknown strategy");
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::vector<std::string> split_action(std::string_view name) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : name) {
    if (ch == '(' || ch == ')' || ch == ' ') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::size_t object_location(const WorldModel& world, const BeliefState& belief, std::size_t o) {
  auto it = belief.placed_overrides.find(o);
  return it != belief.placed_overrides.end() ? it->second : world.true_container_of(o);
}

void move_to(const WorldModel& world, BeliefState& belief, std::size_t c, double& cost,
             std::vector<TraceStep>* trace) {
  const double d = world.distance(belief.robot_location, c);
  if (trace) {
    trace->push_back({"move", {world.container(belief.robot_location).id, world.container(c).id}, d});
  }
  cost += d;
  belief.robot_location = c;
}

}  // namespace

std::string_view to_string(Strategy s) { return row(s).name; }

Strategy parse_strategy(std::string_view name) {
  const std::string want = lower(name);
  for (const auto& r : kStrategyTable) {
    if (lower(r.name) == want) return r.strategy;
  }
  throw ScenarioError("unknown strategy '" + std::string(name) + "'");
}

FindCostMode find_cost_mode(Strategy s) { return row(s).cost; }
SearchPolicy search_policy(Strategy s) { return row(s).search; }

std::string TraceStep::text() const {
  std::string out = verb;
  for (const auto& a : args) out += " " + a;
  return out;
}

FindOutcome execute_find(const WorldModel& world, BeliefState& belief, const FindPolicy& policy,
                         const CostModel& costs, const Estimator* est, std::vector<TraceStep>* trace,
                         std::size_t max_candidates) {
  const std::size_t target = policy.target_object;
  if (belief.robot_location != policy.q_from) throw PreconditionError("robot is not at the find start");
  if (belief.holding) throw PreconditionError("find needs a free hand");
  if (belief.is_known(target)) throw PreconditionError("object '" + world.object(target).id + "' is already known");

  FindOutcome out;
  out.object = target;
  std::vector<std::size_t> sequence = policy.sequence;
  while (true) {
    for (std::size_t c : sequence) {
      if (belief.is_searched(c)) continue;
      move_to(world, belief, c, out.cost, trace);
      const Observation obs = search_container(world, belief, c);
      belief.apply(obs);
      ++out.containers_searched;
      out.cost += costs.r_search;
      if (trace) trace->push_back({"search", {world.container(c).id}, costs.r_search});
      if (std::find(obs.revealed.begin(), obs.revealed.end(), target) == obs.revealed.end()) continue;

      belief.known_objects.erase(target);
      belief.placed_overrides.erase(target);
      belief.holding = target;
      out.cost += costs.r_pick;
      if (trace) trace->push_back({"pick", {world.object(target).id, world.container(c).id}, costs.r_pick});
      move_to(world, belief, policy.q_to, out.cost, trace);
      return out;
    }
    if (belief.unsearched().empty()) {
      throw InternalError("every container searched without finding '" + world.object(target).id + "'");
    }
    ++out.recomputations;
    const FindPolicy next =
        est ? optimal_find_policy(world, belief, target, belief.robot_location, policy.q_to, *est, costs,
                                  max_candidates)
            : greedy_find_policy(world, belief, target, belief.robot_location, policy.q_to, costs);
    sequence = next.sequence;
  }
}

std::string TrialRecord::to_json() const {
  nlohmann::ordered_json j;
  j["scenario"] = scenario;
  j["strategy"] = strategy;
  j["seed"] = seed;
  j["success"] = success;
  j["cost"] = cost;
  if (!success) j["failure"] = failure;
  j["containers_searched"] = containers_searched;
  j["replans"] = replans;
  j["expansions"] = expansions;
  auto steps = nlohmann::ordered_json::array();
  for (const auto& s : trace) steps.push_back({{"step", s.text()}, {"cost", s.cost}});
  j["trace"] = std::move(steps);
  return j.dump();
}

namespace {

class TrialRunner {
 public:
  TrialRunner(const WorldModel& world, const ScenarioSpec& scenario, Strategy strategy, const Estimator& est,
              const CostModel& costs, const ExecutiveOptions& options)
      : world_(world), scenario_(scenario), strategy_(strategy), est_(est), costs_(costs), options_(options),
        belief_(BeliefState::initial(world, scenario.start)) {
    for (std::size_t i = 0; i < world.containers().size(); ++i) locations_[lower(world.container(i).id)] = i;
    for (std::size_t i = 0; i < world.objects().size(); ++i) items_[lower(world.object(i).id)] = i;
  }

  void run(TrialRecord& record) {
    trace_ = &record.trace;
    for (std::size_t round = 0; round < options_.max_replans; ++round) {
      const auto text = emit_pddl(world_, belief_, scenario_, progress_, find_costs(), costs_, options_.grounding);
      const auto domain = pddl::parse_domain(text.domain);
      const auto problem = pddl::parse_problem(text.problem, domain);
      const auto task = pddl::ground(domain, problem);

      pddl::PlanOptions po;
      po.weight = options_.planner_weight;
      po.max_expansions = static_cast<std::size_t>(std::llround(scenario_.t_max * options_.expansions_per_second));
      if (options_.wall_clock_backstop) po.timeout_seconds = scenario_.t_max;
      const auto result = pddl::plan(task, po);
      ++record.replans;
      record.expansions += result.expansions;
      record.planner_seconds += result.seconds;

      if (result.status != pddl::PlanStatus::Solved) {
        record.failure = std::string("planner ") + pddl::to_string(result.status);
        return;
      }
      if (result.plan.actions.empty()) {
        record.success = true;
        return;
      }
      execute(task, result.plan);
    }
    record.failure = "replan limit reached";
  }

  std::size_t containers_searched() const {
    return static_cast<std::size_t>(std::count(belief_.searched.begin(), belief_.searched.end(), true));
  }

 private:
  FindCostTable find_costs() const {
    FindCostTable table;
    const auto mode = find_cost_mode(strategy_);
    for (const auto& key : find_groundings(belief_, scenario_, options_.grounding)) {
      double cost = 0.0;
      switch (mode) {
        case FindCostMode::Optimistic:
          cost = optimistic_cost(world_, belief_, key.start, key.target, costs_);
          break;
        case FindCostMode::Pessimistic:
          cost = pessimistic_cost(world_, belief_, key.start, key.target, costs_);
          break;
        case FindCostMode::Model:
          cost = optimal_find_policy(world_, belief_, key.object, key.start, key.target, est_, costs_,
                                     options_.max_candidates)
                     .expected_cost;
          break;
      }
      table.set(key, cost);
    }
    return table;
  }

  std::size_t location(const std::string& name) const {
    auto it = locations_.find(name);
    if (it == locations_.end()) throw InternalError("plan names unknown location '" + name + "'");
    return it->second;
  }
  std::size_t item(const std::string& name) const {
    auto it = items_.find(name);
    if (it == items_.end()) throw InternalError("plan names unknown object '" + name + "'");
    return it->second;
  }

  // Executes plan steps until a find changes what the robot knows, or a
  // step's preconditions turn out false in the world. Either way the caller
  // replans.
  void execute(const pddl::GroundTask& task, const pddl::Plan& plan) {
    for (const auto& name : plan.actions) {
      const auto parts = split_action(name);
      const std::string& head = parts.at(0);
      if (head == "move") {
        const std::size_t to = location(parts.at(2));
        if (belief_.robot_location != location(parts.at(1))) return;
        double ignored = 0.0;
        move_to(world_, belief_, to, ignored, trace_);
      } else if (head == "pick") {
        const std::size_t o = item(parts.at(1));
        const std::size_t l = location(parts.at(2));
        if (belief_.holding || belief_.robot_location != l) return;
        if (object_location(world_, belief_, o) != l) {
          belief_.known_objects.erase(o);  // belief was wrong; let the planner repair
          return;
        }
        belief_.known_objects.erase(o);
        belief_.placed_overrides.erase(o);
        belief_.holding = o;
        trace_->push_back({"pick", {world_.object(o).id, world_.container(l).id}, costs_.r_pick});
      } else if (head == "place" || head == "deliver-option") {
        const std::size_t o = item(parts.at(1));
        const std::size_t l = location(parts.at(2));
        if (belief_.holding != o || belief_.robot_location != l) return;
        belief_.holding.reset();
        belief_.known_objects[o] = l;
        belief_.placed_overrides[o] = l;
        trace_->push_back({"place", {world_.object(o).id, world_.container(l).id}, costs_.r_place});
        if (head == "deliver-option") add_progress(task, name);
      } else if (head == "find") {
        const std::size_t o = item(parts.at(1));
        const std::size_t start = location(parts.at(2));
        const std::size_t target = location(parts.at(3));
        if (belief_.robot_location != start || belief_.holding || belief_.is_known(o)) return;
        const bool lios = search_policy(strategy_) == SearchPolicy::Lios;
        const FindPolicy policy =
            lios ? optimal_find_policy(world_, belief_, o, start, target, est_, costs_, options_.max_candidates)
                 : greedy_find_policy(world_, belief_, o, start, target, costs_);
        execute_find(world_, belief_, policy, costs_, lios ? &est_ : nullptr, trace_, options_.max_candidates);
        return;
      } else {
        std::vector<std::string> args;
        for (std::size_t i = 1; i < parts.size(); ++i) {
          args.push_back(i + 1 == parts.size() ? world_.container(location(parts[i])).id
                                               : world_.object(item(parts[i])).id);
        }
        args.insert(args.begin(), head);
        trace_->push_back({"op", std::move(args), costs_.fixed_op_cost});
        add_progress(task, name);
      }
    }
  }

  void add_progress(const pddl::GroundTask& task, const std::string& action) {
    const auto index = task.find_action(action);
    if (!index) throw InternalError("plan step '" + action + "' is not a ground action");
    for (std::size_t f : task.actions[*index].add) {
      if (is_progress_fact(task.facts[f])) progress_.insert(task.facts[f]);
    }
  }

  const WorldModel& world_;
  const ScenarioSpec& scenario_;
  Strategy strategy_;
  const Estimator& est_;
  const CostModel& costs_;
  const ExecutiveOptions& options_;
  BeliefState belief_;
  std::set<std::string> progress_;
  std::map<std::string, std::size_t> locations_;
  std::map<std::string, std::size_t> items_;
  std::vector<TraceStep>* trace_ = nullptr;
};

}  // namespace

TrialRecord run_trial(const WorldModel& world, const ScenarioSpec& scenario, Strategy strategy,
                      const Estimator& est, const CostModel& costs, std::uint64_t seed,
                      const ExecutiveOptions& options) {
  TrialRecord record;
  record.scenario = scenario.name;
  record.strategy = std::string(to_string(strategy));
  record.seed = seed;
  TrialRunner runner(world, scenario, strategy, est, costs, options);
  try {
    runner.run(record);
  } catch (const Error& e) {
    record.success = false;
    record.failure = e.what();
  }
  record.containers_searched = runner.containers_searched();
  if (record.success) {
    record.cost = 0.0;
    for (const auto& s : record.trace) record.cost += s.cost;
  } else {
    record.cost = scenario.r_fail;
  }
  return record;
}

double validate_trace(const WorldModel& world, const ScenarioSpec& scenario, const std::vector<TraceStep>& trace,
                      const CostModel& costs) {
  std::size_t robot = scenario.start;
  std::optional<std::size_t> holding;
  std::map<std::size_t, std::size_t> at;  // object -> container
  for (std::size_t o = 0; o < world.objects().size(); ++o) at[o] = world.true_container_of(o);
  std::set<std::size_t> known;  // objects whose position the robot has observed or caused
  std::vector<bool> searched(world.containers().size(), false);
  std::set<std::string> ops;

  auto container = [&](std::size_t step, const std::string& id) {
    auto c = world.find_container(id);
    if (!c) throw ValidationError("trace step " + std::to_string(step) + ": unknown container '" + id + "'");
    return *c;
  };
  auto object = [&](std::size_t step, const std::string& id) {
    auto o = world.find_object(id);
    if (!o) throw ValidationError("trace step " + std::to_string(step) + ": unknown object '" + id + "'");
    return *o;
  };
  auto same = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };

  double total = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& s = trace[i];
    auto fail = [&](const std::string& what) -> void {
      throw ValidationError("trace step " + std::to_string(i) + " (" + s.text() + "): " + what);
    };
    auto arity = [&](std::size_t n) {
      if (s.args.size() != n) fail("expected " + std::to_string(n) + " arguments");
    };
    if (s.verb == "move") {
      arity(2);
      if (container(i, s.args[0]) != robot) fail("robot is elsewhere");
      const std::size_t to = container(i, s.args[1]);
      if (!same(s.cost, world.distance(robot, to))) fail("cost differs from the path cost");
      robot = to;
    } else if (s.verb == "search") {
      arity(1);
      const std::size_t c = container(i, s.args[0]);
      if (c != robot) fail("robot is not at the container");
      if (!same(s.cost, costs.r_search)) fail("wrong search cost");
      if (!searched[c]) {
        searched[c] = true;
        for (std::size_t o : world.contents(c)) {
          if (at[o] == c) known.insert(o);
        }
      }
    } else if (s.verb == "pick") {
      arity(2);
      const std::size_t o = object(i, s.args[0]);
      const std::size_t c = container(i, s.args[1]);
      if (c != robot) fail("robot is not at the container");
      if (holding) fail("hand is not free");
      if (at[o] != c) fail("object is not there");
      if (!known.contains(o)) fail("object has not been observed there");
      if (!same(s.cost, costs.r_pick)) fail("wrong pick cost");
      holding = o;
      at[o] = world.containers().size();
    } else if (s.verb == "place") {
      arity(2);
      const std::size_t o = object(i, s.args[0]);
      const std::size_t c = container(i, s.args[1]);
      if (c != robot) fail("robot is not at the container");
      if (holding != o) fail("object is not held");
      if (!same(s.cost, costs.r_place)) fail("wrong place cost");
      holding.reset();
      at[o] = c;
      known.insert(o);
    } else if (s.verb == "op") {
      if (s.args.size() < 2) fail("operator step needs a name and a location");
      if (container(i, s.args.back()) != robot) fail("robot is not at the operator location");
      for (std::size_t k = 1; k + 1 < s.args.size(); ++k) {
        const std::size_t o = object(i, s.args[k]);
        if (holding != o && at[o] != robot) fail("object '" + s.args[k] + "' is not at hand");
      }
      if (!same(s.cost, costs.fixed_op_cost)) fail("wrong operator cost");
      ops.insert(s.args[0]);
    } else {
      fail("unknown verb");
    }
    total += s.cost;
  }

  auto goal_fail = [&](const std::string& what) {
    throw ValidationError("trace ends before the goal holds: " + what);
  };
  switch (scenario.kind) {
    case ScenarioKind::Deliver3:
      for (const auto& [o, c] : scenario.deliveries) {
        if (at[o] != c) goal_fail("'" + world.object(o).id + "' not at '" + world.container(c).id + "'");
      }
      break;
    case ScenarioKind::AnyOfThree: {
      const bool any = std::any_of(scenario.options.begin(), scenario.options.end(), [&](std::size_t o) {
        return at[o] == *scenario.site && known.contains(o);
      });
      if (!any) goal_fail("no option delivered to the start");
      break;
    }
    case ScenarioKind::Breakfast:
    case ScenarioKind::Coffee:
    case ScenarioKind::BreakfastCoffee: {
      if (scenario.kind != ScenarioKind::Coffee &&
          !(ops.contains("serve-boiled") || ops.contains("serve-peeled") || ops.contains("serve-toasted"))) {
        goal_fail("breakfast not served");
      }
      if (scenario.kind != ScenarioKind::Breakfast && !ops.contains("serve-coffee")) goal_fail("coffee not served");
      break;
    }
  }
  return total;
}

}  // namespace findplan
