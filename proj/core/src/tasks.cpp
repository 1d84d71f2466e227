#include "findplan/tasks.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <sstream>

#include "findplan/error.hpp"
#include "findplan/format.hpp"
#include "findplan/rng.hpp"

namespace findplan {

namespace {

struct ScenarioRow {
  ScenarioKind kind;
  std::string_view name;
  double t_max;
  double r_fail;
};

constexpr std::array<ScenarioRow, 5> kScenarioTable{{
    {ScenarioKind::Deliver3, "Deliver3", 120, 400},
    {ScenarioKind::Breakfast, "Breakfast", 120, 400},
    {ScenarioKind::Coffee, "Coffee", 240, 450},
    {ScenarioKind::BreakfastCoffee, "BreakfastCoffee", 240, 450},
    {ScenarioKind::AnyOfThree, "AnyOfThree", 120, 100},
}};

const ScenarioRow& row(ScenarioKind kind) {
  for (const auto& r : kScenarioTable) {
    if (r.kind == kind) return r;
  }
  throw InternalError("unknown scenario kind");
}

// Object categories, keyed by the static predicate emitted for them.
struct Category {
  std::string_view predicate;
  std::vector<std::string_view> types;
};

const std::vector<Category>& breakfast_categories() {
  static const std::vector<Category> c{
      {"boilable", {"egg"}},
      {"boil-vessel", {"pot", "kettle"}},
      {"bowl", {"bowl"}},
      {"peelable", {"potato", "tomato", "apple"}},
      {"peeler", {"knife"}},
      {"plate", {"plate"}},
      {"toastable", {"bread"}},
      {"toaster", {"toaster"}},
  };
  return c;
}

const std::vector<Category>& coffee_categories() {
  static const std::vector<Category> c{
      {"grinds", {"coffee_grinds"}},
      {"coffee-vessel", {"pot", "kettle", "coffee_machine"}},
      {"water-source", {"water_bottle"}},
      {"cup", {"mug"}},
  };
  return c;
}

bool uses_breakfast(ScenarioKind k) {
  return k == ScenarioKind::Breakfast || k == ScenarioKind::BreakfastCoffee;
}
bool uses_coffee(ScenarioKind k) {
  return k == ScenarioKind::Coffee || k == ScenarioKind::BreakfastCoffee;
}

bool in_category(const Category& c, std::string_view type) {
  return std::find(c.types.begin(), c.types.end(), type) != c.types.end();
}

std::vector<std::size_t> objects_in(const WorldModel& world, const Category& c) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < world.objects().size(); ++i) {
    if (in_category(c, world.object(i).type_name)) out.push_back(i);
  }
  return out;
}

bool has_any(const WorldModel& world, std::string_view predicate) {
  for (const auto* cats : {&breakfast_categories(), &coffee_categories()}) {
    for (const auto& c : *cats) {
      if (c.predicate == predicate && !objects_in(world, c).empty()) return true;
    }
  }
  return false;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) { return row(kind).name; }

ScenarioKind parse_scenario_kind(std::string_view name) {
  const std::string want = lower(name);
  for (const auto& r : kScenarioTable) {
    if (lower(r.name) == want) return r.kind;
  }
  throw ScenarioError("unknown scenario '" + std::string(name) + "'");
}

ScenarioSpec build_scenario(ScenarioKind kind, const WorldModel& world, std::uint64_t seed) {
  const auto& r = row(kind);
  ScenarioSpec s;
  s.kind = kind;
  s.name = std::string(r.name);
  s.t_max = r.t_max;
  s.r_fail = r.r_fail;

  const std::size_t n_containers = world.containers().size();
  const std::size_t n_objects = world.objects().size();
  Rng rng(derive_seed(seed, 0x7a5c));
  s.start = rng.index(n_containers);
  s.operators = {"move", "pick", "place"};

  auto pick_distinct = [&](std::size_t n, std::size_t k) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    rng.shuffle(all);
    all.resize(k);
    return all;
  };

  switch (kind) {
    case ScenarioKind::Deliver3: {
      if (n_objects < 3) throw ScenarioError("Deliver3 needs at least three objects");
      const auto objects = pick_distinct(n_objects, 3);
      std::vector<std::size_t> targets;
      if (n_containers >= 3) {
        targets = pick_distinct(n_containers, 3);
      } else {
        for (int i = 0; i < 3; ++i) targets.push_back(rng.index(n_containers));
      }
      for (std::size_t i = 0; i < 3; ++i) {
        s.deliveries.emplace_back(objects[i], targets[i]);
        s.relevant_objects.push_back(objects[i]);
        s.goal_locations.push_back(targets[i]);
      }
      break;
    }
    case ScenarioKind::AnyOfThree: {
      if (n_objects < 3) throw ScenarioError("AnyOfThree needs at least three objects");
      s.options = pick_distinct(n_objects, 3);
      std::sort(s.options.begin(), s.options.end());
      s.site = s.start;
      s.relevant_objects = s.options;
      s.goal_locations = {s.start};
      s.operators.push_back("deliver-option");
      break;
    }
    case ScenarioKind::Breakfast:
    case ScenarioKind::Coffee:
    case ScenarioKind::BreakfastCoffee: {
      if (uses_breakfast(kind)) {
        const bool boiled = has_any(world, "boilable") && has_any(world, "boil-vessel") && has_any(world, "bowl");
        const bool peeled = has_any(world, "peelable") && has_any(world, "peeler") && has_any(world, "plate");
        const bool toasted = has_any(world, "toastable") && has_any(world, "toaster") && has_any(world, "plate");
        if (!boiled && !peeled && !toasted) {
          throw ScenarioError("world has no complete breakfast recipe");
        }
        for (const auto& c : breakfast_categories()) {
          auto objs = objects_in(world, c);
          s.relevant_objects.insert(s.relevant_objects.end(), objs.begin(), objs.end());
        }
        for (const char* op : {"boil", "peel", "toast", "serve-boiled", "serve-peeled", "serve-toasted"}) {
          s.operators.emplace_back(op);
        }
      }
      if (uses_coffee(kind)) {
        for (const auto& c : coffee_categories()) {
          auto objs = objects_in(world, c);
          if (objs.empty()) {
            throw ScenarioError("world has no object for coffee role '" + std::string(c.predicate) + "'");
          }
          s.relevant_objects.insert(s.relevant_objects.end(), objs.begin(), objs.end());
        }
        for (const char* op : {"pour-water", "make-coffee", "serve-coffee"}) s.operators.emplace_back(op);
      }
      s.site = rng.index(n_containers);
      s.goal_locations = {*s.site};
      break;
    }
  }
  s.relevant_objects = sorted_unique(std::move(s.relevant_objects));
  s.goal_locations = sorted_unique(std::move(s.goal_locations));
  return s;
}

std::string ScenarioSpec::goal_text(const WorldModel& world) const {
  std::string out = "(and";
  switch (kind) {
    case ScenarioKind::Deliver3:
      for (const auto& [o, c] : deliveries) {
        out += " (obj-at " + lower(world.object(o).id) + " " + lower(world.container(c).id) + ")";
      }
      break;
    case ScenarioKind::Breakfast: out += " (breakfast-served)"; break;
    case ScenarioKind::Coffee: out += " (coffee-served)"; break;
    case ScenarioKind::BreakfastCoffee: out += " (breakfast-served) (coffee-served)"; break;
    case ScenarioKind::AnyOfThree: out += " (task-done)"; break;
  }
  return out + ")";
}

std::optional<double> FindCostTable::get(const FindKey& key) const {
  auto it = entries.find(key);
  if (it == entries.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> missing_objects(const BeliefState& belief, const ScenarioSpec& scenario) {
  std::vector<std::size_t> out;
  for (std::size_t o : scenario.relevant_objects) {
    if (!belief.is_known(o)) out.push_back(o);
  }
  return out;
}

std::vector<FindKey> find_groundings(const BeliefState& belief, const ScenarioSpec& scenario,
                                     FindGrounding mode) {
  std::vector<std::size_t> starts{belief.robot_location};
  if (mode == FindGrounding::GoalAnchored) {
    starts.insert(starts.end(), scenario.goal_locations.begin(), scenario.goal_locations.end());
  }
  starts = sorted_unique(std::move(starts));
  std::vector<FindKey> out;
  for (std::size_t o : missing_objects(belief, scenario)) {
    for (std::size_t s : starts) {
      for (std::size_t t : scenario.goal_locations) out.push_back({o, s, t});
    }
  }
  return out;
}

std::vector<std::size_t> relevant_locations(const BeliefState& belief, const ScenarioSpec& scenario) {
  std::vector<std::size_t> out{belief.robot_location};
  out.insert(out.end(), scenario.goal_locations.begin(), scenario.goal_locations.end());
  for (std::size_t o : scenario.relevant_objects) {
    auto it = belief.known_objects.find(o);
    if (it != belief.known_objects.end()) out.push_back(it->second);
  }
  return sorted_unique(std::move(out));
}

bool is_progress_fact(std::string_view atom) {
  static constexpr std::string_view kProgress[] = {"boiled",           "peeled",        "toasted",
                                                   "has-water",        "coffee-in",     "breakfast-served",
                                                   "coffee-served",    "task-done"};
  if (atom.size() < 2 || atom.front() != '(') return false;
  atom.remove_prefix(1);
  const auto end = atom.find_first_of(" )");
  const auto head = atom.substr(0, end);
  return std::find(std::begin(kProgress), std::end(kProgress), head) != std::end(kProgress);
}

namespace {

struct OperatorText {
  std::string_view name;
  std::string_view parameters;
  std::string_view precondition;
  std::string_view effect;  // without the cost increase
  int cost_kind;            // 0 distance, 1 pick, 2 place, 3 fixed
};

constexpr OperatorText kOperators[] = {
    {"move", "?from - location ?to - location", "(rob-at ?from)",
     "(not (rob-at ?from)) (rob-at ?to)", 0},
    {"pick", "?o - item ?l - location", "(rob-at ?l) (obj-at ?o ?l) (hand-is-free)",
     "(not (obj-at ?o ?l)) (not (hand-is-free)) (holding ?o)", 1},
    {"place", "?o - item ?l - location", "(drop-site ?l) (rob-at ?l) (holding ?o)",
     "(obj-at ?o ?l) (hand-is-free) (not (holding ?o))", 2},
    {"deliver-option", "?o - item ?l - location", "(option ?o) (return-site ?l) (rob-at ?l) (holding ?o)",
     "(obj-at ?o ?l) (hand-is-free) (not (holding ?o)) (task-done)", 2},
    {"boil", "?o - item ?v - item ?l - location",
     "(boilable ?o) (boil-vessel ?v) (rob-at ?l) (obj-at ?o ?l) (obj-at ?v ?l)", "(boiled ?o)", 3},
    {"peel", "?o - item ?k - item ?l - location",
     "(peelable ?o) (peeler ?k) (rob-at ?l) (obj-at ?o ?l) (holding ?k)", "(peeled ?o)", 3},
    {"toast", "?o - item ?t - item ?l - location",
     "(toastable ?o) (toaster ?t) (rob-at ?l) (obj-at ?o ?l) (obj-at ?t ?l)", "(toasted ?o)", 3},
    {"serve-boiled", "?o - item ?b - item ?l - location",
     "(boiled ?o) (bowl ?b) (serve-site ?l) (rob-at ?l) (obj-at ?o ?l) (obj-at ?b ?l)",
     "(breakfast-served)", 3},
    {"serve-peeled", "?o - item ?p - item ?l - location",
     "(peeled ?o) (plate ?p) (serve-site ?l) (rob-at ?l) (obj-at ?o ?l) (obj-at ?p ?l)",
     "(breakfast-served)", 3},
    {"serve-toasted", "?o - item ?p - item ?l - location",
     "(toasted ?o) (plate ?p) (serve-site ?l) (rob-at ?l) (obj-at ?o ?l) (obj-at ?p ?l)",
     "(breakfast-served)", 3},
    {"pour-water", "?w - item ?v - item ?l - location",
     "(water-source ?w) (coffee-vessel ?v) (rob-at ?l) (holding ?w) (obj-at ?v ?l)", "(has-water ?v)", 3},
    {"make-coffee", "?g - item ?v - item ?l - location",
     "(grinds ?g) (coffee-vessel ?v) (has-water ?v) (rob-at ?l) (obj-at ?g ?l) (obj-at ?v ?l)",
     "(coffee-in ?v)", 3},
    {"serve-coffee", "?v - item ?m - item ?l - location",
     "(coffee-in ?v) (cup ?m) (serve-site ?l) (rob-at ?l) (obj-at ?v ?l) (obj-at ?m ?l)",
     "(coffee-served)", 3},
};

constexpr std::string_view kPredicates =
    "    (rob-at ?l - location)\n"
    "    (hand-is-free)\n"
    "    (holding ?o - item)\n"
    "    (obj-at ?o - item ?l - location)\n"
    "    (find-option ?o - item ?start - location ?target - location)\n"
    "    (drop-site ?l - location)\n"
    "    (serve-site ?l - location)\n"
    "    (return-site ?l - location)\n"
    "    (option ?o - item)\n"
    "    (boilable ?o - item) (boil-vessel ?o - item) (bowl ?o - item)\n"
    "    (peelable ?o - item) (peeler ?o - item) (plate ?o - item)\n"
    "    (toastable ?o - item) (toaster ?o - item)\n"
    "    (grinds ?o - item) (coffee-vessel ?o - item) (water-source ?o - item) (cup ?o - item)\n"
    "    (boiled ?o - item) (peeled ?o - item) (toasted ?o - item)\n"
    "    (has-water ?o - item) (coffee-in ?o - item)\n"
    "    (breakfast-served) (coffee-served) (task-done))\n";

constexpr std::string_view kFind =
    "  (:action find\n"
    "    :parameters (?obj - item ?start - location ?target - location)\n"
    "    :precondition (and (find-option ?obj ?start ?target)\n"
    "                       (rob-at ?start)\n"
    "                       (hand-is-free))\n"
    "    :effect (and (not (rob-at ?start)) (rob-at ?target)\n"
    "                 (not (hand-is-free)) (holding ?obj)\n"
    "                 (increase (total-cost) (find-cost ?obj ?start ?target))))\n";

std::string domain_text(const ScenarioSpec& scenario, bool with_find, const CostModel& costs) {
  std::ostringstream out;
  out << "(define (domain findplan-" << lower(scenario.name) << ")\n"
      << "  (:requirements :strips :typing :action-costs)\n"
      << "  (:types location item)\n"
      << "  (:predicates\n"
      << kPredicates
      << "  (:functions (total-cost) (distance ?from - location ?to - location)\n"
      << "              (find-cost ?o - item ?start - location ?target - location))\n";
  for (const auto& op : kOperators) {
    if (std::find(scenario.operators.begin(), scenario.operators.end(), op.name) == scenario.operators.end()) {
      continue;
    }
    std::string cost;
    switch (op.cost_kind) {
      case 0: cost = "(distance ?from ?to)"; break;
      case 1: cost = format_real(costs.r_pick); break;
      case 2: cost = format_real(costs.r_place); break;
      default: cost = format_real(costs.fixed_op_cost); break;
    }
    out << "  (:action " << op.name << "\n"
        << "    :parameters (" << op.parameters << ")\n"
        << "    :precondition (and " << op.precondition << ")\n"
        << "    :effect (and " << op.effect << " (increase (total-cost) " << cost << ")))\n";
  }
  if (with_find) out << kFind;
  out << ")\n";
  return out.str();
}

}  // namespace

PddlText emit_pddl(const WorldModel& world, const BeliefState& belief, const ScenarioSpec& scenario,
                   const std::set<std::string>& facts, const FindCostTable& find_costs,
                   const CostModel& costs, FindGrounding mode) {
  const auto groundings = find_groundings(belief, scenario, mode);
  const auto locations = relevant_locations(belief, scenario);

  auto item = [&](std::size_t o) { return lower(world.object(o).id); };
  auto loc = [&](std::size_t c) { return lower(world.container(c).id); };

  std::set<std::string> names;
  for (std::size_t c : locations) names.insert(loc(c));
  for (std::size_t o : scenario.relevant_objects) {
    if (!names.insert(item(o)).second) {
      throw EmissionError("object name '" + item(o) + "' collides with a location name");
    }
  }

  std::ostringstream p;
  p << "(define (problem " << lower(scenario.name) << "-trial)\n"
    << "  (:domain findplan-" << lower(scenario.name) << ")\n"
    << "  (:objects\n";
  for (std::size_t c : locations) p << "    " << loc(c) << " - location\n";
  for (std::size_t o : scenario.relevant_objects) p << "    " << item(o) << " - item\n";
  p << "  )\n  (:init\n";
  p << "    (rob-at " << loc(belief.robot_location) << ")\n";
  if (belief.holding) {
    p << "    (holding " << item(*belief.holding) << ")\n";
  } else {
    p << "    (hand-is-free)\n";
  }
  for (std::size_t o : scenario.relevant_objects) {
    auto it = belief.known_objects.find(o);
    if (it != belief.known_objects.end()) p << "    (obj-at " << item(o) << " " << loc(it->second) << ")\n";
  }
  for (std::size_t c : scenario.goal_locations) p << "    (drop-site " << loc(c) << ")\n";
  if (scenario.site) {
    p << "    (" << (scenario.kind == ScenarioKind::AnyOfThree ? "return-site " : "serve-site ")
      << loc(*scenario.site) << ")\n";
  }
  for (std::size_t o : scenario.options) p << "    (option " << item(o) << ")\n";
  for (const auto* cats : {&breakfast_categories(), &coffee_categories()}) {
    if (cats == &breakfast_categories() && !uses_breakfast(scenario.kind)) continue;
    if (cats == &coffee_categories() && !uses_coffee(scenario.kind)) continue;
    for (const auto& c : *cats) {
      for (std::size_t o : scenario.relevant_objects) {
        if (in_category(c, world.object(o).type_name)) p << "    (" << c.predicate << " " << item(o) << ")\n";
      }
    }
  }
  for (const auto& f : facts) p << "    " << f << "\n";
  for (const auto& g : groundings) {
    p << "    (find-option " << item(g.object) << " " << loc(g.start) << " " << loc(g.target) << ")\n";
  }
  p << "    (= (total-cost) 0)\n";
  for (std::size_t a : locations) {
    for (std::size_t b : locations) {
      p << "    (= (distance " << loc(a) << " " << loc(b) << ") " << format_real(world.distance(a, b)) << ")\n";
    }
  }
  for (const auto& g : groundings) {
    const auto cost = find_costs.get(g);
    if (!cost) {
      throw EmissionError("no find cost for (" + item(g.object) + " " + loc(g.start) + " " + loc(g.target) + ")");
    }
    if (!std::isfinite(*cost) || *cost < 0.0) {
      throw EmissionError("find cost for " + item(g.object) + " is negative or not finite");
    }
    p << "    (= (find-cost " << item(g.object) << " " << loc(g.start) << " " << loc(g.target) << ") "
      << format_real(*cost) << ")\n";
  }
  p << "  )\n"
    << "  (:goal " << scenario.goal_text(world) << ")\n"
    << "  (:metric minimize (total-cost)))\n";

  return {domain_text(scenario, !groundings.empty(), costs), p.str()};
}

}  // namespace findplan
