// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Criterion numbers may be given on the command line to run
// a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "findplan/bench.hpp"
#include "findplan/estimator.hpp"
#include "findplan/executive.hpp"
#include "findplan/lios.hpp"
#include "findplan/pddl/ground.hpp"
#include "findplan/pddl/parser.hpp"
#include "findplan/pddl/planner.hpp"
#include "findplan/rng.hpp"
#include "findplan/stats.hpp"
#include "findplan/tasks.hpp"
#include "findplan/world.hpp"

using namespace findplan;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const WorldConfig& household() {
  static const WorldConfig cfg = WorldConfig::household();
  return cfg;
}

// Estimator trained on 200 worlds from the training stream of seed 0, the
// same corpus `gen-worlds --count 200 --seed 0` writes.
const Estimator& trained_estimator() {
  static const Estimator est = [] {
    std::vector<WorldModel> corpus;
    for (std::size_t i = 0; i < 200; ++i) corpus.push_back(generate_world(training_seed(0, i), household()));
    return Estimator::train(corpus);
  }();
  return est;
}

// Random search situation on a fresh household world: a subset of containers
// left unsearched (always including the object's true container), random
// endpoints.
struct Situation {
  WorldModel world;
  BeliefState belief;
  std::size_t object = 0;
  std::size_t q_from = 0;
  std::size_t q_to = 0;
};

Situation random_situation(Rng& rng, std::uint64_t world_seed, std::size_t max_unsearched) {
  WorldModel w = generate_world(world_seed, household());
  const std::size_t n = w.containers().size();
  const std::size_t object = rng.index(w.objects().size());
  const std::size_t truth = w.true_container_of(object);
  std::vector<std::size_t> others;
  for (std::size_t c = 0; c < n; ++c) {
    if (c != truth) others.push_back(c);
  }
  rng.shuffle(others);
  const std::size_t keep = 1 + rng.index(std::min(max_unsearched, n));
  BeliefState b = BeliefState::initial(w, 0);
  std::fill(b.searched.begin(), b.searched.end(), true);
  b.searched[truth] = false;
  for (std::size_t i = 0; i + 1 < keep; ++i) b.searched[others[i]] = false;
  const std::size_t q_from = rng.index(n);
  const std::size_t q_to = rng.index(n);
  b.robot_location = q_from;
  return {std::move(w), std::move(b), object, q_from, q_to};
}

// Expected cost of visiting `order` by explicit enumeration of where the
// object is, with placement probability proportional to the marginals.
double enumerate(const WorldModel& w, const std::vector<std::size_t>& order, const std::vector<double>& marginal,
                 std::size_t q_from, std::size_t q_to, const CostModel& c) {
  double total = 0.0;
  for (auto i : order) total += marginal[i];
  double expected = 0.0;
  double walk = 0.0;
  std::size_t at = q_from;
  for (auto i : order) {
    walk += w.distance(at, i) + c.r_search;
    at = i;
    expected += marginal[i] / total * (walk + c.r_pick + w.distance(i, q_to));
  }
  return expected;
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  const auto& est = trained_estimator();
  const CostModel costs;
  Rng rng(101);
  double worst = 0.0;
  for (std::size_t i = 0; i < 500; ++i) {
    auto s = random_situation(rng, derive_seed(1, i), 5);
    const auto policy = optimal_find_policy(s.world, s.belief, s.object, s.q_from, s.q_to, est, costs);
    const auto marginal = est.p_found_all(s.world, s.world.object(s.object).type_name);
    auto order = s.belief.unsearched();
    double best = std::numeric_limits<double>::infinity();
    do {
      best = std::min(best, enumerate(s.world, order, marginal, s.q_from, s.q_to, costs));
    } while (std::next_permutation(order.begin(), order.end()));
    worst = std::max(worst, std::abs(best - policy.expected_cost));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 10.0,
          fmt("500 instances, max |DP - brute force| = %.3g, %.1f s (limit 10 s)", worst, secs)};
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  const auto& est = trained_estimator();
  const CostModel costs;
  Rng rng(202);
  double worst = 0.0;
  for (std::size_t i = 0; i < 20; ++i) {
    auto s = random_situation(rng, derive_seed(2, i), 100);
    const auto policy = optimal_find_policy(s.world, s.belief, s.object, s.q_from, s.q_to, est, costs);
    const auto all = est.p_found_all(s.world, s.world.object(s.object).type_name);
    std::vector<double> weights;
    for (auto c : policy.sequence) weights.push_back(all[c]);
    double sum = 0.0;
    const int rollouts = 100000;
    for (int r = 0; r < rollouts; ++r) {
      const auto where = policy.sequence[rng.weighted(weights)];
      double cost = 0.0;
      std::size_t at = s.q_from;
      for (auto c : policy.sequence) {
        cost += s.world.distance(at, c) + costs.r_search;
        at = c;
        if (c == where) break;
      }
      sum += cost + costs.r_pick + s.world.distance(at, s.q_to);
    }
    const double rel = std::abs(sum / rollouts - policy.expected_cost) / policy.expected_cost;
    worst = std::max(worst, rel);
  }
  const double secs = seconds_since(t0);
  return {worst < 0.02 && secs < 60.0,
          fmt("20 policies x 100000 rollouts, max relative error %.3f%% (limit 2%%), %.1f s (limit 60 s)",
              100.0 * worst, secs)};
}

Outcome criterion3() {
  SearchEvalOptions o;
  o.trials = 200;
  o.seed = 0;
  auto split = [](const std::vector<SearchTrial>& trials) {
    std::vector<double> g, l;
    for (const auto& t : trials) {
      g.push_back(t.greedy_cost);
      l.push_back(t.lios_cost);
    }
    return std::pair{g, l};
  };
  const auto [greedy, lios] = split(object_search_eval(trained_estimator(), o));
  const auto informed = sign_test_less(lios, greedy);
  const auto [greedy_u, lios_u] = split(object_search_eval(Estimator::uniform(), o));
  const auto uniform = sign_test_less(lios_u, greedy_u);
  const bool improves = mean(lios) < mean(greedy) && informed.p_value < 0.05;
  const bool ablation = uniform.p_value >= 0.05;
  return {improves && ablation,
          fmt("greedy %.2f, lios %.2f (%.1f%% lower, sign test p = %.2g); uniform estimator: lios %.2f, "
              "p = %.2g (advantage gone: %s)",
              mean(greedy), mean(lios), 100.0 * (mean(greedy) - mean(lios)) / mean(greedy), informed.p_value,
              mean(lios_u), uniform.p_value, ablation ? "yes" : "no")};
}

struct TableRun {
  BatchResult result;
  double seconds = 0.0;
};

const TableRun& table_run() {
  static const TableRun run = [] {
    BatchOptions o;
    o.scenarios.assign(std::begin(kAllScenarios), std::end(kAllScenarios));
    o.strategies.assign(std::begin(kAllStrategies), std::end(kAllStrategies));
    for (std::size_t t = 0; t < 100; ++t) o.seeds.push_back(evaluation_seed(0, t));
    const auto& est = trained_estimator();
    const auto t0 = Clock::now();
    TableRun r{run_batch(est, o), 0.0};
    r.seconds = seconds_since(t0);
    return r;
  }();
  return run;
}

Outcome criterion4() {
  const auto& run = table_run();
  const auto& r = run.result;
  auto cost = [&](ScenarioKind s, Strategy g) { return r.cell(to_string(s), to_string(g))->mean_cost; };
  std::vector<std::string> broken;
  for (auto s : {ScenarioKind::Deliver3, ScenarioKind::AnyOfThree}) {
    for (auto other : {Strategy::OptLIOS, Strategy::OptGreedy}) {
      if (cost(s, Strategy::ModelLIOS) > cost(s, other)) {
        broken.push_back(fmt("%s ModelLIOS %.2f > %s %.2f", std::string(to_string(s)).c_str(),
                             cost(s, Strategy::ModelLIOS), std::string(to_string(other)).c_str(), cost(s, other)));
      }
    }
  }
  for (auto s : kAllScenarios) {
    const std::pair<Strategy, Strategy> pairs[] = {{Strategy::OptLIOS, Strategy::OptGreedy},
                                                   {Strategy::PesLIOS, Strategy::PesGreedy}};
    for (auto [lios, greedy] : pairs) {
      if (cost(s, lios) >= cost(s, greedy)) {
        broken.push_back(fmt("%s %s %.2f >= %s %.2f", std::string(to_string(s)).c_str(),
                             std::string(to_string(lios)).c_str(), cost(s, lios),
                             std::string(to_string(greedy)).c_str(), cost(s, greedy)));
      }
    }
  }
  std::string detail = fmt("100 trials x 25 cells in %.0f s (limit 900 s); Deliver3 ModelLIOS %.2f, OptLIOS %.2f, "
                           "OptGreedy %.2f; AnyOfThree ModelLIOS %.2f, OptLIOS %.2f, OptGreedy %.2f",
                           run.seconds, cost(ScenarioKind::Deliver3, Strategy::ModelLIOS),
                           cost(ScenarioKind::Deliver3, Strategy::OptLIOS),
                           cost(ScenarioKind::Deliver3, Strategy::OptGreedy),
                           cost(ScenarioKind::AnyOfThree, Strategy::ModelLIOS),
                           cost(ScenarioKind::AnyOfThree, Strategy::OptLIOS),
                           cost(ScenarioKind::AnyOfThree, Strategy::OptGreedy));
  for (const auto& b : broken) detail += "; violated: " + b;
  return {broken.empty() && run.seconds < 900.0, detail};
}

Outcome criterion5() {
  const auto& r = table_run().result;
  std::string detail = "AnyOfThree success:";
  bool pass = true;
  for (auto g : kAllStrategies) {
    const auto* c = r.cell("AnyOfThree", to_string(g));
    pass = pass && c->successes == c->trials;
    detail += fmt(" %s %zu/%zu", std::string(to_string(g)).c_str(), c->successes, c->trials);
  }
  return {pass, detail};
}

// Uniform-cost search over the explicit state space of a ground task.
std::optional<double> optimal_cost(const pddl::GroundTask& t) {
  if (t.goal_impossible) return std::nullopt;
  using State = std::vector<bool>;
  State init(t.facts.size(), false);
  for (auto f : t.initial) init[f] = true;
  std::map<State, double> best{{init, 0.0}};
  using Entry = std::pair<double, State>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  open.push({0.0, init});
  while (!open.empty()) {
    auto [g, s] = open.top();
    open.pop();
    if (g > best[s]) continue;
    bool goal = true;
    for (auto f : t.goal) goal = goal && s[f];
    for (auto f : t.goal_neg) goal = goal && !s[f];
    if (goal) return g;
    for (const auto& a : t.actions) {
      bool ok = true;
      for (auto f : a.pre) ok = ok && s[f];
      for (auto f : a.pre_neg) ok = ok && !s[f];
      if (!ok) continue;
      State n = s;
      for (auto f : a.del) n[f] = false;
      for (auto f : a.add) n[f] = true;
      auto it = best.find(n);
      if (it == best.end() || g + a.cost < it->second) {
        best[n] = g + a.cost;
        open.push({g + a.cost, n});
      }
    }
  }
  return std::nullopt;
}

const char* kHaulDomain = R"((define (domain haul)
  (:requirements :strips :typing :negative-preconditions :action-costs)
  (:types room item)
  (:predicates (rob-at ?r - room) (obj-at ?o - item ?r - room) (holding ?o - item)
               (hand-is-free) (link ?a ?b - room) (locked ?r - room) (key-for ?o - item ?r - room))
  (:functions (total-cost) (len ?a ?b - room))
  (:action move :parameters (?a ?b - room)
    :precondition (and (rob-at ?a) (link ?a ?b) (not (locked ?b)))
    :effect (and (not (rob-at ?a)) (rob-at ?b) (increase (total-cost) (len ?a ?b))))
  (:action unlock :parameters (?a ?b - room ?k - item)
    :precondition (and (rob-at ?a) (link ?a ?b) (locked ?b) (holding ?k) (key-for ?k ?b))
    :effect (and (not (locked ?b)) (increase (total-cost) 1)))
  (:action pick :parameters (?o - item ?r - room)
    :precondition (and (rob-at ?r) (obj-at ?o ?r) (hand-is-free))
    :effect (and (holding ?o) (not (hand-is-free)) (not (obj-at ?o ?r)) (increase (total-cost) 5)))
  (:action place :parameters (?o - item ?r - room)
    :precondition (and (rob-at ?r) (holding ?o))
    :effect (and (obj-at ?o ?r) (hand-is-free) (not (holding ?o)) (increase (total-cost) 5)))))";

std::string haul_problem(Rng& rng, int index, bool satisfied) {
  const int rooms = rng.range(2, 4);
  const int items = rng.range(1, 3);
  auto room = [](int r) { return "r" + std::to_string(r); };
  auto item = [](int i) { return "i" + std::to_string(i); };
  std::string objects;
  for (int r = 0; r < rooms; ++r) objects += " " + room(r);
  objects += " - room";
  for (int i = 0; i < items; ++i) objects += " " + item(i);
  objects += " - item";
  std::string init = "(rob-at r0) (hand-is-free) (= (total-cost) 0)";
  for (int a = 0; a < rooms; ++a) {
    for (int b = 0; b < rooms; ++b) {
      if (a == b || !rng.bernoulli(0.7)) continue;
      init += " (link " + room(a) + " " + room(b) + ") (= (len " + room(a) + " " + room(b) + ") " +
              std::to_string(rng.range(1, 9)) + ")";
    }
  }
  if (rooms > 2 && rng.bernoulli(0.5)) {
    const int locked = rng.range(1, rooms - 1);
    init += " (locked " + room(locked) + ") (key-for i0 " + room(locked) + ")";
  }
  std::string goal;
  for (int i = 0; i < items; ++i) {
    const int at = rng.range(0, rooms - 1);
    init += " (obj-at " + item(i) + " " + room(at) + ")";
    goal += " (obj-at " + item(i) + " " + room(satisfied ? at : rng.range(0, rooms - 1)) + ")";
  }
  return "(define (problem haul-" + std::to_string(index) + ") (:domain haul) (:objects" + objects + ") (:init " +
         init + ") (:goal (and" + goal + ")) (:metric minimize (total-cost)))";
}

Outcome criterion6() {
  const auto domain = pddl::parse_domain(kHaulDomain);
  Rng rng(606);
  int fixtures = 0;
  int solvable = 0;
  int invalid = 0;
  int over_bound = 0;
  int wrong_status = 0;
  double worst_ratio = 0.0;
  while (fixtures < 50) {
    const auto task = pddl::ground(domain, pddl::parse_problem(haul_problem(rng, fixtures, false), domain));
    ++fixtures;
    const auto best = optimal_cost(task);
    const auto r = pddl::plan(task, {});
    if (!best) {
      wrong_status += r.status != pddl::PlanStatus::Unsolvable;
      continue;
    }
    ++solvable;
    if (r.status != pddl::PlanStatus::Solved) {
      ++wrong_status;
      continue;
    }
    try {
      if (std::abs(pddl::validate(r.plan, task) - r.plan.cost) > 1e-9) ++invalid;
    } catch (const std::exception&) {
      ++invalid;
    }
    if (r.plan.cost > 2.0 * *best + 1e-9) ++over_bound;
    if (*best > 0) worst_ratio = std::max(worst_ratio, r.plan.cost / *best);
  }

  // Plans for emitted scenario problems must validate too.
  const auto& est = trained_estimator();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto w = generate_world(evaluation_seed(606, seed), household());
    for (auto kind : kAllScenarios) {
      const auto s = build_scenario(kind, w, seed);
      const auto b = BeliefState::initial(w, s.start);
      FindCostTable costs;
      for (const auto& k : find_groundings(b, s)) {
        costs.set(k, optimal_find_policy(w, b, k.object, k.start, k.target, est, CostModel{}).expected_cost);
      }
      const auto text = emit_pddl(w, b, s, {}, costs, CostModel{});
      const auto d = pddl::parse_domain(text.domain);
      const auto task = pddl::ground(d, pddl::parse_problem(text.problem, d));
      pddl::PlanOptions o;
      o.max_expansions = 100000;
      const auto r = pddl::plan(task, o);
      if (r.status != pddl::PlanStatus::Solved) {
        ++wrong_status;
        continue;
      }
      try {
        pddl::validate(r.plan, task);
      } catch (const std::exception&) {
        ++invalid;
      }
    }
  }

  int empty_ok = 0;
  for (int i = 0; i < 10; ++i) {
    const auto task = pddl::ground(domain, pddl::parse_problem(haul_problem(rng, 100 + i, true), domain));
    const auto r = pddl::plan(task, {});
    empty_ok += r.status == pddl::PlanStatus::Solved && r.plan.actions.empty() && r.plan.cost == 0.0;
  }
  return {invalid == 0 && over_bound == 0 && wrong_status == 0 && empty_ok == 10 && solvable >= 25,
          fmt("%d random fixtures (%d solvable), worst cost/optimal %.3f (bound 2), %d over bound, %d invalid, "
              "%d wrong status, %d/10 satisfied goals gave empty plans",
              fixtures, solvable, worst_ratio, over_bound, invalid, wrong_status, empty_ok)};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion7() {
  const fs::path dir = fs::path(FINDPLAN_FIXTURE_DIR) / "pddl";
  std::vector<std::pair<std::string, std::string>> texts;  // domain, problem
  std::map<std::string, std::string> domains;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.ends_with("_domain.pddl")) domains[name.substr(0, name.size() - 12)] = read_file(e.path());
  }
  int files = static_cast<int>(domains.size());
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (!name.ends_with("_problem.pddl")) continue;
    ++files;
    // problems pair with the domain sharing their prefix, else with deliver
    const auto prefix = name.substr(0, name.find('_'));
    texts.push_back({domains.contains(prefix) ? domains[prefix] : domains["deliver"], read_file(e.path())});
  }
  const bool has_find = domains.contains("find");

  // Emitted scenario text is part of the corpus as well.
  const auto w = generate_world(evaluation_seed(707, 0), household());
  for (auto kind : kAllScenarios) {
    const auto s = build_scenario(kind, w, 7);
    const auto b = BeliefState::initial(w, s.start);
    FindCostTable costs;
    for (const auto& k : find_groundings(b, s)) costs.set(k, 12.5);
    const auto t = emit_pddl(w, b, s, {}, costs, CostModel{});
    texts.push_back({t.domain, t.problem});
  }

  int checked = 0;
  int broken = 0;
  for (const auto& [dt, pt] : texts) {
    const auto d1 = pddl::parse_domain(dt);
    const auto d2 = pddl::parse_domain(pddl::print_domain(d1));
    const auto p1 = pddl::parse_problem(pt, d1);
    const auto p2 = pddl::parse_problem(pddl::print_problem(p1), d2);
    broken += !(d1 == d2) + !(p1 == p2);
    broken += pddl::print_domain(d2) != pddl::print_domain(d1);
    ++checked;
  }
  return {broken == 0 && has_find && checked > 0,
          fmt("%d fixture files plus %zu emitted scenarios, %d domain/problem pairs round-tripped, %d mismatches, "
              "find schema fixture %s",
              files, std::size(kAllScenarios), checked, broken, has_find ? "present" : "missing")};
}

Outcome criterion8() {
  const auto dir = fs::temp_directory_path() / "findplan_acceptance_seeds";
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "seeds.txt");
    out << "# fixed evaluation seeds\n";
    for (std::size_t t = 0; t < 8; ++t) out << evaluation_seed(808, t) << "\n";
  }
  BatchOptions o;
  o.scenarios.assign(std::begin(kAllScenarios), std::end(kAllScenarios));
  o.strategies.assign(std::begin(kAllStrategies), std::end(kAllStrategies));
  o.seeds = read_seed_file(dir / "seeds.txt");
  const auto& est = trained_estimator();
  write_batch(run_batch(est, o), dir / "first");
  auto threaded = o;
  threaded.threads = 2;
  write_batch(run_batch(est, threaded), dir / "second");
  const auto a = read_file(dir / "first" / "results.jsonl");
  const auto b = read_file(dir / "second" / "results.jsonl");
  const auto lines = std::count(a.begin(), a.end(), '\n');
  return {!a.empty() && a == b,
          fmt("two runs over %zu seeds (1 and 2 threads): %ld records each, logs %s", o.seeds.size(), long(lines),
              a == b ? "byte-identical" : "differ")};
}

Outcome criterion9() {
  const auto& est = trained_estimator();
  const CostModel costs;
  Rng rng(909);
  int runs = 0;
  int held = 0;
  int outside_subset = 0;
  int recomputed = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    auto s = random_situation(rng, derive_seed(9, i), 100);
    const bool lios = rng.bernoulli(0.7);
    const std::size_t k = 1 + rng.index(kDefaultMaxCandidates);
    const auto policy = lios ? optimal_find_policy(s.world, s.belief, s.object, s.q_from, s.q_to, est, costs, k)
                             : greedy_find_policy(s.world, s.belief, s.object, s.q_from, s.q_to, costs);
    const auto truth = s.world.true_container_of(s.object);
    outside_subset += std::find(policy.sequence.begin(), policy.sequence.end(), truth) == policy.sequence.end();
    std::vector<TraceStep> trace;
    const auto out = execute_find(s.world, s.belief, policy, costs, lios ? &est : nullptr, &trace, k);
    ++runs;
    recomputed += out.recomputations > 0;
    const double traced = std::accumulate(trace.begin(), trace.end(), 0.0,
                                          [](double a, const TraceStep& t) { return a + t.cost; });
    const bool ok = s.belief.holding == s.object && s.belief.robot_location == s.q_to &&
                    s.belief.is_known(s.object) && s.belief.is_searched(truth) &&
                    std::abs(traced - out.cost) < 1e-9;
    held += ok;
  }
  return {held == runs && outside_subset > 0 && recomputed > 0,
          fmt("%d/%d runs ended holding the object at the target; %d started with the object outside the "
              "candidate subset, %d recomputed the policy",
              held, runs, outside_subset, recomputed)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"expected-cost optimizer matches brute force", criterion1},
      {"Monte-Carlo rollouts match expected cost", criterion2},
      {"LIOS beats Greedy in object search", criterion3},
      {"strategy table ordering", criterion4},
      {"AnyOfThree always succeeds", criterion5},
      {"planner soundness and quality", criterion6},
      {"parser round-trip fixpoint", criterion7},
      {"bench determinism", criterion8},
      {"find abstraction soundness", criterion9},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.contains(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
