#include <benchmark/benchmark.h>

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
#include "findplan/tasks.hpp"
#include "findplan/world.hpp"

using namespace findplan;

namespace {

SearchGeometry random_geometry(Rng& rng, std::size_t n) {
  SearchGeometry g;
  for (std::size_t i = 0; i < n; ++i) {
    g.from_start.push_back(rng.range(1, 30));
    g.to_goal.push_back(rng.range(1, 30));
  }
  g.between.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) g.between[i * n + j] = g.between[j * n + i] = rng.range(1, 30);
  }
  return g;
}

const Estimator& estimator() {
  static const Estimator est = [] {
    std::vector<WorldModel> corpus;
    for (std::size_t i = 0; i < 50; ++i) corpus.push_back(generate_world(training_seed(0, i), WorldConfig::household()));
    return Estimator::train(corpus);
  }();
  return est;
}

}  // namespace

static void BM_OptimalOrder(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(n);
  const auto g = random_geometry(rng, n);
  std::vector<double> p(n);
  for (auto& x : p) x = rng.uniform() + 0.01;
  for (auto _ : state) benchmark::DoNotOptimize(optimal_order(g, p, CostModel{}));
}
BENCHMARK(BM_OptimalOrder)->DenseRange(2, 10, 2)->Arg(12);

static void BM_GreedyOrder(benchmark::State& state) {
  Rng rng(8);
  const auto g = random_geometry(rng, 8);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_order(g));
}
BENCHMARK(BM_GreedyOrder);

static void BM_OptimalFindPolicy(benchmark::State& state) {
  const auto w = generate_world(3, WorldConfig::household());
  const auto b = BeliefState::initial(w, 0);
  const auto& est = estimator();
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimal_find_policy(w, b, 0, 0, 1, est, CostModel{}));
  }
}
BENCHMARK(BM_OptimalFindPolicy)->Unit(benchmark::kMicrosecond);

static void BM_GenerateWorld(benchmark::State& state) {
  const auto cfg = WorldConfig::household();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_world(seed++, cfg));
}
BENCHMARK(BM_GenerateWorld)->Unit(benchmark::kMicrosecond);

static void BM_TrainEstimator(benchmark::State& state) {
  std::vector<WorldModel> corpus;
  for (std::size_t i = 0; i < static_cast<std::size_t>(state.range(0)); ++i) {
    corpus.push_back(generate_world(training_seed(1, i), WorldConfig::household()));
  }
  for (auto _ : state) benchmark::DoNotOptimize(Estimator::train(corpus));
}
BENCHMARK(BM_TrainEstimator)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

static void BM_PlanScenario(benchmark::State& state) {
  const auto kind = kAllScenarios[state.range(0)];
  const auto w = generate_world(evaluation_seed(0, 0), WorldConfig::household());
  const auto s = build_scenario(kind, w, 0);
  const auto b = BeliefState::initial(w, s.start);
  const auto& est = estimator();
  FindCostTable costs;
  for (const auto& k : find_groundings(b, s)) {
    costs.set(k, optimal_find_policy(w, b, k.object, k.start, k.target, est, CostModel{}).expected_cost);
  }
  const auto text = emit_pddl(w, b, s, {}, costs, CostModel{});
  const auto d = pddl::parse_domain(text.domain);
  const auto task = pddl::ground(d, pddl::parse_problem(text.problem, d));
  pddl::PlanOptions o;
  o.weight = 1.0;
  o.max_expansions = 200000;
  for (auto _ : state) benchmark::DoNotOptimize(pddl::plan(task, o));
  state.SetLabel(s.name);
}
BENCHMARK(BM_PlanScenario)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

static void BM_EmitAndGround(benchmark::State& state) {
  const auto w = generate_world(evaluation_seed(0, 1), WorldConfig::household());
  const auto s = build_scenario(ScenarioKind::BreakfastCoffee, w, 1);
  const auto b = BeliefState::initial(w, s.start);
  FindCostTable costs;
  for (const auto& k : find_groundings(b, s)) costs.set(k, 25.0);
  for (auto _ : state) {
    const auto text = emit_pddl(w, b, s, {}, costs, CostModel{});
    const auto d = pddl::parse_domain(text.domain);
    benchmark::DoNotOptimize(pddl::ground(d, pddl::parse_problem(text.problem, d)));
  }
}
BENCHMARK(BM_EmitAndGround)->Unit(benchmark::kMicrosecond);

static void BM_RunTrial(benchmark::State& state) {
  const auto strategy = kAllStrategies[state.range(0)];
  const auto w = generate_world(evaluation_seed(0, 2), WorldConfig::household());
  const auto s = build_scenario(ScenarioKind::Deliver3, w, 2);
  const auto& est = estimator();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trial(w, s, strategy, est, CostModel{}, 2));
  }
  state.SetLabel(std::string(to_string(strategy)));
}
BENCHMARK(BM_RunTrial)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
