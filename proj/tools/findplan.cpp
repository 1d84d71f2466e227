// findplan: command-line front end for world generation, estimator training,
// PDDL planning, object-search evaluation and scenario benchmarks.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "findplan/bench.hpp"
#include "findplan/error.hpp"
#include "findplan/estimator.hpp"
#include "findplan/executive.hpp"
#include "findplan/format.hpp"
#include "findplan/pddl/ground.hpp"
#include "findplan/pddl/parser.hpp"
#include "findplan/pddl/planner.hpp"
#include "findplan/stats.hpp"
#include "findplan/tasks.hpp"
#include "findplan/world.hpp"

namespace fs = std::filesystem;
using namespace findplan;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUnsolvable = 3;
constexpr int kExitTimeout = 4;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

WorldConfig config_from(const std::string& path) {
  return path.empty() ? WorldConfig::household() : WorldConfig::load(path);
}

std::vector<fs::path> world_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("'" + dir.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".world") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

struct GenWorldsArgs {
  std::string config;
  std::size_t count = 10;
  std::uint64_t seed = 0;
  std::string out;
};

int gen_worlds(const GenWorldsArgs& a) {
  const WorldConfig cfg = config_from(a.config);
  fs::create_directories(a.out);
  for (std::size_t i = 0; i < a.count; ++i) {
    const WorldModel world = generate_world(training_seed(a.seed, i), cfg);
    char name[32];
    std::snprintf(name, sizeof name, "world_%04zu.world", i);
    save_world(world, fs::path(a.out) / name);
  }
  std::cout << "wrote " << a.count << " worlds to " << a.out << "\n";
  return 0;
}

struct TrainArgs {
  std::string worlds;
  std::string out;
  double alpha = 1.0;
};

int train(const TrainArgs& a) {
  std::vector<WorldModel> worlds;
  for (const auto& f : world_files(a.worlds)) worlds.push_back(load_world(f));
  const Estimator est = Estimator::train(worlds, a.alpha);
  est.save(a.out);
  std::cout << "trained on " << worlds.size() << " worlds, " << est.counts().size() << " cells\n";
  return 0;
}

struct PlanArgs {
  std::string domain;
  std::string problem;
  double weight = 2.0;
  double timeout = 0.0;
  std::size_t max_expansions = 0;
};

int plan_cmd(const PlanArgs& a) {
  const auto domain = pddl::parse_domain(read_text(a.domain));
  const auto problem = pddl::parse_problem(read_text(a.problem), domain);
  const auto task = pddl::ground(domain, problem);
  pddl::PlanOptions options;
  options.weight = a.weight;
  if (a.timeout > 0) options.timeout_seconds = a.timeout;
  if (a.max_expansions > 0) options.max_expansions = a.max_expansions;
  const auto result = pddl::plan(task, options);
  if (result.status != pddl::PlanStatus::Solved) {
    std::cerr << "findplan: no plan: " << pddl::to_string(result.status) << " after " << result.expansions
              << " expansions\n";
    return result.status == pddl::PlanStatus::Timeout ? kExitTimeout : kExitUnsolvable;
  }
  std::cout << pddl::format_plan(result.plan);
  return 0;
}

struct SearchEvalArgs {
  std::string est;
  std::string config;
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  std::string out;
};

int search_eval(const SearchEvalArgs& a) {
  const Estimator est = Estimator::load(a.est);
  SearchEvalOptions options;
  options.trials = a.trials;
  options.seed = a.seed;
  options.config = config_from(a.config);
  const auto trials = object_search_eval(est, options);
  write_text(a.out, search_eval_csv(trials));

  std::vector<double> greedy;
  std::vector<double> lios;
  for (const auto& t : trials) {
    greedy.push_back(t.greedy_cost);
    lios.push_back(t.lios_cost);
  }
  const auto test = sign_test_less(lios, greedy);
  const double g = mean(greedy);
  const double l = mean(lios);
  char line[160];
  std::snprintf(line, sizeof line,
                "trials %zu\ngreedy mean cost %.2f\nlios mean cost %.2f\nimprovement %.1f%%\n"
                "sign test: lios better %zu, worse %zu, ties %zu, p = %.3g\n",
                trials.size(), g, l, g > 0 ? 100.0 * (g - l) / g : 0.0, test.wins, test.losses, test.ties,
                test.p_value);
  std::cout << line;
  return 0;
}

struct RunTrialArgs {
  std::string scenario;
  std::string strategy;
  std::uint64_t seed = 0;
  std::string est;
  std::string config;
  std::string world;
  double weight = ExecutiveOptions{}.planner_weight;
};

int run_trial_cmd(const RunTrialArgs& a) {
  const Estimator est = Estimator::load(a.est);
  const WorldModel world = a.world.empty() ? generate_world(a.seed, config_from(a.config)) : load_world(a.world);
  const ScenarioSpec scenario = build_scenario(parse_scenario_kind(a.scenario), world, a.seed);
  const CostModel costs;
  ExecutiveOptions options;
  options.planner_weight = a.weight;
  const TrialRecord record = run_trial(world, scenario, parse_strategy(a.strategy), est, costs, a.seed, options);
  if (record.success) validate_trace(world, scenario, record.trace, costs);
  std::cout << record.to_json() << "\n";
  return 0;
}

struct BenchArgs {
  std::vector<std::string> scenarios;
  std::vector<std::string> strategies;
  std::size_t trials = 100;
  bool trials_given = false;
  std::string seeds;
  std::uint64_t seed = 0;
  std::string est;
  std::string config;
  std::string out;
  std::size_t threads = 1;
  double weight = ExecutiveOptions{}.planner_weight;
};

int bench(const BenchArgs& a) {
  BatchOptions options;
  for (const auto& s : a.scenarios) options.scenarios.push_back(parse_scenario_kind(s));
  if (options.scenarios.empty()) options.scenarios.assign(std::begin(kAllScenarios), std::end(kAllScenarios));
  for (const auto& s : a.strategies) options.strategies.push_back(parse_strategy(s));
  if (options.strategies.empty()) options.strategies.assign(std::begin(kAllStrategies), std::end(kAllStrategies));
  if (!a.seeds.empty()) {
    options.seeds = read_seed_file(a.seeds);
    if (a.trials_given && a.trials < options.seeds.size()) options.seeds.resize(a.trials);
  } else {
    for (std::size_t i = 0; i < a.trials; ++i) options.seeds.push_back(evaluation_seed(a.seed, i));
  }
  options.config = config_from(a.config);
  options.threads = a.threads;
  options.executive.planner_weight = a.weight;
  const Estimator est = Estimator::load(a.est);
  const BatchResult result = run_batch(est, options);
  write_batch(result, a.out);
  std::cout << summary_table(result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Task planning with learning-informed object search"};
  app.require_subcommand(1);

  GenWorldsArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-worlds", "Generate household worlds");
  gen_cmd->add_option("--config", gen.config, "World config JSON (default: built-in household)")->check(CLI::ExistingFile);
  gen_cmd->add_option("--count", gen.count, "Number of worlds")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", gen.seed, "Base seed");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train the P_found estimator on a world directory");
  train_cmd->add_option("--worlds", tr.worlds, "Directory of .world files")->required()->check(CLI::ExistingDirectory);
  train_cmd->add_option("--out", tr.out, "Estimator output file")->required();
  train_cmd->add_option("--alpha", tr.alpha, "Laplace smoothing constant")->check(CLI::PositiveNumber);

  PlanArgs pl;
  auto* plan_sub = app.add_subcommand("plan", "Plan for a PDDL domain and problem");
  plan_sub->add_option("domain", pl.domain, "Domain file")->required()->check(CLI::ExistingFile);
  plan_sub->add_option("problem", pl.problem, "Problem file")->required()->check(CLI::ExistingFile);
  plan_sub->add_option("--weight", pl.weight, "Heuristic weight")->check(CLI::Range(1.0, 1000.0));
  plan_sub->add_option("--timeout", pl.timeout, "Wall-clock limit in seconds")->check(CLI::NonNegativeNumber);
  plan_sub->add_option("--max-expansions", pl.max_expansions, "Node expansion limit");

  SearchEvalArgs se;
  auto* se_cmd = app.add_subcommand("search-eval", "Compare Greedy and LIOS object search");
  se_cmd->add_option("--est", se.est, "Estimator file")->required()->check(CLI::ExistingFile);
  se_cmd->add_option("--trials", se.trials, "Number of trials");
  se_cmd->add_option("--seed", se.seed, "Evaluation seed");
  se_cmd->add_option("--config", se.config, "World config JSON")->check(CLI::ExistingFile);
  se_cmd->add_option("--out", se.out, "Per-trial CSV output")->required();

  RunTrialArgs rt;
  auto* rt_cmd = app.add_subcommand("run-trial", "Run one scenario trial and print its record");
  rt_cmd->add_option("--scenario", rt.scenario, "Deliver3, Breakfast, Coffee, BreakfastCoffee or AnyOfThree")->required();
  rt_cmd->add_option("--strategy", rt.strategy, "OptGreedy, PesGreedy, OptLIOS, PesLIOS or ModelLIOS")->required();
  rt_cmd->add_option("--seed", rt.seed, "World and scenario seed");
  rt_cmd->add_option("--est", rt.est, "Estimator file")->required()->check(CLI::ExistingFile);
  rt_cmd->add_option("--config", rt.config, "World config JSON")->check(CLI::ExistingFile);
  rt_cmd->add_option("--weight", rt.weight, "Planner heuristic weight")->check(CLI::Range(1.0, 1000.0));
  rt_cmd->add_option("--world", rt.world, "Use this world file instead of generating one")->check(CLI::ExistingFile);

  BenchArgs bn;
  auto* bench_cmd = app.add_subcommand("bench", "Run scenario x strategy batches");
  bench_cmd->add_option("--scenarios", bn.scenarios, "Scenarios (default: all)");
  bench_cmd->add_option("--strategies", bn.strategies, "Strategies (default: all)");
  auto* trials_opt = bench_cmd->add_option("--trials", bn.trials, "Trials per cell");
  bench_cmd->add_option("--seeds", bn.seeds, "Seed file, one world seed per line")->check(CLI::ExistingFile);
  bench_cmd->add_option("--seed", bn.seed, "Base seed when no seed file is given");
  bench_cmd->add_option("--est", bn.est, "Estimator file")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--config", bn.config, "World config JSON")->check(CLI::ExistingFile);
  bench_cmd->add_option("--out", bn.out, "Output directory")->required();
  bench_cmd->add_option("--threads", bn.threads, "Worker threads")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--weight", bn.weight, "Planner heuristic weight")->check(CLI::Range(1.0, 1000.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  bn.trials_given = trials_opt->count() > 0;

  try {
    if (*gen_cmd) return gen_worlds(gen);
    if (*train_cmd) return train(tr);
    if (*plan_sub) return plan_cmd(pl);
    if (*se_cmd) return search_eval(se);
    if (*rt_cmd) return run_trial_cmd(rt);
    if (*bench_cmd) return bench(bn);
  } catch (const Error& e) {
    std::cerr << "findplan: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "findplan: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
