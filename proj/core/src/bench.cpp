#include "findplan/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "findplan/error.hpp"
#include "findplan/format.hpp"
#include "findplan/rng.hpp"
#include "findplan/stats.hpp"

namespace findplan {

namespace {

constexpr std::uint64_t kTrainingStream = 0x7261696eULL;
constexpr std::uint64_t kEvaluationStream = 0x6576616cULL;

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the first
// exception after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::uint64_t evaluation_seed(std::uint64_t seed, std::size_t trial) {
  return derive_seed(derive_seed(seed, kEvaluationStream), trial);
}

std::uint64_t training_seed(std::uint64_t seed, std::size_t index) {
  return derive_seed(derive_seed(seed, kTrainingStream), index);
}

std::vector<SearchTrial> object_search_eval(const Estimator& est, const SearchEvalOptions& options) {
  std::vector<SearchTrial> out;
  for (std::size_t t = 0; t < options.trials; ++t) {
    SearchTrial trial;
    trial.trial = t;
    trial.world_seed = evaluation_seed(options.seed, t);
    const WorldModel world = generate_world(trial.world_seed, options.config);
    Rng rng(derive_seed(trial.world_seed, 0x5ea7c4));
    const std::size_t start = rng.index(world.containers().size());
    const std::size_t object = rng.index(world.objects().size());
    trial.object = world.object(object).id;
    trial.start = world.container(start).id;

    BeliefState greedy_belief = BeliefState::initial(world, start);
    const auto greedy = greedy_find_policy(world, greedy_belief, object, start, start, options.costs);
    trial.greedy_cost = execute_find(world, greedy_belief, greedy, options.costs).cost;

    BeliefState lios_belief = BeliefState::initial(world, start);
    const auto lios =
        optimal_find_policy(world, lios_belief, object, start, start, est, options.costs, options.max_candidates);
    trial.lios_cost =
        execute_find(world, lios_belief, lios, options.costs, &est, nullptr, options.max_candidates).cost;
    out.push_back(std::move(trial));
  }
  return out;
}

std::string search_eval_csv(const std::vector<SearchTrial>& trials) {
  std::string out = "trial,world_seed,object,start,greedy_cost,lios_cost\n";
  for (const auto& t : trials) {
    out += std::to_string(t.trial) + "," + std::to_string(t.world_seed) + "," + t.object + "," + t.start + "," +
           format_real(t.greedy_cost) + "," + format_real(t.lios_cost) + "\n";
  }
  return out;
}

const CellSummary* BatchResult::cell(std::string_view scenario, std::string_view strategy) const {
  for (const auto& c : cells) {
    if (c.scenario == scenario && c.strategy == strategy) return &c;
  }
  return nullptr;
}

std::vector<double> BatchResult::costs(std::string_view scenario, std::string_view strategy) const {
  std::vector<double> out;
  for (const auto& r : records) {
    if (r.scenario == scenario && r.strategy == strategy) out.push_back(r.cost);
  }
  return out;
}

BatchResult run_batch(const Estimator& est, const BatchOptions& options) {
  const std::size_t n_seeds = options.seeds.size();
  const std::size_t n_strategies = options.strategies.size();
  const std::size_t per_scenario = n_seeds * n_strategies;
  BatchResult result;
  result.records.resize(options.scenarios.size() * per_scenario);

  // One work item per seed: the world is generated once and shared by every
  // scenario and strategy run on it.
  parallel_for(n_seeds, options.threads, [&](std::size_t k) {
    const std::uint64_t seed = options.seeds[k];
    const WorldModel world = generate_world(seed, options.config);
    for (std::size_t s = 0; s < options.scenarios.size(); ++s) {
      const ScenarioSpec scenario = build_scenario(options.scenarios[s], world, seed);
      for (std::size_t g = 0; g < n_strategies; ++g) {
        TrialRecord record = run_trial(world, scenario, options.strategies[g], est, options.costs, seed,
                                       options.executive);
        if (record.success) {
          try {
            validate_trace(world, scenario, record.trace, options.costs);
          } catch (const ValidationError& e) {
            throw InternalError(record.scenario + "/" + record.strategy + " seed " + std::to_string(seed) +
                                ": " + e.what());
          }
        }
        result.records[s * per_scenario + g * n_seeds + k] = std::move(record);
      }
    }
  });

  for (std::size_t s = 0; s < options.scenarios.size(); ++s) {
    for (std::size_t g = 0; g < n_strategies; ++g) {
      CellSummary cell;
      cell.scenario = std::string(to_string(options.scenarios[s]));
      cell.strategy = std::string(to_string(options.strategies[g]));
      double total = 0.0;
      for (std::size_t k = 0; k < n_seeds; ++k) {
        const auto& r = result.records[s * per_scenario + g * n_seeds + k];
        ++cell.trials;
        if (r.success) ++cell.successes;
        total += r.cost;
      }
      cell.mean_cost = cell.trials == 0 ? 0.0 : total / static_cast<double>(cell.trials);
      result.cells.push_back(std::move(cell));
    }
  }
  if (n_seeds == 0) result.cells.clear();
  return result;
}

std::string results_log(const BatchResult& result) {
  std::string out;
  for (const auto& r : result.records) out += r.to_json() + "\n";
  return out;
}

std::string summary_csv(const BatchResult& result) {
  std::string out = "scenario,strategy,trials,successes,success_rate,mean_cost\n";
  for (const auto& c : result.cells) {
    out += c.scenario + "," + c.strategy + "," + std::to_string(c.trials) + "," + std::to_string(c.successes) +
           "," + format_real(c.success_rate()) + "," + format_real(c.mean_cost) + "\n";
  }
  return out;
}

std::string summary_table(const BatchResult& result) {
  std::vector<std::string> scenarios;
  std::vector<std::string> strategies;
  for (const auto& c : result.cells) {
    if (std::find(scenarios.begin(), scenarios.end(), c.scenario) == scenarios.end()) scenarios.push_back(c.scenario);
    if (std::find(strategies.begin(), strategies.end(), c.strategy) == strategies.end()) {
      strategies.push_back(c.strategy);
    }
  }
  std::ostringstream out;
  out << std::left << std::setw(12) << "Strategy";
  for (const auto& s : scenarios) out << " | " << std::setw(17) << s;
  out << "\n" << std::setw(12) << "";
  for (std::size_t i = 0; i < scenarios.size(); ++i) out << " | " << std::setw(9) << "Cost" << std::setw(8) << "Succ.";
  out << "\n" << std::string(12 + scenarios.size() * 20, '-') << "\n";
  for (const auto& g : strategies) {
    out << std::setw(12) << g;
    for (const auto& s : scenarios) {
      const auto* c = result.cell(s, g);
      char cost[32];
      char rate[32];
      std::snprintf(cost, sizeof cost, "%.2f", c ? c->mean_cost : 0.0);
      std::snprintf(rate, sizeof rate, "%.0f%%", c ? 100.0 * c->success_rate() : 0.0);
      out << " | " << std::setw(9) << cost << std::setw(8) << rate;
    }
    out << "\n";
  }
  return out.str();
}

std::string timing_csv(const BatchResult& result) {
  std::string out = "scenario,strategy,seed,planner_seconds\n";
  for (const auto& r : result.records) {
    out += r.scenario + "," + r.strategy + "," + std::to_string(r.seed) + "," + format_real(r.planner_seconds) + "\n";
  }
  return out;
}

void write_batch(const BatchResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "results.jsonl", results_log(result));
  write_file(dir / "summary.csv", summary_csv(result));
  write_file(dir / "summary.txt", summary_table(result));
  write_file(dir / "timing.csv", timing_csv(result));
}

std::vector<std::uint64_t> read_seed_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open seed file '" + path.string() + "'");
  std::vector<std::uint64_t> seeds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::uint64_t value = 0;
    std::size_t used = 0;
    try {
      if (token.front() == '-') throw std::invalid_argument("negative");
      value = std::stoull(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    std::string rest;
    if (used != token.size() || fields >> rest) {
      throw ParseError("expected one unsigned seed", static_cast<int>(line_no), 1);
    }
    seeds.push_back(value);
  }
  return seeds;
}

}  // namespace findplan
