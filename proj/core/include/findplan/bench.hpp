#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "findplan/estimator.hpp"
#include "findplan/executive.hpp"
#include "findplan/lios.hpp"
#include "findplan/tasks.hpp"
#include "findplan/world.hpp"

namespace findplan {

/// World seed for evaluation trial `trial` of a run seeded with `seed`. Drawn
/// from a stream that world generation for training never uses.
std::uint64_t evaluation_seed(std::uint64_t seed, std::size_t trial);

/// World seed for training world `index` of a run seeded with `seed`.
std::uint64_t training_seed(std::uint64_t seed, std::size_t index);

struct SearchTrial {
  std::size_t trial = 0;
  std::uint64_t world_seed = 0;
  std::string object;
  std::string start;
  double greedy_cost = 0.0;
  double lios_cost = 0.0;
};

struct SearchEvalOptions {
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  WorldConfig config = WorldConfig::household();
  CostModel costs;
  std::size_t max_candidates = kDefaultMaxCandidates;
};

/// Per trial: a fresh world, a random object and start container; Greedy and
/// LIOS each search for the object and bring it back to the start.
std::vector<SearchTrial> object_search_eval(const Estimator& est, const SearchEvalOptions& options);

/// Header "trial,world_seed,object,start,greedy_cost,lios_cost" and one row per trial.
std::string search_eval_csv(const std::vector<SearchTrial>& trials);

struct BatchOptions {
  std::vector<ScenarioKind> scenarios;
  std::vector<Strategy> strategies;
  std::vector<std::uint64_t> seeds;  ///< one world per seed
  WorldConfig config = WorldConfig::household();
  CostModel costs;
  ExecutiveOptions executive;
  std::size_t threads = 1;
};

struct CellSummary {
  std::string scenario;
  std::string strategy;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double mean_cost = 0.0;  ///< failures counted at r_fail

  double success_rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
  }
};

struct BatchResult {
  std::vector<TrialRecord> records;  ///< ordered by (scenario, strategy, seed) as given
  std::vector<CellSummary> cells;    ///< ordered by (scenario, strategy)

  const CellSummary* cell(std::string_view scenario, std::string_view strategy) const;
  /// Costs of one cell's trials in seed order.
  std::vector<double> costs(std::string_view scenario, std::string_view strategy) const;
};

/// Runs every (scenario, strategy, seed) combination. Successful traces are
/// replayed with validate_trace; a mismatch raises InternalError. Output is
/// independent of `threads`.
BatchResult run_batch(const Estimator& est, const BatchOptions& options);

std::string results_log(const BatchResult& result);  ///< JSON lines, one per trial
std::string summary_csv(const BatchResult& result);  ///< scenario,strategy,trials,successes,success_rate,mean_cost
std::string summary_table(const BatchResult& result);  ///< strategies by scenarios, cost and success columns
std::string timing_csv(const BatchResult& result);   ///< scenario,strategy,seed,planner_seconds

/// Writes results.jsonl, summary.csv, summary.txt and timing.csv into `dir`.
void write_batch(const BatchResult& result, const std::filesystem::path& dir);

/// One unsigned seed per line; blank lines and '#' comments are skipped.
std::vector<std::uint64_t> read_seed_file(const std::filesystem::path& path);

}  // namespace findplan
