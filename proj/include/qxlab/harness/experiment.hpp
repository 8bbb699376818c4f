#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "qxlab/harness/config.hpp"
#include "qxlab/harness/metrics.hpp"

namespace qxlab::harness {

struct RunOptions {
  std::size_t threads = 0;  // 0: QXLAB_THREADS, else the OpenMP default
  /// Execution order of seed indices; empty means 0..n_seeds-1. Outputs never depend on it.
  std::vector<std::size_t> order;
  std::function<void(const std::string&)> progress;
  bool checkpoints = true;  // save each seed's networks to ckpt_seed_<s>/
};

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::vector<MetricsRow> rows;
  std::vector<double> wall_ms;  // per training episode
};

struct ExperimentResult {
  std::filesystem::path dir;
  std::vector<SeedOutcome> seeds;  // in seed order
  std::size_t failures() const;
};

/// Per-episode cross-seed statistics for one row kind. stdev is the population
/// stdev over the seeds that logged the episode.
struct AggregateRow {
  RowKind kind = RowKind::Train;
  std::size_t episode = 0;
  std::size_t n = 0;
  std::vector<double> mean, stdev;                 // metric_names() order
  std::vector<double> mean_smooth, stdev_smooth;
};

/// Trains one seed and logs every episode (plus evaluation rows). Saves the final
/// networks to `checkpoint_dir` when it is non-empty.
SeedOutcome run_seed(const ExperimentConfig& cfg, std::uint64_t seed, const std::filesystem::path& checkpoint_dir = {});

/// Runs every seed in a worker pool, writes seed_<s>.csv, timing_seed_<s>.csv,
/// aggregate.csv and config.resolved.txt under cfg.out_dir. A failing seed leaves
/// seed_<s>.error and does not stop its siblings.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

std::vector<AggregateRow> aggregate(const std::vector<std::vector<MetricsRow>>& per_seed, double sigma);
std::string aggregate_csv(const std::vector<AggregateRow>& rows);

/// Worker count: explicit request, then QXLAB_THREADS, then the OpenMP default.
std::size_t worker_threads(std::size_t requested);

std::filesystem::path seed_file(const std::filesystem::path& dir, std::uint64_t seed);
std::filesystem::path checkpoint_dir(const std::filesystem::path& dir, std::uint64_t seed);

struct CheckpointEval {
  std::uint64_t seed = 0;
  double mean_return = 0.0;
  double success_rate = 0.0;
  double mean_position = 0.0;
};

/// Reloads every seed checkpoint of a finished experiment and evaluates its
/// exploit policy for `episodes` episodes; writes eval.csv into `dir`. Seeds
/// without a checkpoint are skipped and returned in `missing`.
std::vector<CheckpointEval> evaluate_checkpoints(const std::filesystem::path& dir, std::size_t episodes,
                                                 std::vector<std::uint64_t>* missing = nullptr);

}  // namespace qxlab::harness
