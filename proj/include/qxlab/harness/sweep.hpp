#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qxlab/harness/experiment.hpp"

namespace qxlab::harness {

/// One grid axis. An axis may set several keys jointly, so listed pairs such as
/// (q_lr, qx_lr) form one axis whose values are tuples.
struct SweepAxis {
  std::vector<std::string> keys;
  std::vector<std::vector<std::string>> values;  // each entry has keys.size() items
};

struct SweepCell {
  std::size_t index = 0;
  std::vector<std::pair<std::string, std::string>> settings;
  std::string label() const;  // "agent.q_lr=0.01,agent.qx_lr=0.001"
};

struct SweepGrid {
  std::string name;
  std::vector<SweepAxis> axes;

  void validate() const;
  std::size_t cell_count() const;
  /// Cross product, last axis fastest.
  std::vector<SweepCell> cells() const;
};

SweepGrid lr_grid();     // 7 (q_lr, qx_lr) pairs
SweepGrid ratio_grid();  // 4 (ratio_q, ratio_qx) pairs
SweepGrid rnd_grid();    // predictor lr and extrinsic weight, one at a time
SweepGrid named_grid(const std::string& name);
std::vector<std::string> grid_names();

/// Base method for a named grid (rnd sweeps the RND baseline).
std::string grid_method(const std::string& name);

struct LeaderboardEntry {
  SweepCell cell;
  std::filesystem::path dir;
  double final_mean_return = 0.0;  // seed mean of the trailing-window mean return
  double final_success = 0.0;
  std::size_t failed_seeds = 0;
};

/// Runs run_experiment per cell under base.out_dir/cell_<k>, then writes
/// leaderboard.csv sorted by final mean return (descending, ties by index).
std::vector<LeaderboardEntry> run_sweep(const ExperimentConfig& base, const SweepGrid& grid, const RunOptions& opts = {});

/// Trailing-window statistics for one seed, using eval rows when present.
struct FinalStats {
  double mean_return = 0.0;
  double success_rate = 0.0;
};
FinalStats final_stats(const std::vector<MetricsRow>& rows, std::size_t window);

}  // namespace qxlab::harness
