#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qxlab/harness/config.hpp"
#include "qxlab/harness/metrics.hpp"

namespace qxlab::harness {

struct SeedSummary {
  std::uint64_t seed = 0;
  std::vector<std::optional<std::size_t>> milestone_episode;  // first episode at or above each milestone
  double final_success = 0.0;
  double final_return = 0.0;
};

struct SummaryRow {
  std::string label;
  std::string method;
  std::string env;
  std::vector<double> milestones;
  std::vector<std::size_t> reached;               // seeds reaching each milestone
  std::vector<std::optional<double>> milestone_mean;  // over reaching seeds; empty when none did
  std::vector<double> milestone_std;
  double final_success_mean = 0.0, final_success_std = 0.0;
  double final_return_mean = 0.0, final_return_std = 0.0;
  std::vector<SeedSummary> seeds;
};

struct Summary {
  std::vector<SummaryRow> rows;
  std::vector<std::string> missing;  // absent cells or seed files
};

/// Episode of the first eval row (train rows when no eval rows exist) whose
/// trailing `window` mean of `metric` is >= each milestone.
SeedSummary summarize_seed(const std::vector<MetricsRow>& rows, const ExperimentConfig& cfg);
SummaryRow summarize_rows(const std::string& label, const ExperimentConfig& cfg,
                          const std::vector<std::vector<MetricsRow>>& per_seed);

/// Accepts an experiment directory, a sweep directory (sweep.csv + cell_<k>) or a
/// directory whose subdirectories are experiments.
Summary summarize(const std::filesystem::path& dir);

std::string summary_csv(const Summary& s);
/// Plain-text table; milestones never reached by any seed print as "x".
std::string summary_table(const Summary& s);

/// Writes summary.csv and summary.txt into `dir`.
void write_summary(const std::filesystem::path& dir, const Summary& s);

}  // namespace qxlab::harness
