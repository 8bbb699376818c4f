#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qxlab::harness {

enum class RowKind { Train, Eval };

/// One CSV line. Eval rows average `eval_episodes` runs of the exploit policy taken
/// after training episode `episode`; their `success` is the success fraction.
struct MetricsRow {
  std::uint64_t seed = 0;
  std::size_t episode = 0;
  RowKind kind = RowKind::Train;
  std::size_t env_steps = 0;
  double return_q = 0.0;
  double return_qx = 0.0;
  double success = 0.0;
  double mean_position = 0.0;
  double mean_position_qx = 0.0;
  double mean_rx = 0.0;
  double mean_td_abs = 0.0;
  double intrinsic_mean = 0.0;
};

/// Numeric columns available to aggregation, summaries and plots.
const std::vector<std::string>& metric_names();
double metric_value(const MetricsRow& row, const std::string& name);

std::string csv_header();
std::string csv_line(const MetricsRow& row);

void write_metrics(const std::filesystem::path& file, const std::vector<MetricsRow>& rows);
/// Throws ParseError naming the file and line on malformed input.
std::vector<MetricsRow> read_metrics(const std::filesystem::path& file);

std::vector<MetricsRow> rows_of_kind(const std::vector<MetricsRow>& rows, RowKind kind);

}  // namespace qxlab::harness
