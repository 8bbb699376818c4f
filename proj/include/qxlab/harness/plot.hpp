#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qxlab/harness/csv.hpp"
#include "qxlab/harness/metrics.hpp"

namespace qxlab::harness {

/// One labelled curve: smoothed mean with a +-1 smoothed stdev band.
struct PlotSeries {
  std::string label;
  std::vector<double> x, mean, lo, hi;
};

/// Extracts a series from an aggregate CSV. Rows of other kinds are skipped.
PlotSeries series_from_aggregate(const CsvTable& table, const std::string& label, const std::string& metric, RowKind kind);

/// SVG 1.1 line chart. No series, or only empty ones, gives bare axes.
std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title, const std::string& y_label);

struct PlotInput {
  std::string label;
  std::filesystem::path aggregate_csv;
};

/// One SVG per metric and row kind (<metric>_<kind>.svg) overlaying every input.
/// Eval charts are written only when some input has eval rows. Returns the files.
std::vector<std::filesystem::path> emit_plots(const std::vector<PlotInput>& inputs, const std::filesystem::path& out_dir);

/// aggregate.csv in `dir` itself, else in each immediate subdirectory (sorted).
std::vector<PlotInput> find_aggregates(const std::filesystem::path& dir);

}  // namespace qxlab::harness
