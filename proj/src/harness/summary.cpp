#include "qxlab/harness/summary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qxlab/errors.hpp"
#include "qxlab/harness/csv.hpp"
#include "qxlab/harness/experiment.hpp"
#include "qxlab/harness/sweep.hpp"

namespace qxlab::harness {

namespace fs = std::filesystem;

namespace {

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double s = 0.0;
  for (double x : xs) s += x;
  const double m = s / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / static_cast<double>(xs.size()))};
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void summarize_experiment(const fs::path& dir, const std::string& label, Summary& out) {
  const auto cfg = parse_resolved(read_text(dir / "config.resolved.txt"));
  const std::string name = label.empty() ? cfg.method : label;
  std::vector<std::vector<MetricsRow>> per_seed;
  for (auto seed : cfg.seeds()) {
    const auto f = seed_file(dir, seed);
    if (!fs::is_regular_file(f)) {
      out.missing.push_back(label.empty() ? f.filename().string() : (fs::path(label) / f.filename()).string());
      continue;
    }
    per_seed.push_back(read_metrics(f));
  }
  out.rows.push_back(summarize_rows(name, cfg, per_seed));
}

}  // namespace

SeedSummary summarize_seed(const std::vector<MetricsRow>& rows, const ExperimentConfig& cfg) {
  SeedSummary s;
  if (!rows.empty()) s.seed = rows.front().seed;
  auto pick = rows_of_kind(rows, RowKind::Eval);
  if (pick.empty()) pick = rows_of_kind(rows, RowKind::Train);
  s.milestone_episode.assign(cfg.milestones.size(), std::nullopt);
  double window_sum = 0.0;
  for (std::size_t i = 0; i < pick.size(); ++i) {
    window_sum += metric_value(pick[i], cfg.milestone_metric);
    if (i >= cfg.milestone_window) window_sum -= metric_value(pick[i - cfg.milestone_window], cfg.milestone_metric);
    const double mean = window_sum / static_cast<double>(std::min(i + 1, cfg.milestone_window));
    for (std::size_t m = 0; m < cfg.milestones.size(); ++m) {
      if (!s.milestone_episode[m] && mean >= cfg.milestones[m]) s.milestone_episode[m] = pick[i].episode;
    }
  }
  const auto f = final_stats(rows, cfg.final_window);
  s.final_success = f.success_rate;
  s.final_return = f.mean_return;
  return s;
}

SummaryRow summarize_rows(const std::string& label, const ExperimentConfig& cfg,
                          const std::vector<std::vector<MetricsRow>>& per_seed) {
  SummaryRow row;
  row.label = label;
  row.method = cfg.method;
  row.env = cfg.env;
  row.milestones = cfg.milestones;
  for (const auto& rows : per_seed) row.seeds.push_back(summarize_seed(rows, cfg));
  for (std::size_t m = 0; m < cfg.milestones.size(); ++m) {
    std::vector<double> eps;
    for (const auto& s : row.seeds) {
      if (s.milestone_episode[m]) eps.push_back(static_cast<double>(*s.milestone_episode[m]));
    }
    row.reached.push_back(eps.size());
    const auto [mean, sd] = mean_std(eps);
    row.milestone_mean.push_back(eps.empty() ? std::nullopt : std::optional<double>(mean));
    row.milestone_std.push_back(sd);
  }
  std::vector<double> succ, ret;
  for (const auto& s : row.seeds) {
    succ.push_back(s.final_success);
    ret.push_back(s.final_return);
  }
  std::tie(row.final_success_mean, row.final_success_std) = mean_std(succ);
  std::tie(row.final_return_mean, row.final_return_std) = mean_std(ret);
  return row;
}

Summary summarize(const fs::path& dir) {
  Summary out;
  if (!fs::is_directory(dir)) throw ParseError("no such directory " + dir.string());
  if (fs::exists(dir / "config.resolved.txt")) {
    summarize_experiment(dir, "", out);
    return out;
  }
  if (fs::exists(dir / "sweep.csv")) {
    const auto t = read_csv(dir / "sweep.csv");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const std::string cell = "cell_" + t.rows[i].at(0);
      if (!fs::exists(dir / cell / "config.resolved.txt")) {
        out.missing.push_back(cell);
        continue;
      }
      summarize_experiment(dir / cell, cell, out);
    }
    return out;
  }
  std::vector<fs::path> subdirs;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory() && fs::exists(e.path() / "config.resolved.txt")) subdirs.push_back(e.path());
  }
  std::sort(subdirs.begin(), subdirs.end());
  if (subdirs.empty()) throw ParseError(dir.string() + " holds no experiment (config.resolved.txt not found)");
  for (const auto& d : subdirs) summarize_experiment(d, d.filename().string(), out);
  return out;
}

std::string summary_csv(const Summary& s) {
  std::string text = "experiment,method,env,seeds,milestone,reached,episodes_mean,episodes_std,final_success_mean,"
                     "final_success_std,final_return_mean,final_return_std\n";
  for (const auto& r : s.rows) {
    const std::string tail = format_double(r.final_success_mean) + "," + format_double(r.final_success_std) + "," +
                             format_double(r.final_return_mean) + "," + format_double(r.final_return_std);
    const std::string head = r.label + "," + r.method + "," + r.env + "," + std::to_string(r.seeds.size());
    if (r.milestones.empty()) text += head + ",,,,," + tail + "\n";
    for (std::size_t m = 0; m < r.milestones.size(); ++m) {
      text += head + "," + format_double(r.milestones[m]) + "," + std::to_string(r.reached[m]) + "," +
              (r.milestone_mean[m] ? format_double(*r.milestone_mean[m]) : "x") + "," +
              (r.milestone_mean[m] ? format_double(r.milestone_std[m]) : "x") + "," + tail + "\n";
    }
  }
  return text;
}

std::string summary_table(const Summary& s) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"experiment", "method", "env", "seeds"};
  std::vector<double> all_ms;
  for (const auto& r : s.rows)
    for (double m : r.milestones)
      if (std::find(all_ms.begin(), all_ms.end(), m) == all_ms.end()) all_ms.push_back(m);
  for (double m : all_ms) header.push_back("to " + format_double(m));
  header.push_back("final success");
  header.push_back("final return");
  cells.push_back(header);
  for (const auto& r : s.rows) {
    std::vector<std::string> line{r.label, r.method, r.env, std::to_string(r.seeds.size())};
    for (double m : all_ms) {
      const auto it = std::find(r.milestones.begin(), r.milestones.end(), m);
      if (it == r.milestones.end()) {
        line.push_back("-");
        continue;
      }
      const auto k = static_cast<std::size_t>(it - r.milestones.begin());
      if (!r.milestone_mean[k]) {
        line.push_back("x");
      } else {
        line.push_back(fixed(*r.milestone_mean[k], 1) + " (" + std::to_string(r.reached[k]) + "/" +
                       std::to_string(r.seeds.size()) + ")");
      }
    }
    line.push_back(fixed(r.final_success_mean, 2) + " +- " + fixed(r.final_success_std, 2));
    line.push_back(fixed(r.final_return_mean, 1) + " +- " + fixed(r.final_return_std, 1));
    cells.push_back(line);
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  std::string text;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t c = 0; c < cells[i].size(); ++c) {
      text += cells[i][c] + std::string(width[c] - cells[i][c].size(), ' ');
      text += c + 1 < cells[i].size() ? "  " : "";
    }
    text += "\n";
    if (i == 0) {
      for (std::size_t c = 0; c < width.size(); ++c) text += std::string(width[c], '-') + (c + 1 < width.size() ? "  " : "");
      text += "\n";
    }
  }
  if (!s.missing.empty()) {
    text += "\nmissing:\n";
    for (const auto& m : s.missing) text += "  " + m + "\n";
  }
  return text;
}

void write_summary(const fs::path& dir, const Summary& s) {
  write_text(dir / "summary.csv", summary_csv(s));
  write_text(dir / "summary.txt", summary_table(s));
}

}  // namespace qxlab::harness
