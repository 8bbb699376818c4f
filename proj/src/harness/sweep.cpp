#include "qxlab/harness/sweep.hpp"

#include <algorithm>

#include "qxlab/errors.hpp"
#include "qxlab/harness/csv.hpp"

namespace qxlab::harness {

std::string SweepCell::label() const {
  std::string out;
  for (std::size_t i = 0; i < settings.size(); ++i) out += (i ? ";" : "") + settings[i].first + "=" + settings[i].second;
  return out;
}

void SweepGrid::validate() const {
  if (axes.empty()) throw ConfigError("sweep grid '" + name + "' has no axes");
  for (const auto& ax : axes) {
    if (ax.keys.empty()) throw ConfigError("sweep axis without keys");
    if (ax.values.empty()) throw ConfigError("sweep axis '" + ax.keys.front() + "' has no values");
    for (const auto& v : ax.values) {
      if (v.size() != ax.keys.size()) throw ConfigError("sweep axis '" + ax.keys.front() + "' has a malformed value tuple");
    }
  }
}

std::size_t SweepGrid::cell_count() const {
  std::size_t n = axes.empty() ? 0 : 1;
  for (const auto& ax : axes) n *= ax.values.size();
  return n;
}

std::vector<SweepCell> SweepGrid::cells() const {
  validate();
  std::vector<SweepCell> out;
  const std::size_t total = cell_count();
  for (std::size_t c = 0; c < total; ++c) {
    SweepCell cell;
    cell.index = c;
    std::size_t rest = c;
    std::vector<std::size_t> pick(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
      pick[a] = rest % axes[a].values.size();
      rest /= axes[a].values.size();
    }
    for (std::size_t a = 0; a < axes.size(); ++a)
      for (std::size_t k = 0; k < axes[a].keys.size(); ++k) cell.settings.emplace_back(axes[a].keys[k], axes[a].values[pick[a]][k]);
    out.push_back(std::move(cell));
  }
  return out;
}

SweepGrid lr_grid() {
  return {"lr",
          {{{"agent.q_lr", "agent.qx_lr"},
            {{"0.01", "0.01"},
             {"0.01", "0.001"},
             {"0.001", "0.01"},
             {"0.001", "0.001"},
             {"0.001", "0.0001"},
             {"0.0001", "0.001"},
             {"0.0001", "0.0001"}}}}};
}

SweepGrid ratio_grid() {
  return {"ratio", {{{"agent.ratio_q", "agent.ratio_qx"}, {{"0", "1"}, {"0.25", "0.75"}, {"0.5", "0.5"}, {"0.75", "0.25"}}}}};
}

SweepGrid rnd_grid() {
  return {"rnd",
          {{{"agent.rnd.predictor_lr", "agent.rnd.extrinsic_weight"},
            {{"0.01", "2"}, {"0.001", "2"}, {"0.0001", "2"}, {"0.001", "0.5"}, {"0.001", "1"}, {"0.001", "4"}}}}};
}

SweepGrid named_grid(const std::string& name) {
  if (name == "lr") return lr_grid();
  if (name == "ratio") return ratio_grid();
  if (name == "rnd") return rnd_grid();
  throw ConfigError("unknown sweep grid '" + name + "' (expected lr, ratio or rnd)");
}

std::vector<std::string> grid_names() { return {"lr", "ratio", "rnd"}; }

std::string grid_method(const std::string& name) { return name == "rnd" ? "rnd" : "qxplore"; }

FinalStats final_stats(const std::vector<MetricsRow>& rows, std::size_t window) {
  auto pick = rows_of_kind(rows, RowKind::Eval);
  if (pick.empty()) pick = rows_of_kind(rows, RowKind::Train);
  FinalStats s;
  if (pick.empty()) return s;
  const std::size_t w = std::min(window, pick.size());
  for (std::size_t i = pick.size() - w; i < pick.size(); ++i) {
    s.mean_return += pick[i].return_q;
    s.success_rate += pick[i].success;
  }
  s.mean_return /= static_cast<double>(w);
  s.success_rate /= static_cast<double>(w);
  return s;
}

std::vector<LeaderboardEntry> run_sweep(const ExperimentConfig& base, const SweepGrid& grid, const RunOptions& opts) {
  const auto cells = grid.cells();
  std::vector<ExperimentConfig> cfgs;
  for (const auto& cell : cells) {
    auto cfg = base;
    for (const auto& [k, v] : cell.settings) set_field(cfg, k, v);
    cfg.out_dir = base.out_dir / ("cell_" + std::to_string(cell.index));
    cfg.validate();
    cfgs.push_back(std::move(cfg));
  }

  std::string manifest = "cell,label\n";
  for (const auto& cell : cells) manifest += std::to_string(cell.index) + "," + cell.label() + "\n";
  write_text(base.out_dir / "sweep.csv", manifest);

  std::vector<LeaderboardEntry> board;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (opts.progress) opts.progress("cell " + std::to_string(c) + ": " + cells[c].label());
    const auto res = run_experiment(cfgs[c], opts);
    LeaderboardEntry e;
    e.cell = cells[c];
    e.dir = cfgs[c].out_dir;
    std::size_t ok = 0;
    for (const auto& s : res.seeds) {
      if (!s.ok) {
        ++e.failed_seeds;
        continue;
      }
      const auto f = final_stats(s.rows, base.final_window);
      e.final_mean_return += f.mean_return;
      e.final_success += f.success_rate;
      ++ok;
    }
    if (ok) {
      e.final_mean_return /= static_cast<double>(ok);
      e.final_success /= static_cast<double>(ok);
    }
    board.push_back(std::move(e));
  }
  std::stable_sort(board.begin(), board.end(),
                   [](const auto& a, const auto& b) { return a.final_mean_return > b.final_mean_return; });

  std::string text = "rank,cell,label,final_mean_return,final_success,failed_seeds\n";
  for (std::size_t r = 0; r < board.size(); ++r) {
    const auto& e = board[r];
    text += std::to_string(r + 1) + "," + std::to_string(e.cell.index) + "," + e.cell.label() + "," +
            format_double(e.final_mean_return) + "," + format_double(e.final_success) + "," +
            std::to_string(e.failed_seeds) + "\n";
  }
  write_text(base.out_dir / "leaderboard.csv", text);
  return board;
}

}  // namespace qxlab::harness
