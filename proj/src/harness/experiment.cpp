#include "qxlab/harness/experiment.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>

#include "qxlab/agents/agent.hpp"
#include "qxlab/envs/registry.hpp"
#include "qxlab/errors.hpp"
#include "qxlab/harness/csv.hpp"
#include "qxlab/harness/smoothing.hpp"

namespace qxlab::harness {

std::size_t ExperimentResult::failures() const {
  std::size_t n = 0;
  for (const auto& s : seeds) n += !s.ok;
  return n;
}

std::size_t worker_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QXLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return static_cast<std::size_t>(omp_get_max_threads());
}

std::filesystem::path seed_file(const std::filesystem::path& dir, std::uint64_t seed) {
  return dir / ("seed_" + std::to_string(seed) + ".csv");
}

std::filesystem::path checkpoint_dir(const std::filesystem::path& dir, std::uint64_t seed) {
  return dir / ("ckpt_seed_" + std::to_string(seed));
}

SeedOutcome run_seed(const ExperimentConfig& cfg, std::uint64_t seed, const std::filesystem::path& ckpt) {
  SeedOutcome out;
  out.seed = seed;
  const auto method = agents::parse_method(cfg.method);
  auto env = envs::make_env(cfg.env, {cfg.resolved_episode_len()});
  auto agent = agents::make_agent(method, cfg.agent, *env, seed);
  auto eval_env = env->clone();
  Rng eval_rng = make_stream(seed, "eval");

  for (std::size_t ep = 1; ep <= cfg.n_episodes; ++ep) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = agent->run_episode();
    MetricsRow row;
    row.seed = seed;
    row.episode = ep;
    row.env_steps = s.env_steps;
    row.return_q = s.return_q;
    row.return_qx = s.return_qx;
    row.success = s.success ? 1.0 : 0.0;
    row.mean_position = s.mean_position;
    row.mean_position_qx = s.mean_position_qx;
    row.mean_rx = s.mean_rx;
    row.mean_td_abs = s.mean_td_abs;
    row.intrinsic_mean = s.intrinsic_mean;
    out.rows.push_back(row);

    if (cfg.eval_every > 0 && ep % cfg.eval_every == 0) {
      const auto ev = agents::evaluate(agent->exploit_policy(), *eval_env, cfg.eval_episodes, eval_rng);
      MetricsRow e;
      e.seed = seed;
      e.episode = ep;
      e.kind = RowKind::Eval;
      e.env_steps = s.env_steps;
      e.return_q = ev.mean_return();
      e.success = ev.success_rate();
      e.mean_position = ev.mean_position();
      out.rows.push_back(e);
    }
    out.wall_ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  if (!ckpt.empty()) {
    std::filesystem::create_directories(ckpt);
    agent->save(ckpt);
  }
  out.ok = true;
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<std::vector<MetricsRow>>& per_seed, double sigma) {
  const auto& names = metric_names();
  const std::size_t m = names.size();
  std::vector<AggregateRow> all;
  for (RowKind kind : {RowKind::Train, RowKind::Eval}) {
    std::map<std::size_t, std::vector<const MetricsRow*>> by_episode;
    for (const auto& rows : per_seed)
      for (const auto& r : rows)
        if (r.kind == kind) by_episode[r.episode].push_back(&r);
    std::vector<AggregateRow> part;
    for (const auto& [ep, rows] : by_episode) {
      AggregateRow a;
      a.kind = kind;
      a.episode = ep;
      a.n = rows.size();
      a.mean.assign(m, 0.0);
      a.stdev.assign(m, 0.0);
      const double n = static_cast<double>(rows.size());
      for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (const auto* r : rows) s += metric_value(*r, names[j]);
        const double mean = s / n;
        double ss = 0.0;
        for (const auto* r : rows) {
          const double d = metric_value(*r, names[j]) - mean;
          ss += d * d;
        }
        a.mean[j] = mean;
        a.stdev[j] = std::sqrt(ss / n);
      }
      part.push_back(std::move(a));
    }
    for (auto& a : part) {
      a.mean_smooth.assign(m, 0.0);
      a.stdev_smooth.assign(m, 0.0);
    }
    std::vector<double> col(part.size());
    for (std::size_t j = 0; j < m; ++j) {
      for (int which = 0; which < 2; ++which) {
        for (std::size_t i = 0; i < part.size(); ++i) col[i] = which == 0 ? part[i].mean[j] : part[i].stdev[j];
        const auto sm = gaussian_smooth(col, sigma);
        for (std::size_t i = 0; i < part.size(); ++i) (which == 0 ? part[i].mean_smooth : part[i].stdev_smooth)[j] = sm[i];
      }
    }
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::string text = "kind,episode,n";
  for (const auto& name : metric_names())
    text += "," + name + "_mean," + name + "_std," + name + "_mean_smooth," + name + "_std_smooth";
  text += "\n";
  for (const auto& a : rows) {
    text += std::string(a.kind == RowKind::Train ? "train" : "eval") + "," + std::to_string(a.episode) + "," +
            std::to_string(a.n);
    for (std::size_t j = 0; j < a.mean.size(); ++j) {
      text += "," + format_double(a.mean[j]) + "," + format_double(a.stdev[j]) + "," + format_double(a.mean_smooth[j]) +
              "," + format_double(a.stdev_smooth[j]);
    }
    text += "\n";
  }
  return text;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  namespace fs = std::filesystem;
  ExperimentResult result;
  result.dir = cfg.out_dir;
  fs::create_directories(cfg.out_dir);
  write_text(cfg.out_dir / "config.resolved.txt",
             resolved_text(cfg) + "# episode_len (resolved) = " + std::to_string(cfg.resolved_episode_len()) +
                 "\n# reward_scale = 1 (returns are raw per-episode sums)\n");

  const auto seeds = cfg.seeds();
  result.seeds.resize(seeds.size());
  std::vector<std::size_t> order = opts.order;
  if (order.empty()) {
    order.resize(seeds.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
  }
  if (order.size() != seeds.size()) throw ConfigError("seed order must list every seed index once");

  const auto threads = static_cast<int>(std::min(worker_threads(opts.threads), seeds.size()));
  const auto count = static_cast<long long>(order.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long long k = 0; k < count; ++k) {
    const std::size_t i = order[static_cast<std::size_t>(k)];
    const auto seed = seeds.at(i);
    SeedOutcome out;
    try {
      out = run_seed(cfg, seed, opts.checkpoints ? checkpoint_dir(cfg.out_dir, seed) : std::filesystem::path{});
      write_metrics(seed_file(cfg.out_dir, seed), out.rows);
      std::string timing = "episode,wall_ms\n";
      for (std::size_t e = 0; e < out.wall_ms.size(); ++e)
        timing += std::to_string(e + 1) + "," + format_double(out.wall_ms[e]) + "\n";
      write_text(cfg.out_dir / ("timing_seed_" + std::to_string(seed) + ".csv"), timing);
    } catch (const std::exception& e) {
      out = SeedOutcome{};
      out.seed = seed;
      out.ok = false;
      out.error = e.what();
      try {
        write_text(cfg.out_dir / ("seed_" + std::to_string(seed) + ".error"), out.error + "\n");
      } catch (...) {
      }
    }
    if (opts.progress) {
#pragma omp critical(qxlab_progress)
      opts.progress("seed " + std::to_string(seed) + (out.ok ? " done" : " failed: " + out.error));
    }
    result.seeds[i] = std::move(out);
  }

  std::vector<std::vector<MetricsRow>> ok_rows;
  for (const auto& s : result.seeds) {
    if (s.ok) ok_rows.push_back(s.rows);
  }
  write_text(cfg.out_dir / "aggregate.csv", aggregate_csv(aggregate(ok_rows, cfg.smoothing_sigma)));
  return result;
}

}  // namespace qxlab::harness

namespace qxlab::harness {

std::vector<CheckpointEval> evaluate_checkpoints(const std::filesystem::path& dir, std::size_t episodes,
                                                 std::vector<std::uint64_t>* missing) {
  if (episodes == 0) throw ConfigError("eval episodes must be >= 1");
  const auto cfg = parse_resolved(read_text(dir / "config.resolved.txt"));
  const auto method = agents::parse_method(cfg.method);
  std::vector<CheckpointEval> out;
  std::string text = "seed,episodes,mean_return,success_rate,mean_position\n";
  for (auto seed : cfg.seeds()) {
    const auto ckpt = checkpoint_dir(dir, seed);
    if (!std::filesystem::is_directory(ckpt)) {
      if (missing) missing->push_back(seed);
      continue;
    }
    auto env = envs::make_env(cfg.env, {cfg.resolved_episode_len()});
    auto agent = agents::make_agent(method, cfg.agent, *env, seed);
    agent->load(ckpt);
    Rng rng = make_stream(seed, "eval.checkpoint");
    const auto ev = agents::evaluate(agent->exploit_policy(), *env, episodes, rng);
    CheckpointEval e{seed, ev.mean_return(), ev.success_rate(), ev.mean_position()};
    out.push_back(e);
    text += std::to_string(seed) + "," + std::to_string(episodes) + "," + format_double(e.mean_return) + "," +
            format_double(e.success_rate) + "," + format_double(e.mean_position) + "\n";
  }
  write_text(dir / "eval.csv", text);
  return out;
}

}  // namespace qxlab::harness
