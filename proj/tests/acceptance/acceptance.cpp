// Acceptance run: one PASS/FAIL line per criterion. Experiment budgets and seeds are
// fixed here and never adjusted after looking at results.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qxlab/harness/config.hpp"
#include "qxlab/harness/csv.hpp"
#include "qxlab/harness/experiment.hpp"
#include "qxlab/harness/sweep.hpp"
#include "qxlab/intrinsic/dora.hpp"
#include "qxlab/intrinsic/rnd.hpp"
#include "qxlab/intrinsic/td_error.hpp"
#include "qxlab/nn/mlp.hpp"
#include "qxlab/nn/zero_fit.hpp"
#include "qxlab/replay/replay_buffer.hpp"
#include "support/flat_reward.hpp"

using namespace qxlab;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeedBase = 1001;
constexpr std::size_t kSeeds = 5;
constexpr std::size_t kEpisodes = 400;
constexpr std::size_t kFinalWindow = 50;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os << std::setprecision(prec) << std::fixed << v;
  return os.str();
}

std::string fmt_list(const std::vector<double>& v, int prec = 2) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + fmt(v[i], prec);
  return out + "]";
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_stdev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

struct Verdict {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
};

// ---------------------------------------------------------------------------
// Experiment groups

struct SeedRun {
  std::uint64_t seed = 0;
  double success = 0.0;   // eval success over the final window
  double ret = 0.0;       // eval return over the final window
  double qx_position = 0.0;  // mean over training of the Q_x episode mean position
  double wall_s = 0.0;
};

struct Group {
  std::string name;
  harness::ExperimentConfig cfg;
  std::vector<SeedRun> runs;
  std::size_t failures = 0;

  std::vector<double> column(double SeedRun::*field) const {
    std::vector<double> out;
    for (const auto& r : runs) out.push_back(r.*field);
    return out;
  }
  double mean_success() const { return mean_of(column(&SeedRun::success)); }
  double mean_return() const { return mean_of(column(&SeedRun::ret)); }
  double max_wall() const {
    const auto w = column(&SeedRun::wall_s);
    return w.empty() ? 0.0 : *std::max_element(w.begin(), w.end());
  }
};

harness::ExperimentConfig group_config(const fs::path& root, const std::string& name, const std::string& method,
                                       const std::string& env) {
  harness::ExperimentConfig cfg;
  cfg.method = method;
  cfg.env = env;
  cfg.n_seeds = kSeeds;
  cfg.seed_base = kSeedBase;
  cfg.n_episodes = kEpisodes;
  cfg.eval_every = 1;
  cfg.eval_episodes = 1;
  cfg.final_window = kFinalWindow;
  cfg.out_dir = root / name;
  return cfg;
}

SeedRun summarize_seed(std::uint64_t seed, const std::vector<harness::MetricsRow>& rows, double wall_s) {
  SeedRun out;
  out.seed = seed;
  const auto fin = harness::final_stats(rows, kFinalWindow);
  out.success = fin.success_rate;
  out.ret = fin.mean_return;
  std::vector<double> pos;
  for (const auto& r : harness::rows_of_kind(rows, harness::RowKind::Train)) pos.push_back(r.mean_position_qx);
  out.qx_position = mean_of(pos);
  out.wall_s = wall_s;
  return out;
}

class Lab {
 public:
  Lab(fs::path root, bool reuse) : root_(std::move(root)), reuse_(reuse) {}

  const fs::path& root() const { return root_; }

  const Group& get(const std::string& name, const std::string& method, const std::string& env,
                   const std::function<void(harness::ExperimentConfig&)>& tweak = {}) {
    if (auto it = groups_.find(name); it != groups_.end()) return it->second;
    Group g;
    g.name = name;
    g.cfg = group_config(root_, name, method, env);
    if (tweak) tweak(g.cfg);
    if (!(reuse_ && load(g))) run(g);
    return groups_.emplace(name, std::move(g)).first->second;
  }

 private:
  bool load(Group& g) {
    const fs::path dir = g.cfg.out_dir;
    const fs::path resolved = dir / "config.resolved.txt";
    if (!fs::is_regular_file(resolved)) return false;
    const auto stored = harness::parse_resolved(harness::read_text(resolved));
    if (harness::resolved_text(stored) != harness::resolved_text(g.cfg)) return false;
    for (auto seed : g.cfg.seeds()) {
      if (!fs::is_regular_file(harness::seed_file(dir, seed))) return false;
    }
    for (auto seed : g.cfg.seeds()) {
      const auto rows = harness::read_metrics(harness::seed_file(dir, seed));
      const auto timing = harness::read_csv(dir / ("timing_seed_" + std::to_string(seed) + ".csv"));
      double wall_ms = 0.0;
      for (std::size_t i = 0; i < timing.rows.size(); ++i) wall_ms += timing.number(i, timing.column("wall_ms"));
      g.runs.push_back(summarize_seed(seed, rows, wall_ms / 1000.0));
    }
    std::cerr << "  [" << g.name << "] reused " << dir.string() << "\n";
    return true;
  }

  void run(Group& g) {
    std::cerr << "  [" << g.name << "] " << g.cfg.method << " on " << g.cfg.env << " ("
              << g.cfg.n_seeds << " seeds x " << g.cfg.n_episodes << " episodes)\n";
    harness::RunOptions opts;
    opts.checkpoints = false;
    const auto result = harness::run_experiment(g.cfg, opts);
    g.failures = result.failures();
    for (const auto& s : result.seeds) {
      if (!s.ok) {
        std::cerr << "  [" << g.name << "] seed " << s.seed << " failed: " << s.error << "\n";
        continue;
      }
      const double wall_ms = std::accumulate(s.wall_ms.begin(), s.wall_ms.end(), 0.0);
      g.runs.push_back(summarize_seed(s.seed, s.rows, wall_ms / 1000.0));
      std::cerr << "  [" << g.name << "] seed " << s.seed << " success " << fmt(g.runs.back().success, 2)
                << " return " << fmt(g.runs.back().ret, 1) << " (" << fmt(wall_ms / 1000.0, 0) << " s)\n";
    }
  }

  fs::path root_;
  bool reuse_;
  std::map<std::string, Group> groups_;
};

// ---------------------------------------------------------------------------
// Property criteria

nn::Tensor random_tensor(std::size_t r, std::size_t c, Rng& rng) {
  nn::Tensor t(r, c);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : t.values()) v = u(rng);
  return t;
}

double weighted_output(const nn::MlpNet& net, const nn::Tensor& x, const nn::Tensor& up) {
  const nn::Tensor y = net.forward(x);
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += y.values()[i] * up.values()[i];
  return s;
}

Verdict criterion_1() {
  Verdict v{1, "numerical core", false, {}};
  const auto t0 = Clock::now();
  Rng rng(7001);
  std::uniform_int_distribution<std::size_t> dim(1, 16), depth(1, 3);
  const double h = 1e-5;
  double worst = 0.0;
  std::size_t nets = 0, checked = 0;
  for (; nets < 25; ++nets) {
    std::vector<std::size_t> dims{dim(rng)};
    for (std::size_t l = 0, d = depth(rng); l < d; ++l) dims.push_back(dim(rng));
    dims.push_back(dim(rng));
    nn::MlpNet net(dims, nn::InitScheme{}, rng);
    const auto x = random_tensor(6, dims.front(), rng);
    const auto up = random_tensor(6, dims.back(), rng);
    net.forward_train(x);
    const auto g = net.backward(up);
    auto blocks = net.parameter_blocks();
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto& gb = (b % 2 == 0) ? g.weights[b / 2] : g.biases[b / 2];
      for (std::size_t i = 0; i < blocks[b].size(); ++i) {
        const double orig = blocks[b][i];
        blocks[b][i] = orig + h;
        const double fp = weighted_output(net, x, up);
        blocks[b][i] = orig - h;
        const double fm = weighted_output(net, x, up);
        blocks[b][i] = orig;
        const double numeric = (fp - fm) / (2.0 * h);
        const double analytic = gb.values()[i];
        const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-6});
        worst = std::max(worst, std::abs(numeric - analytic) / denom);
        ++checked;
      }
    }
  }
  const bool grad_ok = worst <= 1e-4 && nets >= 20;

  // First Adam step from zero moments: p -= lr * g / (|g| + eps), to rounding.
  double adam_worst = 0.0;
  {
    const nn::AdamConfig adam{};
    nn::MlpNet net({5, 9, 3}, nn::InitScheme{}, rng, adam);
    const nn::MlpNet before = net;
    nn::Gradients g;
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
      g.weights.push_back(random_tensor(net.weights()[l].rows(), net.weights()[l].cols(), rng));
      g.biases.push_back(random_tensor(1, net.biases()[l].cols(), rng));
    }
    net.adam_step(g);
    const auto after = net.parameter_blocks();
    const auto start = before.parameter_blocks();
    for (std::size_t b = 0; b < after.size(); ++b) {
      const auto& gb = (b % 2 == 0) ? g.weights[b / 2] : g.biases[b / 2];
      for (std::size_t i = 0; i < after[b].size(); ++i) {
        const double gi = gb.values()[i];
        const double expect = -adam.learning_rate * gi / (std::abs(gi) + adam.epsilon);
        const double moved = after[b][i] - start[b][i];
        adam_worst = std::max(adam_worst, std::abs(moved - expect) / adam.learning_rate);
      }
    }
  }
  const bool adam_ok = adam_worst <= 1e-12;

  bool polyak_ok = true;
  for (int trial = 0; trial < 5; ++trial) {
    nn::MlpNet online({4, 16, 16, 2}, nn::InitScheme{}, rng);
    nn::MlpNet other({4, 16, 16, 2}, nn::InitScheme{}, rng);
    nn::TargetNet t(other);
    t.polyak_update(online, 0.0);
    polyak_ok = polyak_ok && t.net().same_parameters(other);
    t.polyak_update(online, 1.0);
    polyak_ok = polyak_ok && t.net().same_parameters(online);
  }

  const double secs = seconds_since(t0);
  v.pass = grad_ok && adam_ok && polyak_ok && secs < 60.0;
  v.detail = std::to_string(nets) + " nets, " + std::to_string(checked) + " params, max rel err " +
             fmt(worst * 1e6, 3) + "e-6; adam first step dev " + fmt(adam_worst * 1e15, 2) + "e-15 lr; polyak " +
             (polyak_ok ? "exact" : "MISMATCH") + "; " + fmt(secs, 1) + " s";
  return v;
}

Verdict criterion_2(const fs::path& root) {
  Verdict v{2, "zero-fit demo", false, {}};
  const auto t0 = Clock::now();
  nn::ZeroFitConfig cfg;  // three hidden layers of 256
  cfg.n_nets = 12;
  cfg.seed = 2002;
  const auto res = nn::zero_fit_demo(cfg);
  nn::write_zero_fit_csv(res, root / "zero_fit");
  const double secs = seconds_since(t0);
  double worst_mse = 0.0;
  for (const auto& c : res.curves) worst_mse = std::max(worst_mse, c.final_mse);
  const double ratio = res.mean_outside_max / std::max(res.mean_inside_abs, 1e-300);
  v.pass = res.curves.size() >= 10 && worst_mse < 1e-7 && res.mean_outside_max > 10.0 * res.mean_inside_abs &&
           secs < 600.0;
  v.detail = std::to_string(res.curves.size()) + "/" + std::to_string(cfg.n_nets) + " nets converged (worst mse " +
             fmt(worst_mse * 1e8, 2) + "e-8); outside max " + fmt(res.mean_outside_max, 4) + " vs support " +
             fmt(res.mean_inside_abs, 6) + " (x" + fmt(ratio, 1) + "); " + fmt(secs, 1) + " s";
  return v;
}

replay::Transition numbered(double k) {
  return replay::Transition{{k, -k}, {k / 10.0}, k, {k + 1.0, -k - 1.0}, replay::EndKind::NotDone};
}

Verdict criterion_3() {
  Verdict v{3, "replay and batch exactness", false, {}};
  replay::ReplayBuffer q_buf(500, 2, 1), qx_buf(500, 2, 1);
  for (int k = 0; k < 200; ++k) {
    q_buf.push(numbered(k));
    qx_buf.push(numbered(10000 + k));
  }
  // self fraction of the Q batch, then of the Q_x batch
  const std::vector<std::pair<double, double>> cells{{0.0, 1.0}, {0.25, 0.75}, {0.5, 0.5}, {0.75, 0.25}, {0.75, 0.75}};
  Rng rng(3003);
  bool exact = true;
  std::size_t batches = 0;
  for (std::size_t b : {128u, 100u, 33u}) {
    for (auto [rq, rqx] : cells) {
      for (int rep = 0; rep < 20; ++rep) {
        const auto bq = replay::sample_mixed(q_buf, qx_buf, replay::MixedBatchSpec{b, rq}, rng);
        const auto bx = replay::sample_mixed(qx_buf, q_buf, replay::MixedBatchSpec{b, rqx}, rng);
        if (!bq || !bx) {
          exact = false;
          continue;
        }
        std::size_t q_self = 0, qx_self = 0;
        for (std::size_t i = 0; i < b; ++i) {
          const bool q_from_q = bq->r[i] < 10000.0;
          const bool x_from_x = bx->r[i] >= 10000.0;
          exact = exact && q_from_q == (bq->source[i] == replay::Source::Self);
          exact = exact && x_from_x == (bx->source[i] == replay::Source::Self);
          q_self += q_from_q;
          qx_self += x_from_x;
        }
        exact = exact && bq->size() == b && bx->size() == b;
        exact = exact && q_self == static_cast<std::size_t>(std::floor(b * rq));
        exact = exact && qx_self == static_cast<std::size_t>(std::floor(b * rqx));
        batches += 2;
      }
    }
  }

  // chi-square over 10 stored items, 1e5 draws; 27.88 is the 0.999 quantile at 9 dof
  replay::ReplayBuffer buf(10, 2, 1);
  for (int k = 0; k < 10; ++k) buf.push(numbered(k));
  std::vector<double> count(10, 0.0);
  const int draws = 100000;
  for (int i = 0; i < draws / 100; ++i) {
    const auto b = replay::sample_uniform(buf, 100, rng);
    for (double r : b->r) count[static_cast<std::size_t>(r)] += 1.0;
  }
  double chi2 = 0.0;
  for (double c : count) chi2 += (c - draws / 10.0) * (c - draws / 10.0) / (draws / 10.0);
  const bool uniform = chi2 < 27.88;

  v.pass = exact && uniform;
  v.detail = std::to_string(batches) + " mixed batches " + (exact ? "exact" : "NOT exact") + "; chi2 " + fmt(chi2, 2) +
             " (9 dof, limit 27.88)";
  return v;
}

Verdict criterion_4() {
  Verdict v{4, "intrinsic-reward identities", false, {}};
  const auto t0 = Clock::now();
  Rng rng(4004);
  bool nonneg = true, abs_ok = true;
  std::size_t samples = 0;
  for (int trial = 0; trial < 30; ++trial) {
    std::array<nn::MlpNet, 2> online{nn::MlpNet({3, 32, 32, 1}, {}, rng), nn::MlpNet({3, 32, 32, 1}, {}, rng)};
    std::array<nn::TargetNet, 2> target{nn::TargetNet(nn::MlpNet({3, 32, 32, 1}, {}, rng)),
                                        nn::TargetNet(nn::MlpNet({3, 32, 32, 1}, {}, rng))};
    replay::TransitionBatch b;
    const std::size_t n = 128;
    b.s = random_tensor(n, 2, rng);
    b.a = random_tensor(n, 1, rng);
    b.s_next = random_tensor(n, 2, rng);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < n; ++i) {
      b.r.push_back(coin(rng) ? -1.0 : 0.0);
      b.end.push_back(i % 5 == 0 ? replay::EndKind::Terminal
                                 : (i % 5 == 1 ? replay::EndKind::Truncated : replay::EndKind::NotDone));
      b.source.push_back(replay::Source::Self);
    }
    const auto next = random_tensor(n, 1, rng);
    for (double r : intrinsic::compute_rx(online, target, b, next, {})) nonneg = nonneg && r >= 0.0;
    intrinsic::TdErrorSpec u{.twin_reduction = intrinsic::TwinReduction::FirstTwin};
    intrinsic::TdErrorSpec s = u;
    s.signed_error = true;
    const auto ru = intrinsic::compute_rx(online, target, b, next, u);
    const auto rs = intrinsic::compute_rx(online, target, b, next, s);
    for (std::size_t i = 0; i < n; ++i) abs_ok = abs_ok && ru[i] == std::abs(rs[i]);
    samples += n;
  }

  const std::vector<double> r{-1.0, 0.0, -1.0};
  const std::vector<replay::EndKind> e{replay::EndKind::Terminal, replay::EndKind::Terminal,
                                       replay::EndKind::Truncated};
  const std::vector<double> next_v{37.0, -12.5, 10.0};
  const auto y = intrinsic::td_targets(r, e, next_v, 0.5);
  const bool terminal_ok = y[0] == -1.0 && y[1] == 0.0 && y[2] == 4.0;

  intrinsic::Rnd rnd(2, {64, 64}, {}, {}, rng);
  rnd.predictor() = rnd.target();
  bool rnd_zero = true;
  for (double x : rnd.intrinsic(random_tensor(256, 2, rng))) rnd_zero = rnd_zero && x == 0.0;

  const intrinsic::DoraSpec dora{};
  bool dora_mono = true;
  double prev = intrinsic::dora_bonus(1e-9, dora);
  for (int i = 1; i <= 10000; ++i) {
    const double ev = 1e-9 + i * (1.0 - 2e-9) / 10000.0;
    const double bonus = intrinsic::dora_bonus(ev, dora);
    dora_mono = dora_mono && bonus > prev;
    prev = bonus;
  }

  const double secs = seconds_since(t0);
  v.pass = nonneg && abs_ok && terminal_ok && rnd_zero && dora_mono && secs < 60.0;
  v.detail = std::string("r_x>=0 ") + (nonneg ? "ok" : "FAIL") + ", unsigned==|signed| " + (abs_ok ? "ok" : "FAIL") +
             " (" + std::to_string(samples) + " rows), terminal drop " + (terminal_ok ? "ok" : "FAIL") +
             ", rnd copy zero " + (rnd_zero ? "ok" : "FAIL") + ", dora monotone " + (dora_mono ? "ok" : "FAIL") +
             "; " + fmt(secs, 1) + " s";
  return v;
}

Verdict criterion_5() {
  Verdict v{5, "flat-reward fallback", false, {}};
  const auto t0 = Clock::now();
  testing::FlatRewardConfig cfg;
  cfg.seed = 5005;
  const auto res = testing::run_flat_reward(cfg);
  const double secs = seconds_since(t0);
  const bool converged = res.steps < cfg.max_steps;
  v.pass = converged && res.off_support >= 10.0 * res.on_support && secs < 300.0;
  v.detail = "on-support r_x " + fmt(res.on_support, 5) + ", off-support " + fmt(res.off_support, 4) + " (x" +
             fmt(res.off_support / std::max(res.on_support, 1e-300), 1) + ") after " + std::to_string(res.steps) +
             " steps" + (converged ? "" : " (NOT converged)") + "; " + fmt(secs, 1) + " s";
  return v;
}

// ---------------------------------------------------------------------------
// Experiment criteria

std::size_t count_if_seed(const Group& g, const std::function<bool(const SeedRun&)>& pred) {
  return static_cast<std::size_t>(std::count_if(g.runs.begin(), g.runs.end(), pred));
}

std::string seeds_ok(const Group& g) {
  return g.failures == 0 && g.runs.size() == kSeeds ? "" : " (" + std::to_string(g.failures) + " seeds failed)";
}

const Group& qx_control(Lab& lab) { return lab.get("c6_qxplore", "qxplore", "sparse-loco"); }

Verdict criterion_6(Lab& lab) {
  Verdict v{6, "sparse-loco separation vs epsilon-greedy", false, {}};
  const auto& qx = qx_control(lab);
  const auto& eps = lab.get("c6_epsgreedy", "epsgreedy", "sparse-loco");
  const auto qx_hits = count_if_seed(qx, [](const SeedRun& r) { return r.success >= 0.8; });
  const auto eps_low = count_if_seed(eps, [](const SeedRun& r) { return r.success <= 0.2; });
  const double wall = std::max(qx.max_wall(), eps.max_wall());
  v.pass = qx.runs.size() == kSeeds && eps.runs.size() == kSeeds && qx_hits >= 4 && eps_low >= 4 && wall <= 900.0;
  v.detail = "qxplore success " + fmt_list(qx.column(&SeedRun::success)) + " -> " + std::to_string(qx_hits) +
             "/5 >= 0.8; epsgreedy " + fmt_list(eps.column(&SeedRun::success)) + " -> " + std::to_string(eps_low) +
             "/5 <= 0.2; slowest seed " + fmt(wall, 0) + " s" + seeds_ok(qx) + seeds_ok(eps);
  return v;
}

Verdict criterion_7(Lab& lab) {
  Verdict v{7, "local-max escape vs RND", false, {}};
  const auto& qx = lab.get("c7_qxplore", "qxplore", "local-max");
  const auto& rnd = lab.get("c7_rnd", "rnd", "local-max");
  const auto qx_pos = count_if_seed(qx, [](const SeedRun& r) { return r.ret > 0.0; });
  const auto rnd_pos = count_if_seed(rnd, [](const SeedRun& r) { return r.ret > 0.0; });
  v.pass = qx.runs.size() == kSeeds && rnd.runs.size() == kSeeds && qx_pos >= 3 && rnd_pos <= 1;
  v.detail = "qxplore final return " + fmt_list(qx.column(&SeedRun::ret), 1) + " -> " + std::to_string(qx_pos) +
             "/5 positive; rnd " + fmt_list(rnd.column(&SeedRun::ret), 1) + " -> " + std::to_string(rnd_pos) +
             "/5 positive" + seeds_ok(qx) + seeds_ok(rnd);
  return v;
}

Verdict criterion_8(Lab& lab) {
  Verdict v{8, "goal-push separation vs RND", false, {}};
  const auto& qx = lab.get("c8_qxplore", "qxplore", "goal-push");
  const auto& rnd = lab.get("c8_rnd", "rnd", "goal-push");
  const double gap = qx.mean_success() - rnd.mean_success();
  v.pass = qx.runs.size() == kSeeds && rnd.runs.size() == kSeeds && gap >= 0.3;
  v.detail = "qxplore success " + fmt_list(qx.column(&SeedRun::success)) + " mean " + fmt(qx.mean_success()) +
             "; rnd " + fmt_list(rnd.column(&SeedRun::success)) + " mean " + fmt(rnd.mean_success()) + "; gap " +
             fmt(gap) + " (need >= 0.3)" + seeds_ok(qx) + seeds_ok(rnd);
  return v;
}

Verdict criterion_9(Lab& lab) {
  Verdict v{9, "noisy-TV robustness", false, {}};
  const auto& clean = qx_control(lab);
  const auto& noisy = lab.get("c9_qxplore_noisytv", "qxplore", "sparse-loco+noisytv(1)");
  const double d_success = std::abs(noisy.mean_success() - clean.mean_success());
  const auto pc = clean.column(&SeedRun::qx_position), pn = noisy.column(&SeedRun::qx_position);
  const double pooled = std::sqrt(0.5 * (sample_stdev(pc) * sample_stdev(pc) + sample_stdev(pn) * sample_stdev(pn)));
  const double shift = mean_of(pn) - mean_of(pc);
  v.pass = noisy.runs.size() == kSeeds && clean.runs.size() == kSeeds && d_success <= 0.15 && shift >= -pooled;
  v.detail = "success noisy " + fmt(noisy.mean_success()) + " vs clean " + fmt(clean.mean_success()) + " (|diff| " +
             fmt(d_success) + " <= 0.15); Q_x mean position noisy " + fmt(mean_of(pn)) + " vs clean " +
             fmt(mean_of(pc)) + ", shift " + fmt(shift) + " vs pooled stdev " + fmt(pooled) + seeds_ok(noisy);
  return v;
}

Verdict criterion_10(Lab& lab) {
  Verdict v{10, "ablation directionality", false, {}};
  const auto& full = qx_control(lab);
  const auto& one = lab.get("c10_1step", "qxplore-1step", "sparse-loco");
  const auto& value = lab.get("c10_value", "qxplore-value", "sparse-loco");
  const auto& sgn = lab.get("c10_signed", "qxplore-signed", "sparse-loco");
  const auto& qxrnd = lab.get("c10_qxrnd", "qxplore-rnd", "sparse-loco");
  const bool complete = one.runs.size() == kSeeds && value.runs.size() == kSeeds && sgn.runs.size() == kSeeds &&
                        qxrnd.runs.size() == kSeeds && full.runs.size() == kSeeds;
  const bool one_ok = count_if_seed(one, [](const SeedRun& r) { return r.success < 0.2; }) == one.runs.size();
  const auto vr = value.column(&SeedRun::ret);
  const bool value_finite = std::all_of(vr.begin(), vr.end(), [](double x) { return std::isfinite(x); });
  const bool value_ok = value_finite && value.mean_return() < full.mean_return();
  const bool signed_ok = sgn.mean_success() >= full.mean_success() - 0.5 && sgn.mean_success() < full.mean_success();
  const bool qxrnd_ok = qxrnd.mean_success() < 0.2;
  v.pass = complete && one_ok && value_ok && signed_ok && qxrnd_ok;
  v.detail = "1step success " + fmt_list(one.column(&SeedRun::success)) + (one_ok ? " ok" : " FAIL") +
             "; value return " + fmt(value.mean_return(), 1) + " vs full " + fmt(full.mean_return(), 1) +
             (value_ok ? " ok" : " FAIL") + "; signed success " + fmt(sgn.mean_success()) + " vs unsigned " +
             fmt(full.mean_success()) + (signed_ok ? " ok" : " FAIL") + "; qxplore-rnd success " +
             fmt(qxrnd.mean_success()) + (qxrnd_ok ? " ok" : " FAIL");
  return v;
}

Verdict criterion_11(Lab& lab) {
  Verdict v{11, "beta_Q on shifted rewards", false, {}};
  const auto& base = qx_control(lab);
  const auto& b10 = lab.get("c11_shift_beta10", "qxplore", "sparse-loco+shift(1)",
                            [](harness::ExperimentConfig& c) { c.agent.beta_q = 10.0; });
  const auto& b0 = lab.get("c11_shift_beta0", "qxplore", "sparse-loco+shift(1)",
                           [](harness::ExperimentConfig& c) { c.agent.beta_q = 0.0; });
  const double ref = base.mean_success();
  const bool recovers = b10.mean_success() >= ref - 0.15;
  const bool drops = b0.mean_success() <= ref - 0.2;
  v.pass = b10.runs.size() == kSeeds && b0.runs.size() == kSeeds && base.runs.size() == kSeeds && recovers && drops;
  v.detail = "-1/0 reference " + fmt(ref) + "; beta_Q=10 " + fmt(b10.mean_success()) +
             (recovers ? " ok" : " FAIL") + " (>= ref-0.15); beta_Q=0 " + fmt(b0.mean_success()) +
             (drops ? " ok" : " FAIL") + " (<= ref-0.2)";
  return v;
}

Verdict criterion_12(Lab& lab) {
  Verdict v{12, "determinism", false, {}};
  const auto& ref = qx_control(lab);
  harness::ExperimentConfig cfg = ref.cfg;
  cfg.n_seeds = 1;
  cfg.seed_base = kSeedBase;
  cfg.out_dir = lab.root() / "c12_rerun";
  fs::remove_all(cfg.out_dir);
  harness::RunOptions opts;
  opts.checkpoints = false;
  std::cerr << "  [c12_rerun] qxplore seed " << kSeedBase << "\n";
  const auto res = harness::run_experiment(cfg, opts);
  const auto a = harness::seed_file(ref.cfg.out_dir, kSeedBase), b = harness::seed_file(cfg.out_dir, kSeedBase);
  const bool both = res.failures() == 0 && fs::is_regular_file(a) && fs::is_regular_file(b);
  const std::string ta = both ? harness::read_text(a) : "", tb = both ? harness::read_text(b) : "";
  v.pass = both && !ta.empty() && ta == tb;
  v.detail = "seed " + std::to_string(kSeedBase) + " metrics CSV " + std::to_string(ta.size()) + " bytes, rerun " +
             (v.pass ? "byte-identical" : "DIFFERS");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qxlab acceptance run"};
  std::string out = "acceptance_runs";
  std::vector<int> only;
  bool reuse = false;
  app.add_option("--out", out, "directory for experiment outputs");
  app.add_option("--only", only, "criteria to run (default: all)")->delimiter(',')->check(CLI::Range(1, 12));
  app.add_flag("--reuse", reuse, "load finished experiment groups with an identical resolved config");
  CLI11_PARSE(app, argc, argv);

  const std::set<int> wanted = only.empty() ? std::set<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}
                                            : std::set<int>(only.begin(), only.end());
  const fs::path root = fs::absolute(out);
  fs::create_directories(root);
  Lab lab(root, reuse);

  const std::map<int, std::function<Verdict()>> criteria{
      {1, [] { return criterion_1(); }},
      {2, [&] { return criterion_2(root); }},
      {3, [] { return criterion_3(); }},
      {4, [] { return criterion_4(); }},
      {5, [] { return criterion_5(); }},
      {6, [&] { return criterion_6(lab); }},
      {7, [&] { return criterion_7(lab); }},
      {8, [&] { return criterion_8(lab); }},
      {9, [&] { return criterion_9(lab); }},
      {10, [&] { return criterion_10(lab); }},
      {11, [&] { return criterion_11(lab); }},
      {12, [&] { return criterion_12(lab); }},
  };

  std::vector<Verdict> verdicts;
  for (int id : wanted) {
    Verdict v;
    try {
      v = criteria.at(id)();
    } catch (const std::exception& e) {
      v = Verdict{id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what()};
    }
    std::cout << (v.pass ? "PASS" : "FAIL") << " C" << v.id << " " << v.title << ": " << v.detail << std::endl;
    verdicts.push_back(v);
  }

  std::size_t passed = 0;
  for (const auto& v : verdicts) passed += v.pass;
  std::cout << "acceptance: " << passed << "/" << verdicts.size() << " criteria passed" << std::endl;
  return passed == verdicts.size() ? 0 : 1;
}
