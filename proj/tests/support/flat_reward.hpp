#pragma once

// Constant-reward toy MDP used by the intrinsic tests and the acceptance run.
// One-dimensional state, s' = s, r = -1 everywhere, a in [-1, 1]. Twin Q nets are fit
// by TD3-style bootstrapping on states drawn from [-0.5, 0.5] and r_x is then probed on
// and away from that support.

#include <array>
#include <cmath>
#include <numeric>

#include "qxlab/intrinsic/td_error.hpp"
#include "qxlab/policy/cem.hpp"
#include "qxlab/policy/exploration.hpp"

namespace qxlab::testing {

struct FlatRewardConfig {
  double reward = -1.0;
  double gamma = 0.9;
  double support_half_width = 0.5;
  double probe_offset = 2.0;  // probes start this many support widths beyond the edge
  std::size_t dataset = 256;
  std::size_t batch = 128;
  std::size_t hidden = 64;
  std::size_t max_steps = 20000;
  double converged_td = 2e-3;  // mean |delta| on the support
  double tau = 0.05;
  std::uint64_t seed = 1;
};

struct FlatRewardResult {
  std::size_t steps = 0;
  double on_support = 0.0;
  double off_support = 0.0;
};

inline FlatRewardResult run_flat_reward(const FlatRewardConfig& cfg) {
  using nn::Tensor;
  Rng rng(cfg.seed);
  std::array<nn::MlpNet, 2> online{nn::MlpNet({2, cfg.hidden, cfg.hidden, 1}, {}, rng),
                                   nn::MlpNet({2, cfg.hidden, cfg.hidden, 1}, {}, rng)};
  std::array<nn::TargetNet, 2> target{nn::TargetNet(online[0]), nn::TargetNet(online[1])};
  const auto bounds = policy::ActionBounds::symmetric(1);
  policy::CemConfig cem{.iterations = 2, .num_samples = 16, .top_k = 4, .stochastic_final = false};

  auto make_batch = [&](double lo, double hi, std::size_t n) {
    replay::TransitionBatch b;
    b.s = Tensor(n, 1);
    b.a = Tensor(n, 1);
    std::uniform_real_distribution<double> us(lo, hi), ua(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      b.s(i, 0) = us(rng);
      b.a(i, 0) = ua(rng);
    }
    b.s_next = b.s;
    b.r.assign(n, cfg.reward);
    b.end.assign(n, replay::EndKind::NotDone);
    b.source.assign(n, replay::Source::Self);
    return b;
  };
  const double w = cfg.support_half_width;
  const auto data = make_batch(-w, w, cfg.dataset);

  auto q1 = [&online](const Tensor& s, const Tensor& a) {
    const Tensor v = online[0].forward(nn::concat_cols(s, a));
    return std::vector<double>(v.values().begin(), v.values().end());
  };
  const intrinsic::TdErrorSpec spec{.gamma = cfg.gamma};
  auto mean_rx = [&](const replay::TransitionBatch& b) {
    Rng cem_rng(99);
    const Tensor next = policy::cem_select_batch(q1, b.s_next, cem, bounds, cem_rng);
    const auto rx = intrinsic::compute_rx(online, target, b, next, spec);
    return std::accumulate(rx.begin(), rx.end(), 0.0) / static_cast<double>(rx.size());
  };

  FlatRewardResult out;
  std::uniform_int_distribution<std::size_t> pick(0, cfg.dataset - 1);
  for (; out.steps < cfg.max_steps; ++out.steps) {
    if (out.steps % 250 == 0 && mean_rx(data) < cfg.converged_td) break;
    std::vector<std::size_t> idx(cfg.batch);
    for (auto& i : idx) i = pick(rng);
    const Tensor s = nn::gather_rows(data.s, idx), a = nn::gather_rows(data.a, idx);
    Tensor next = policy::cem_select_batch(q1, s, cem, bounds, rng);
    policy::smooth_batch(next, 0.2, 0.5, bounds, rng);
    const auto next_v = intrinsic::min_target_value(target, s, next);
    Tensor y(cfg.batch, 1);
    for (std::size_t i = 0; i < cfg.batch; ++i) y(i, 0) = cfg.reward + cfg.gamma * next_v[i];
    const Tensor x = nn::concat_cols(s, a);
    for (auto& net : online) nn::regression_step(net, x, y);
    for (std::size_t t = 0; t < 2; ++t) target[t].polyak_update(online[t], cfg.tau);
  }

  out.on_support = mean_rx(data);
  const double lo = w + cfg.probe_offset * 2.0 * w;
  auto right = make_batch(lo, lo + 2.0 * w, cfg.dataset);
  auto left = make_batch(-lo - 2.0 * w, -lo, cfg.dataset);
  out.off_support = 0.5 * (mean_rx(right) + mean_rx(left));
  return out;
}

}  // namespace qxlab::testing
