#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "qxlab/policy/cem.hpp"
#include "qxlab/policy/exploration.hpp"

using namespace qxlab;
using namespace qxlab::policy;

namespace {

QBatchEval quadratic(std::vector<double> target, std::vector<double> curvature) {
  return [target, curvature](const nn::Tensor&, const nn::Tensor& a) {
    std::vector<double> v(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
      double s = 0.0;
      for (std::size_t d = 0; d < a.cols(); ++d) s -= curvature[d] * (a(i, d) - target[d]) * (a(i, d) - target[d]);
      v[i] = s;
    }
    return v;
  };
}

double eval_one(const QBatchEval& q, std::span<const double> a) {
  return q(nn::Tensor(1, 1), nn::Tensor(1, a.size(), std::vector<double>(a.begin(), a.end())))[0];
}

const std::vector<double> kState{0.0};

}  // namespace

TEST_CASE("cem: finds the maximiser of a 1-D quadratic") {
  // grid-search oracle for the argmax
  const auto q = quadratic({0.3}, {1.0});
  double best_a = -1.0, best_v = -1e300;
  for (int i = 0; i <= 2000; ++i) {
    const double a = -1.0 + i * 0.001;
    const double v = eval_one(q, std::vector<double>{a});
    if (v > best_v) best_v = v, best_a = a;
  }
  REQUIRE(std::abs(best_a - 0.3) < 1e-9);

  CemConfig cfg;
  cfg.stochastic_final = false;
  const auto bounds = ActionBounds::symmetric(1);
  int hits = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(1000 + trial);
    const auto a = cem_select(q, kState, cfg, bounds, rng);
    hits += std::abs(a[0] - best_a) <= 0.05;
  }
  CHECK(hits >= 95);
}

TEST_CASE("cem: top_k == num_samples refits to the moments of all samples") {
  CemConfig cfg;
  cfg.iterations = 1;
  cfg.top_k = cfg.num_samples;
  cfg.stochastic_final = false;
  const auto bounds = ActionBounds::symmetric(2);
  Rng rng(3);
  CemTrace trace;
  const auto a = cem_select(quadratic({0.5, -0.2}, {1.0, 3.0}), kState, cfg, bounds, rng, &trace);
  for (std::size_t d = 0; d < 2; ++d) {
    double m = 0.0;
    for (std::size_t j = 0; j < cfg.num_samples; ++j) m += trace.last_samples(j, d);
    m /= static_cast<double>(cfg.num_samples);
    double var = 0.0;
    for (std::size_t j = 0; j < cfg.num_samples; ++j) var += std::pow(trace.last_samples(j, d) - m, 2);
    var /= static_cast<double>(cfg.num_samples - 1);
    CHECK(trace.fitted_mean[d] == doctest::Approx(m).epsilon(1e-12));
    CHECK(trace.fitted_std[d] == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
    CHECK(a[d] == trace.fitted_mean[d]);
  }
}

TEST_CASE("cem: constant objective stays in bounds and near the prior") {
  const QBatchEval flat = [](const nn::Tensor&, const nn::Tensor& a) { return std::vector<double>(a.rows(), 1.0); };
  CemConfig cfg;
  const auto bounds = ActionBounds::symmetric(1);
  double sum = 0.0;
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    Rng rng(t);
    const auto a = cem_select(flat, kState, cfg, bounds, rng);
    CHECK(bounds.contains(a));
    sum += a[0];
  }
  CHECK(std::abs(sum / trials) < 0.05);
}

TEST_CASE("cem: actions always inside asymmetric bounds") {
  ActionBounds bounds{{-0.5, 0.0}, {0.25, 2.0}};
  const auto q = quadratic({3.0, -3.0}, {1.0, 1.0});
  for (bool stochastic : {true, false}) {
    CemConfig cfg;
    cfg.stochastic_final = stochastic;
    Rng rng(17);
    const nn::Tensor states(32, 3);
    const nn::Tensor a = cem_select_batch(q, states, cfg, bounds, rng);
    for (std::size_t i = 0; i < a.rows(); ++i) CHECK(bounds.contains(a.row(i)));
  }
}

TEST_CASE("cem: elite value is non-decreasing across iterations in >= 90% of trials") {
  const auto bounds = ActionBounds::symmetric(2);
  CemConfig cfg;
  int monotone = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    Rng obj(500 + t);
    std::uniform_real_distribution<double> tgt(-1.0, 1.0), curv(0.5, 4.0);
    const auto q = quadratic({tgt(obj), tgt(obj)}, {curv(obj), curv(obj)});
    Rng rng(t);
    CemTrace trace;
    cem_select(q, kState, cfg, bounds, rng, &trace);
    monotone += std::is_sorted(trace.elite_mean_value.begin(), trace.elite_mean_value.end());
  }
  CHECK(monotone >= trials * 9 / 10);
}

TEST_CASE("cem: beats best-of-64 uniform sampling in >= 80% of 200 random quadratics") {
  const auto bounds = ActionBounds::symmetric(2);
  CemConfig cfg;
  cfg.stochastic_final = false;
  int wins = 0;
  for (int t = 0; t < 200; ++t) {
    Rng obj(9000 + t);
    std::uniform_real_distribution<double> tgt(-1.0, 1.0), curv(0.5, 4.0);
    const auto q = quadratic({tgt(obj), tgt(obj)}, {curv(obj), curv(obj)});
    Rng rng(t);
    const double cem_value = eval_one(q, cem_select(q, kState, cfg, bounds, rng));
    double best = -1e300;
    for (int j = 0; j < 64; ++j) best = std::max(best, eval_one(q, uniform_action(bounds, rng)));
    wins += cem_value >= best;
  }
  CHECK(wins >= 160);
}

TEST_CASE("cem: deterministic under a fixed seed") {
  const auto q = quadratic({0.1, 0.7}, {1.0, 2.0});
  CemConfig cfg;
  Rng a(4), b(4);
  const nn::Tensor states(5, 2);
  CHECK(cem_select_batch(q, states, cfg, ActionBounds::symmetric(2), a) ==
        cem_select_batch(q, states, cfg, ActionBounds::symmetric(2), b));
}

TEST_CASE("cem: invalid config") {
  CemConfig cfg;
  cfg.top_k = 65;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.top_k = 6;
  cfg.iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("eps_greedy: epsilon 0 is always greedy") {
  const auto bounds = ActionBounds::symmetric(1);
  Rng rng(0);
  for (int i = 0; i < 1000; ++i) {
    CHECK(eps_greedy([] { return std::vector<double>{0.42}; }, EpsGreedyConfig{0.0}, bounds, rng)[0] == 0.42);
  }
}

TEST_CASE("eps_greedy: epsilon 1 is uniform over the box (KS, 1e5 samples)") {
  const auto bounds = ActionBounds::symmetric(1);
  Rng rng(12);
  std::vector<double> xs;
  for (int i = 0; i < 100000; ++i) {
    xs.push_back(eps_greedy([] { return std::vector<double>{5.0}; }, EpsGreedyConfig{1.0}, bounds, rng)[0]);
  }
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double cdf = (xs[i] + 1.0) / 2.0;
    d = std::max({d, std::abs(cdf - i / n), std::abs((i + 1) / n - cdf)});
  }
  CHECK(d < 1.36 / std::sqrt(n));  // 5% critical value
}

TEST_CASE("eps_greedy: epsilon 0.1 takes the greedy branch 90% +- 1%") {
  const auto bounds = ActionBounds::symmetric(1);
  Rng rng(77);
  int greedy = 0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    greedy += eps_greedy([] { return std::vector<double>{7.0}; }, EpsGreedyConfig{0.1}, bounds, rng)[0] == 7.0;
  }
  CHECK(std::abs(greedy / static_cast<double>(trials) - 0.9) <= 0.01);
}

TEST_CASE("smoothing: sigma 0 is the identity") {
  Rng rng(0);
  const std::vector<double> a{0.3, -0.9};
  CHECK(smoothed_target_action(a, 0.0, 0.5, ActionBounds::symmetric(2), rng) == a);
}

TEST_CASE("smoothing: noise clip then action clip") {
  const std::vector<double> a{0.95};
  const std::vector<double> noise{0.9};
  const auto out = smooth_with_noise(a, noise, 0.5, ActionBounds::symmetric(1));
  CHECK(out[0] == 1.0);
  const auto inner = smooth_with_noise(std::vector<double>{0.1}, noise, 0.5, ActionBounds::symmetric(1, 10.0));
  CHECK(inner[0] == doctest::Approx(0.6));
}

TEST_CASE("smoothing: pre-clip noise stdev is ~0.2") {
  Rng rng(31);
  const auto wide = ActionBounds::symmetric(1, 100.0);
  const int n = 100000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = smoothed_target_action(std::vector<double>{0.0}, 0.2, 100.0, wide, rng)[0];
    s += x;
    s2 += x * x;
  }
  const double mean = s / n;
  const double sd = std::sqrt(s2 / n - mean * mean);
  CHECK(sd == doctest::Approx(0.2).epsilon(0.01));
}

TEST_CASE("smoothing: outputs stay in bounds") {
  Rng rng(2);
  const auto bounds = ActionBounds::symmetric(3);
  nn::Tensor acts(200, 3, 0.99);
  smooth_batch(acts, 0.2, 0.5, bounds, rng);
  for (std::size_t i = 0; i < acts.rows(); ++i) CHECK(bounds.contains(acts.row(i)));
}
