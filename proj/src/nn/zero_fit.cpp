#include "qxlab/nn/zero_fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "qxlab/nn/mlp.hpp"
#include "qxlab/rng.hpp"

namespace qxlab::nn {

bool in_zero_fit_support(double x) {
  const double a = std::abs(x);
  return a >= 0.25 && a <= 0.75;
}

namespace {

ZeroFitCurve fit_one(const ZeroFitConfig& cfg, std::size_t net_id, bool& converged) {
  Rng rng(derive_seed(cfg.seed, net_id));
  std::vector<std::size_t> dims{1};
  dims.insert(dims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
  dims.push_back(1);
  MlpNet net(dims, cfg.init, rng, AdamConfig{.learning_rate = cfg.learning_rate});

  Tensor xs(cfg.train_points, 1);
  std::uniform_real_distribution<double> mag(0.25, 0.75);
  std::bernoulli_distribution neg(0.5);
  for (std::size_t i = 0; i < cfg.train_points; ++i) {
    const double m = mag(rng);
    xs(i, 0) = neg(rng) ? -m : m;
  }
  const Tensor zeros(cfg.train_points, 1);

  ZeroFitCurve curve;
  curve.net_id = net_id;
  converged = false;
  Tensor grad;
  double mse = 0.0;
  for (std::size_t step = 0; step < cfg.max_steps; ++step) {
    const Tensor pred = net.forward_train(xs);
    mse = mse_loss(pred, zeros, grad);
    curve.steps = step;
    if (mse < cfg.mse_threshold) {
      converged = true;
      break;
    }
    net.adam_step(net.backward(grad));
  }
  curve.final_mse = mse;

  Tensor grid(cfg.grid_points, 1);
  const double span = cfg.grid_hi - cfg.grid_lo;
  for (std::size_t i = 0; i < cfg.grid_points; ++i) {
    grid(i, 0) = cfg.grid_lo + span * static_cast<double>(i) /
                                   static_cast<double>(std::max<std::size_t>(cfg.grid_points - 1, 1));
  }
  const Tensor out = net.forward(grid);
  double inside_sum = 0.0;
  std::size_t inside_n = 0;
  for (std::size_t i = 0; i < cfg.grid_points; ++i) {
    const double x = grid(i, 0);
    const double f = out(i, 0);
    curve.xs.push_back(x);
    curve.fx.push_back(f);
    if (in_zero_fit_support(x)) {
      inside_sum += std::abs(f);
      ++inside_n;
    }
    if (std::abs(x) >= cfg.outside_abs) curve.outside_max_abs = std::max(curve.outside_max_abs, std::abs(f));
  }
  curve.inside_mean_abs = inside_n ? inside_sum / static_cast<double>(inside_n) : 0.0;
  return curve;
}

}  // namespace

ZeroFitResult zero_fit_demo(const ZeroFitConfig& cfg) {
  ZeroFitResult result;
  if (cfg.n_nets == 0) return result;

  std::vector<ZeroFitCurve> curves(cfg.n_nets);
  std::vector<char> ok(cfg.n_nets, 0);
  const auto n = static_cast<long long>(cfg.n_nets);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    bool converged = false;
    curves[static_cast<std::size_t>(i)] = fit_one(cfg, static_cast<std::size_t>(i), converged);
    ok[static_cast<std::size_t>(i)] = converged ? 1 : 0;
  }

  for (std::size_t i = 0; i < cfg.n_nets; ++i) {
    if (!ok[i]) {
      std::fprintf(stderr, "warning: zero-fit net %zu did not reach MSE < %g in %zu steps (mse %g); excluded\n",
                   i, cfg.mse_threshold, cfg.max_steps, curves[i].final_mse);
      result.excluded.push_back(i);
      continue;
    }
    result.curves.push_back(std::move(curves[i]));
  }
  if (!result.curves.empty()) {
    for (const auto& c : result.curves) {
      result.mean_inside_abs += c.inside_mean_abs;
      result.mean_outside_max += c.outside_max_abs;
    }
    result.mean_inside_abs /= static_cast<double>(result.curves.size());
    result.mean_outside_max /= static_cast<double>(result.curves.size());
  }
  return result;
}

void write_zero_fit_csv(const ZeroFitResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream curves(dir / "zero_fit.csv");
  curves << "net_id,x,f_x\n";
  curves.precision(17);
  for (const auto& c : result.curves) {
    for (std::size_t i = 0; i < c.xs.size(); ++i) curves << c.net_id << ',' << c.xs[i] << ',' << c.fx[i] << '\n';
  }
  std::ofstream summary(dir / "zero_fit_summary.csv");
  summary << "net_id,inside_mean_abs,outside_max_abs\n";
  summary.precision(17);
  for (const auto& c : result.curves) {
    summary << c.net_id << ',' << c.inside_mean_abs << ',' << c.outside_max_abs << '\n';
  }
}

}  // namespace qxlab::nn
