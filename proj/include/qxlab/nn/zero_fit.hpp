#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "qxlab/nn/init.hpp"

namespace qxlab::nn {

/// Fit independent MLPs to f(x) = 0 on [-0.75,-0.25] U [0.25,0.75] and record
/// how they behave away from that support.
struct ZeroFitConfig {
  std::vector<std::size_t> hidden_dims{256, 256, 256};
  std::size_t n_nets = 10;
  std::size_t train_points = 256;
  std::size_t max_steps = 200000;
  double mse_threshold = 1e-7;
  double learning_rate = 1e-3;
  double grid_lo = -3.0;
  double grid_hi = 3.0;
  std::size_t grid_points = 601;
  double outside_abs = 2.0;
  InitScheme init{};
  std::uint64_t seed = 0;
};

struct ZeroFitCurve {
  std::size_t net_id = 0;
  std::size_t steps = 0;
  double final_mse = 0.0;
  std::vector<double> xs;
  std::vector<double> fx;
  double inside_mean_abs = 0.0;   // grid points inside the training support
  double outside_max_abs = 0.0;   // grid points with |x| >= outside_abs
};

struct ZeroFitResult {
  std::vector<ZeroFitCurve> curves;    // converged nets only
  std::vector<std::size_t> excluded;   // net ids that hit the step budget
  double mean_inside_abs = 0.0;
  double mean_outside_max = 0.0;
};

bool in_zero_fit_support(double x);

ZeroFitResult zero_fit_demo(const ZeroFitConfig& cfg);

/// Writes zero_fit.csv (net_id,x,f_x) and zero_fit_summary.csv
/// (net_id,inside_mean_abs,outside_max_abs) into `dir`.
void write_zero_fit_csv(const ZeroFitResult& result, const std::filesystem::path& dir);

}  // namespace qxlab::nn
