#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qxlab/nn/tensor.hpp"
#include "qxlab/rng.hpp"

namespace qxlab::policy {

/// Axis-aligned action box.
struct ActionBounds {
  std::vector<double> low;
  std::vector<double> high;

  static ActionBounds symmetric(std::size_t dim, double limit = 1.0);
  std::size_t dim() const { return low.size(); }
  bool contains(std::span<const double> a) const;
  void clip(std::span<double> a) const;
};

struct CemConfig {
  std::size_t iterations = 4;
  std::size_t num_samples = 64;
  std::size_t top_k = 6;
  bool stochastic_final = true;
  double init_std = 1.0;
  double min_std = 1e-3;

  void validate() const;
};

/// Scores candidate actions: row i of `actions` is evaluated at row i of `states`.
using QBatchEval = std::function<std::vector<double>(const nn::Tensor& states, const nn::Tensor& actions)>;

/// Optional introspection for tests. Statistics refer to the first state of the batch,
/// except `elite_mean_value`, which averages over all states.
struct CemTrace {
  std::vector<double> elite_mean_value;  // per iteration
  nn::Tensor last_samples;               // num_samples x act_dim, final iteration
  std::vector<double> fitted_mean;
  std::vector<double> fitted_std;
};

/// Cross-entropy-method maximisation of `q` for every row of `states`.
/// Starts from N(0, init_std) clipped to the box, refits a diagonal Gaussian to the
/// top_k scorers each iteration (unbiased variance, floored at min_std), and returns
/// either a clipped sample from the final Gaussian or its mean.
nn::Tensor cem_select_batch(const QBatchEval& q, const nn::Tensor& states, const CemConfig& cfg,
                            const ActionBounds& bounds, Rng& rng, CemTrace* trace = nullptr);

std::vector<double> cem_select(const QBatchEval& q, std::span<const double> state, const CemConfig& cfg,
                               const ActionBounds& bounds, Rng& rng, CemTrace* trace = nullptr);

}  // namespace qxlab::policy
