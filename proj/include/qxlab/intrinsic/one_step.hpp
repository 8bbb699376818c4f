#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qxlab/nn/mlp.hpp"

namespace qxlab::intrinsic {

/// Learned R(s, a) whose absolute error is the exploration reward of the
/// one-step ablation.
class RewardPredictor {
 public:
  RewardPredictor(std::size_t obs_dim, std::size_t act_dim, const std::vector<std::size_t>& hidden,
                  const nn::InitScheme& init, double lr, Rng& rng);

  std::vector<double> predict(const nn::Tensor& states, const nn::Tensor& actions) const;

  /// |R(s, a) - r| per row.
  std::vector<double> error(const nn::Tensor& states, const nn::Tensor& actions, std::span<const double> rewards) const;

  /// One Adam step on the squared error. Returns the pre-step MSE.
  double train(const nn::Tensor& states, const nn::Tensor& actions, std::span<const double> rewards);

  const nn::MlpNet& net() const { return net_; }
  nn::MlpNet& net() { return net_; }

 private:
  nn::MlpNet net_;
};

/// |predicted - observed|
double one_step_pred_error(double predicted, double observed);

}  // namespace qxlab::intrinsic
