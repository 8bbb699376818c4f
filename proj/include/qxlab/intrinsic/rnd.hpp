#pragma once

#include <cstddef>
#include <vector>

#include "qxlab/nn/mlp.hpp"

namespace qxlab::intrinsic {

struct RndSpec {
  std::size_t embed_dim = 64;
  double predictor_lr = 1e-3;
  double extrinsic_weight = 2.0;
  double intrinsic_weight = 1.0;
  double gamma_extrinsic = 0.99;
  double gamma_intrinsic = 0.99;

  void validate() const;
};

/// extrinsic_weight * r_e + intrinsic_weight * r_i
double rnd_combined_reward(double r_extrinsic, double r_intrinsic, const RndSpec& spec);

/// Random network distillation: a frozen random target g(s) and a predictor
/// trained to imitate it. Novelty is the squared prediction error.
class Rnd {
 public:
  Rnd(std::size_t obs_dim, const std::vector<std::size_t>& hidden, const RndSpec& spec,
      const nn::InitScheme& init, Rng& rng);

  /// Per-row ||predictor(s) - target(s)||^2.
  std::vector<double> intrinsic(const nn::Tensor& states) const;

  /// One Adam step on the batch. Returns mean squared norm before the step.
  double train(const nn::Tensor& states);

  const nn::MlpNet& target() const { return target_; }
  const nn::MlpNet& predictor() const { return predictor_; }
  nn::MlpNet& predictor() { return predictor_; }
  const RndSpec& spec() const { return spec_; }

 private:
  RndSpec spec_;
  nn::MlpNet target_;
  nn::MlpNet predictor_;
};

}  // namespace qxlab::intrinsic
