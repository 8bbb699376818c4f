#pragma once

#include <cstddef>
#include <vector>

#include "qxlab/nn/mlp.hpp"
#include "qxlab/replay/replay_buffer.hpp"

namespace qxlab::intrinsic {

struct DoraSpec {
  double epsilon = 0.1;
  double beta = 0.05;
  double gamma_extrinsic = 0.99;
  double gamma_e = 0.99;  // discount on the E-value bootstrap
  double init_logit = 5.0;  // E = sigmoid(logit) starts near 1
  bool summed_objective = false;  // act on Q + bonus instead of adding the bonus to the reward

  void validate() const;
};

/// beta / sqrt(-ln E), with E clamped to 1 - 1e-6 from above.
double dora_bonus(double e_value, const DoraSpec& spec);

/// E-value network over (s || a), squashed to (0, 1) and trained toward
/// gamma_e * E(s', a') with zero immediate reward. The bootstrap reads the current
/// network (no lagged copy), as in the tabular original.
class DoraModule {
 public:
  DoraModule(std::size_t obs_dim, std::size_t act_dim, const std::vector<std::size_t>& hidden, const DoraSpec& spec,
             const nn::InitScheme& init, double lr, Rng& rng);

  std::vector<double> e_values(const nn::Tensor& states, const nn::Tensor& actions) const;
  std::vector<double> bonus(const nn::Tensor& states, const nn::Tensor& actions) const;

  /// One Adam step toward gamma_e * E(s', next_actions). Returns the pre-step loss.
  double train(const nn::Tensor& states, const nn::Tensor& actions, const nn::Tensor& next_states,
               const nn::Tensor& next_actions, std::span<const replay::EndKind> ends);

  const nn::MlpNet& net() const { return net_; }
  const DoraSpec& spec() const { return spec_; }

 private:
  DoraSpec spec_;
  nn::MlpNet net_;
};

}  // namespace qxlab::intrinsic
