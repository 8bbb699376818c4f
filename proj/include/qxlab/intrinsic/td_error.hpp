#pragma once

#include <span>
#include <vector>

#include "qxlab/nn/mlp.hpp"
#include "qxlab/replay/replay_buffer.hpp"

namespace qxlab::intrinsic {

/// How per-twin errors are folded into one reward. MeanAbs averages the per-twin
/// errors (absolute or signed, following TdErrorSpec::signed_error); FirstTwin uses twin 0.
enum class TwinReduction { MeanAbs, FirstTwin };

struct TdErrorSpec {
  double gamma = 0.99;
  bool signed_error = false;
  TwinReduction twin_reduction = TwinReduction::MeanAbs;

  void validate() const;
};

/// y = r + gamma * next_value, with the bootstrap dropped on Terminal rows only.
std::vector<double> td_targets(std::span<const double> rewards, std::span<const replay::EndKind> ends,
                               std::span<const double> next_value, double gamma);

/// Exploration reward from per-twin online values and the shared target y.
/// Unsigned: |Q_i - y|. Signed: y - Q_i (better than expected is positive).
std::vector<double> compute_rx(std::span<const std::vector<double>> q_sa, std::span<const double> targets,
                               const TdErrorSpec& spec);

/// Full evaluation against the batch: Q_i(s, a) from the online twins and
/// y = r + gamma * min_j Q'_j(s', next_actions) from the target twins.
std::vector<double> compute_rx(std::span<const nn::MlpNet> online, std::span<const nn::TargetNet> target,
                               const replay::TransitionBatch& batch, const nn::Tensor& next_actions,
                               const TdErrorSpec& spec);

/// Row-wise minimum of the target twins at (states, actions).
std::vector<double> min_target_value(std::span<const nn::TargetNet> target, const nn::Tensor& states,
                                     const nn::Tensor& actions);

}  // namespace qxlab::intrinsic
