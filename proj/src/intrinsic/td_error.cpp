#include "qxlab/intrinsic/td_error.hpp"

#include <algorithm>
#include <cmath>

#include "qxlab/errors.hpp"

namespace qxlab::intrinsic {

void TdErrorSpec::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
}

std::vector<double> td_targets(std::span<const double> rewards, std::span<const replay::EndKind> ends,
                               std::span<const double> next_value, double gamma) {
  if (rewards.size() != ends.size() || rewards.size() != next_value.size())
    throw ShapeError("td_targets: length mismatch");
  std::vector<double> y(rewards.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = rewards[i];
    if (ends[i] != replay::EndKind::Terminal) y[i] += gamma * next_value[i];
  }
  return y;
}

std::vector<double> compute_rx(std::span<const std::vector<double>> q_sa, std::span<const double> targets,
                               const TdErrorSpec& spec) {
  spec.validate();
  if (q_sa.empty()) throw ShapeError("compute_rx: no online values");
  for (const auto& q : q_sa) {
    if (q.size() != targets.size()) throw ShapeError("compute_rx: length mismatch");
  }
  const std::size_t twins = spec.twin_reduction == TwinReduction::FirstTwin ? 1 : q_sa.size();
  std::vector<double> rx(targets.size(), 0.0);
  for (std::size_t i = 0; i < rx.size(); ++i) {
    double acc = 0.0;
    for (std::size_t t = 0; t < twins; ++t) {
      const double delta = q_sa[t][i] - targets[i];
      acc += spec.signed_error ? -delta : std::abs(delta);
    }
    rx[i] = acc / static_cast<double>(twins);
  }
  return rx;
}

std::vector<double> min_target_value(std::span<const nn::TargetNet> target, const nn::Tensor& states,
                                     const nn::Tensor& actions) {
  if (target.empty()) throw ShapeError("min_target_value: no target nets");
  const nn::Tensor input = nn::concat_cols(states, actions);
  std::vector<double> out;
  for (std::size_t t = 0; t < target.size(); ++t) {
    const nn::Tensor v = target[t].forward(input);
    if (t == 0) {
      out.assign(v.values().begin(), v.values().end());
    } else {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(out[i], v.values()[i]);
    }
  }
  return out;
}

std::vector<double> compute_rx(std::span<const nn::MlpNet> online, std::span<const nn::TargetNet> target,
                               const replay::TransitionBatch& batch, const nn::Tensor& next_actions,
                               const TdErrorSpec& spec) {
  const std::vector<double> next = min_target_value(target, batch.s_next, next_actions);
  const std::vector<double> y = td_targets(batch.r, batch.end, next, spec.gamma);
  const nn::Tensor input = nn::concat_cols(batch.s, batch.a);
  std::vector<std::vector<double>> q;
  for (const auto& net : online) {
    const nn::Tensor v = net.forward(input);
    q.emplace_back(v.values().begin(), v.values().end());
  }
  return compute_rx(q, y, spec);
}

}  // namespace qxlab::intrinsic
