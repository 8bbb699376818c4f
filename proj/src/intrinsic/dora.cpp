#include "qxlab/intrinsic/dora.hpp"

#include <algorithm>
#include <cmath>

#include "qxlab/errors.hpp"

namespace qxlab::intrinsic {

void DoraSpec::validate() const {
  if (beta < 0.0) throw ConfigError("dora beta must be >= 0");
  if (epsilon < 0.0 || epsilon > 1.0) throw ConfigError("dora epsilon must lie in [0, 1]");
  if (!(gamma_e > 0.0 && gamma_e <= 1.0) || !(gamma_extrinsic > 0.0 && gamma_extrinsic <= 1.0))
    throw ConfigError("dora discounts must lie in (0, 1]");
}

double dora_bonus(double e_value, const DoraSpec& spec) {
  const double e = std::min(e_value, 1.0 - 1e-6);
  if (!(e > 0.0)) return 0.0;
  return spec.beta / std::sqrt(-std::log(e));
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::vector<double> squash(const nn::Tensor& logits) {
  std::vector<double> out(logits.size());
  std::transform(logits.values().begin(), logits.values().end(), out.begin(), sigmoid);
  return out;
}

}  // namespace

DoraModule::DoraModule(std::size_t obs_dim, std::size_t act_dim, const std::vector<std::size_t>& hidden,
                       const DoraSpec& spec, const nn::InitScheme& init, double lr, Rng& rng)
    : spec_(spec) {
  spec_.validate();
  std::vector<std::size_t> dims{obs_dim + act_dim};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(1);
  nn::InitScheme scheme = init;
  scheme.output_bias = spec_.init_logit;
  net_ = nn::MlpNet(dims, scheme, rng, nn::AdamConfig{.learning_rate = lr});
}

std::vector<double> DoraModule::e_values(const nn::Tensor& states, const nn::Tensor& actions) const {
  return squash(net_.forward(nn::concat_cols(states, actions)));
}

std::vector<double> DoraModule::bonus(const nn::Tensor& states, const nn::Tensor& actions) const {
  auto e = e_values(states, actions);
  for (double& v : e) v = dora_bonus(v, spec_);
  return e;
}

double DoraModule::train(const nn::Tensor& states, const nn::Tensor& actions, const nn::Tensor& next_states,
                         const nn::Tensor& next_actions, std::span<const replay::EndKind> ends) {
  const auto e_next = squash(net_.forward(nn::concat_cols(next_states, next_actions)));
  if (ends.size() != e_next.size()) throw ShapeError("dora train: length mismatch");
  const nn::Tensor logits = net_.forward_train(nn::concat_cols(states, actions));
  const double n = static_cast<double>(logits.rows());
  nn::Tensor grad(logits.rows(), 1);
  double loss = 0.0;
  for (std::size_t i = 0; i < e_next.size(); ++i) {
    const double y = ends[i] == replay::EndKind::Terminal ? 0.0 : spec_.gamma_e * e_next[i];
    const double e = sigmoid(logits.values()[i]);
    const double d = e - y;
    loss += d * d;
    grad.values()[i] = 2.0 * d * e * (1.0 - e) / n;
  }
  net_.adam_step(net_.backward(grad));
  return loss / n;
}

}  // namespace qxlab::intrinsic
