#include "qxlab/intrinsic/one_step.hpp"

#include <cmath>

#include "qxlab/errors.hpp"

namespace qxlab::intrinsic {

double one_step_pred_error(double predicted, double observed) { return std::abs(predicted - observed); }

RewardPredictor::RewardPredictor(std::size_t obs_dim, std::size_t act_dim, const std::vector<std::size_t>& hidden,
                                 const nn::InitScheme& init, double lr, Rng& rng) {
  std::vector<std::size_t> dims{obs_dim + act_dim};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(1);
  net_ = nn::MlpNet(dims, init, rng, nn::AdamConfig{.learning_rate = lr});
}

std::vector<double> RewardPredictor::predict(const nn::Tensor& states, const nn::Tensor& actions) const {
  const nn::Tensor out = net_.forward(nn::concat_cols(states, actions));
  return {out.values().begin(), out.values().end()};
}

std::vector<double> RewardPredictor::error(const nn::Tensor& states, const nn::Tensor& actions,
                                           std::span<const double> rewards) const {
  auto pred = predict(states, actions);
  if (pred.size() != rewards.size()) throw ShapeError("reward predictor: length mismatch");
  for (std::size_t i = 0; i < pred.size(); ++i) pred[i] = one_step_pred_error(pred[i], rewards[i]);
  return pred;
}

double RewardPredictor::train(const nn::Tensor& states, const nn::Tensor& actions, std::span<const double> rewards) {
  if (rewards.size() != states.rows()) throw ShapeError("reward predictor: length mismatch");
  return nn::regression_step(net_, nn::concat_cols(states, actions), nn::column(rewards));
}

}  // namespace qxlab::intrinsic
