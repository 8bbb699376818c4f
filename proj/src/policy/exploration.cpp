#include "qxlab/policy/exploration.hpp"

#include <algorithm>

#include "qxlab/errors.hpp"

namespace qxlab::policy {

std::vector<double> uniform_action(const ActionBounds& bounds, Rng& rng) {
  std::vector<double> a(bounds.dim());
  for (std::size_t d = 0; d < a.size(); ++d) {
    std::uniform_real_distribution<double> u(bounds.low[d], bounds.high[d]);
    a[d] = u(rng);
  }
  return a;
}

std::vector<double> eps_greedy(const std::function<std::vector<double>()>& select_greedy,
                               const EpsGreedyConfig& cfg, const ActionBounds& bounds, Rng& rng) {
  if (!(cfg.epsilon >= 0.0 && cfg.epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < cfg.epsilon) return uniform_action(bounds, rng);
  return select_greedy();
}

std::vector<double> smooth_with_noise(std::span<const double> action, std::span<const double> noise,
                                      double noise_clip, const ActionBounds& bounds) {
  std::vector<double> out(action.begin(), action.end());
  for (std::size_t d = 0; d < out.size(); ++d) out[d] += std::clamp(noise[d], -noise_clip, noise_clip);
  bounds.clip(out);
  return out;
}

std::vector<double> smoothed_target_action(std::span<const double> action, double noise_sigma, double noise_clip,
                                           const ActionBounds& bounds, Rng& rng) {
  if (noise_sigma < 0.0) throw ConfigError("noise sigma must be >= 0");
  std::vector<double> noise(action.size(), 0.0);
  if (noise_sigma > 0.0) {
    std::normal_distribution<double> d(0.0, noise_sigma);
    for (double& x : noise) x = d(rng);
  }
  return smooth_with_noise(action, noise, noise_clip, bounds);
}

void smooth_batch(nn::Tensor& actions, double noise_sigma, double noise_clip, const ActionBounds& bounds, Rng& rng) {
  for (std::size_t i = 0; i < actions.rows(); ++i) {
    const auto smoothed = smoothed_target_action(actions.row(i), noise_sigma, noise_clip, bounds, rng);
    std::copy(smoothed.begin(), smoothed.end(), actions.row(i).begin());
  }
}

}  // namespace qxlab::policy
