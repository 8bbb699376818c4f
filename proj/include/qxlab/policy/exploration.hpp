#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qxlab/policy/cem.hpp"

namespace qxlab::policy {

struct EpsGreedyConfig {
  double epsilon = 0.1;
};

std::vector<double> uniform_action(const ActionBounds& bounds, Rng& rng);

/// With probability epsilon a uniform action over the box, otherwise select_greedy().
/// One coin is drawn from `rng` on every call.
std::vector<double> eps_greedy(const std::function<std::vector<double>()>& select_greedy,
                               const EpsGreedyConfig& cfg, const ActionBounds& bounds, Rng& rng);

/// Target-policy smoothing with a given noise vector: clip noise to +-noise_clip,
/// add, clip to the box.
std::vector<double> smooth_with_noise(std::span<const double> action, std::span<const double> noise,
                                      double noise_clip, const ActionBounds& bounds);

/// Same, drawing noise ~ N(0, noise_sigma^2) per dimension. sigma == 0 is the identity.
std::vector<double> smoothed_target_action(std::span<const double> action, double noise_sigma, double noise_clip,
                                           const ActionBounds& bounds, Rng& rng);

/// Row-wise smoothed_target_action over a batch of actions.
void smooth_batch(nn::Tensor& actions, double noise_sigma, double noise_clip, const ActionBounds& bounds, Rng& rng);

}  // namespace qxlab::policy
