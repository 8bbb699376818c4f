#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "qxlab/nn/mlp.hpp"
#include "qxlab/policy/cem.hpp"

namespace qxlab::agents {

/// Clipped double Q: two independent online nets over (s || a) and their Polyak
/// targets. Targets move only on every `update_freq`-th training step.
class TwinQ {
 public:
  TwinQ() = default;
  TwinQ(std::size_t obs_dim, std::size_t act_dim, const std::vector<std::size_t>& hidden, nn::InitScheme init,
        double lr, Rng& rng);

  /// Twin 0 at (s, a); the objective action selection maximises.
  std::vector<double> value(const nn::Tensor& states, const nn::Tensor& actions) const;
  std::vector<double> target_min(const nn::Tensor& states, const nn::Tensor& actions) const;
  policy::QBatchEval objective() const;

  /// One Adam step of each twin toward `targets`. Returns the mean |Q_i - y| over
  /// twins and rows before the step.
  double train(const nn::Tensor& states, const nn::Tensor& actions, std::span<const double> targets);

  /// Counts a training step and applies the Polyak update when the count reaches a
  /// multiple of `update_freq`. Returns true when the targets moved.
  bool after_train_step(double tau, std::size_t update_freq);

  std::array<nn::MlpNet, 2>& online() { return online_; }
  const std::array<nn::MlpNet, 2>& online() const { return online_; }
  const std::array<nn::TargetNet, 2>& target() const { return target_; }
  std::size_t train_steps() const { return train_steps_; }
  std::size_t target_updates() const { return target_updates_; }

  void save(const std::filesystem::path& dir, const std::string& prefix) const;
  void load(const std::filesystem::path& dir, const std::string& prefix);

 private:
  std::array<nn::MlpNet, 2> online_;
  std::array<nn::TargetNet, 2> target_;
  std::size_t train_steps_ = 0;
  std::size_t target_updates_ = 0;
};

std::vector<std::size_t> q_layer_dims(std::size_t in, const std::vector<std::size_t>& hidden);

}  // namespace qxlab::agents
