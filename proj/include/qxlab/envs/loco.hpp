#pragma once

#include "qxlab/envs/env.hpp"

namespace qxlab::envs {

/// 1-D double integrator standing in for a legged runner.
struct LocoState {
  double x = 0.0;
  double v = 0.0;
};

inline constexpr double kLocoGoal = 5.0;
inline constexpr double kLocoMaxSpeed = 0.3;

/// v' = clamp(0.9 v + 0.1 a, +-0.3), x' = x + v'. `a` is clipped to [-1, 1].
LocoState loco_dynamics(LocoState s, double action);

/// 0 at x >= 5 (inclusive), -1 elsewhere.
double sparse_loco_reward(double x);

/// 100 at x >= 5, 0 for |x| <= 1, -1 elsewhere.
double local_max_reward(double x);

enum class LocoReward { Sparse, LocalMax };

/// Shared state machine for `sparse-loco` and `local-max`. Observation (x/5, v/0.3).
class LocoEnv final : public Env {
 public:
  LocoEnv(LocoReward profile, std::size_t episode_len = 200);

  std::vector<double> reset(Rng& rng) override;
  StepResult step(std::span<const double> action) override;
  const EnvSpec& spec() const override { return spec_; }
  double position() const override { return state_.x; }
  std::unique_ptr<Env> clone() const override { return std::make_unique<LocoEnv>(*this); }

  const LocoState& state() const { return state_; }
  void set_state(LocoState s) { state_ = s; }
  std::vector<double> observe() const;

 private:
  LocoReward profile_;
  EnvSpec spec_;
  LocoState state_;
  std::size_t t_ = 0;
};

/// One transition of the sparse task from an explicit state (t counts steps taken).
StepResult sparse_loco_step(LocoState& s, double action, std::size_t& t, std::size_t episode_len = 200);
StepResult local_max_step(LocoState& s, double action, std::size_t& t, std::size_t episode_len = 200);

}  // namespace qxlab::envs
