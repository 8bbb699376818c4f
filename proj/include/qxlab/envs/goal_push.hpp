#pragma once

#include <array>

#include "qxlab/envs/env.hpp"

namespace qxlab::envs {

using Vec2 = std::array<double, 2>;

struct PushConfig {
  double workspace = 1.0;      // agent and block live in [-workspace, workspace]^2
  double step_scale = 0.05;    // action -> displacement
  double contact_radius = 0.08;
  double goal_tolerance = 0.05;
  double goal_range = 0.4;     // goals ~ U([-goal_range, goal_range]^2)
  Vec2 agent_start{-0.3, 0.0};
  Vec2 block_start{0.0, 0.0};
};

struct PushState {
  Vec2 agent;
  Vec2 block;
  Vec2 goal;
};

/// Kinematic push: the agent moves, then any overlap with the block is resolved by
/// moving the block out to the contact radius along the agent->block direction.
PushState push_dynamics(const PushState& s, std::span<const double> action, const PushConfig& cfg);

double goal_push_reward(const PushState& s, const PushConfig& cfg);

/// Goal-conditioned block pushing. Observation: agent xy, block xy, goal xy.
class GoalPushEnv final : public Env {
 public:
  explicit GoalPushEnv(std::size_t episode_len = 200, PushConfig cfg = {});

  std::vector<double> reset(Rng& rng) override;
  StepResult step(std::span<const double> action) override;
  const EnvSpec& spec() const override { return spec_; }
  double position() const override { return state_.agent[0]; }
  std::unique_ptr<Env> clone() const override { return std::make_unique<GoalPushEnv>(*this); }

  const PushState& state() const { return state_; }
  void set_state(const PushState& s) { state_ = s; }
  const PushConfig& config() const { return cfg_; }
  std::vector<double> observe() const;
  double current_reward() const { return goal_push_reward(state_, cfg_); }

 private:
  PushConfig cfg_;
  EnvSpec spec_;
  PushState state_;
  std::size_t t_ = 0;
};

}  // namespace qxlab::envs
