#include "qxlab/envs/loco.hpp"

#include <algorithm>
#include <cmath>

namespace qxlab::envs {

LocoState loco_dynamics(LocoState s, double action) {
  const double a = std::clamp(action, -1.0, 1.0);
  const double v = std::clamp(0.9 * s.v + 0.1 * a, -kLocoMaxSpeed, kLocoMaxSpeed);
  return {s.x + v, v};
}

double sparse_loco_reward(double x) { return x >= kLocoGoal ? 0.0 : -1.0; }

double local_max_reward(double x) {
  if (x >= kLocoGoal) return 100.0;
  return std::abs(x) <= 1.0 ? 0.0 : -1.0;
}

namespace {

StepResult loco_step(LocoState& s, double action, std::size_t& t, std::size_t episode_len, LocoReward profile) {
  s = loco_dynamics(s, action);
  ++t;
  StepResult r;
  r.obs_next = {s.x / kLocoGoal, s.v / kLocoMaxSpeed};
  r.reward = profile == LocoReward::Sparse ? sparse_loco_reward(s.x) : local_max_reward(s.x);
  r.end = t >= episode_len ? EndKind::Truncated : EndKind::NotDone;
  r.info.position = s.x;
  r.info.success = s.x >= kLocoGoal;
  return r;
}

}  // namespace

StepResult sparse_loco_step(LocoState& s, double action, std::size_t& t, std::size_t episode_len) {
  return loco_step(s, action, t, episode_len, LocoReward::Sparse);
}

StepResult local_max_step(LocoState& s, double action, std::size_t& t, std::size_t episode_len) {
  return loco_step(s, action, t, episode_len, LocoReward::LocalMax);
}

LocoEnv::LocoEnv(LocoReward profile, std::size_t episode_len) : profile_(profile) {
  spec_.obs_dim = 2;
  spec_.act_dim = 1;
  spec_.episode_len = episode_len;
  if (profile == LocoReward::Sparse) {
    spec_.reward_profile = "sparse-loco";
    spec_.reward_set = {-1.0, 0.0};
  } else {
    spec_.reward_profile = "local-max";
    spec_.reward_set = {-1.0, 0.0, 100.0};
  }
}

std::vector<double> LocoEnv::observe() const { return {state_.x / kLocoGoal, state_.v / kLocoMaxSpeed}; }

std::vector<double> LocoEnv::reset(Rng&) {
  state_ = {};
  t_ = 0;
  return observe();
}

StepResult LocoEnv::step(std::span<const double> action) {
  return loco_step(state_, action[0], t_, spec_.episode_len, profile_);
}

}  // namespace qxlab::envs
