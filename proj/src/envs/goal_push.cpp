#include "qxlab/envs/goal_push.hpp"

#include <algorithm>
#include <cmath>

namespace qxlab::envs {

namespace {

double norm(Vec2 v) { return std::hypot(v[0], v[1]); }

Vec2 clamp_box(Vec2 p, double lim) { return {std::clamp(p[0], -lim, lim), std::clamp(p[1], -lim, lim)}; }

}  // namespace

PushState push_dynamics(const PushState& s, std::span<const double> action, const PushConfig& cfg) {
  PushState n = s;
  const double ax = std::clamp(action[0], -1.0, 1.0);
  const double ay = std::clamp(action[1], -1.0, 1.0);
  n.agent = clamp_box({s.agent[0] + cfg.step_scale * ax, s.agent[1] + cfg.step_scale * ay}, cfg.workspace);

  const Vec2 d{n.block[0] - n.agent[0], n.block[1] - n.agent[1]};
  const double dist = norm(d);
  if (dist < cfg.contact_radius) {
    Vec2 dir{0.0, 0.0};
    if (dist > 0.0) {
      dir = {d[0] / dist, d[1] / dist};
    } else {
      const double m = std::hypot(ax, ay);
      dir = m > 0.0 ? Vec2{ax / m, ay / m} : Vec2{1.0, 0.0};
    }
    n.block = clamp_box({n.agent[0] + cfg.contact_radius * dir[0], n.agent[1] + cfg.contact_radius * dir[1]},
                        cfg.workspace);
  }
  return n;
}

double goal_push_reward(const PushState& s, const PushConfig& cfg) {
  const double dist = norm({s.block[0] - s.goal[0], s.block[1] - s.goal[1]});
  return dist <= cfg.goal_tolerance ? 0.0 : -1.0;
}

GoalPushEnv::GoalPushEnv(std::size_t episode_len, PushConfig cfg) : cfg_(cfg) {
  spec_.obs_dim = 6;
  spec_.act_dim = 2;
  spec_.episode_len = episode_len;
  spec_.reward_profile = "goal-push";
  spec_.reward_set = {-1.0, 0.0};
  state_ = {cfg_.agent_start, cfg_.block_start, cfg_.block_start};
}

std::vector<double> GoalPushEnv::observe() const {
  return {state_.agent[0], state_.agent[1], state_.block[0], state_.block[1], state_.goal[0], state_.goal[1]};
}

std::vector<double> GoalPushEnv::reset(Rng& rng) {
  std::uniform_real_distribution<double> g(-cfg_.goal_range, cfg_.goal_range);
  state_.agent = cfg_.agent_start;
  state_.block = cfg_.block_start;
  const double gx = g(rng);
  const double gy = g(rng);
  state_.goal = {gx, gy};
  t_ = 0;
  return observe();
}

StepResult GoalPushEnv::step(std::span<const double> action) {
  state_ = push_dynamics(state_, action, cfg_);
  ++t_;
  StepResult r;
  r.obs_next = observe();
  r.reward = goal_push_reward(state_, cfg_);
  r.end = t_ >= spec_.episode_len ? EndKind::Truncated : EndKind::NotDone;
  r.info.position = state_.agent[0];
  r.info.success = r.reward == 0.0;
  return r;
}

}  // namespace qxlab::envs
