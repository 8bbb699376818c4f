#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "qxlab/envs/goal_push.hpp"
#include "qxlab/envs/loco.hpp"
#include "qxlab/envs/registry.hpp"
#include "qxlab/envs/wrappers.hpp"

using namespace qxlab;
using namespace qxlab::envs;

namespace {

// Closed-form always-forward rollout from rest: v_t = 1 - 0.9^t until it hits the
// 0.3 cap, then constant. Returns x_t for t = 1..n.
std::vector<double> forward_positions(std::size_t n) {
  std::vector<double> xs;
  double x = 0.0;
  for (std::size_t t = 1; t <= n; ++t) {
    const double v = std::min(1.0 - std::pow(0.9, static_cast<double>(t)), 0.3);
    x += v;
    xs.push_back(x);
  }
  return xs;
}

std::vector<double> scripted_push(const PushState& s) {
  const double gx = s.goal[0] - s.block[0], gy = s.goal[1] - s.block[1];
  const double gn = std::hypot(gx, gy);
  const double ux = gn > 0 ? gx / gn : 1.0, uy = gn > 0 ? gy / gn : 0.0;
  const double bx = s.block[0] - 0.1 * ux, by = s.block[1] - 0.1 * uy;  // behind the block
  const double rx = s.agent[0] - s.block[0], ry = s.agent[1] - s.block[1];
  const double along = rx * ux + ry * uy;
  double tx, ty;
  if (along > -0.06) {
    // not behind yet: go around on the side the agent is already on
    const double px = -uy, py = ux;
    const double side = (rx * px + ry * py) >= 0 ? 1.0 : -1.0;
    tx = s.block[0] + side * 0.15 * px - 0.12 * ux;
    ty = s.block[1] + side * 0.15 * py - 0.12 * uy;
  } else if (std::hypot(s.agent[0] - bx, s.agent[1] - by) > 0.03) {
    tx = bx, ty = by;
  } else {
    tx = s.goal[0] - 0.07 * ux, ty = s.goal[1] - 0.07 * uy;
    const double dx = tx - s.agent[0], dy = ty - s.agent[1];
    const double n = std::hypot(dx, dy);
    const double step = std::min(1.0, n / 0.05);
    return {step * dx / std::max(n, 1e-12), step * dy / std::max(n, 1e-12)};
  }
  const double dx = tx - s.agent[0], dy = ty - s.agent[1];
  const double n = std::hypot(dx, dy);
  const double step = std::min(1.0, n / 0.05);
  return {step * dx / std::max(n, 1e-12), step * dy / std::max(n, 1e-12)};
}

}  // namespace

TEST_CASE("sparse-loco: reward threshold is inclusive at 5") {
  CHECK(sparse_loco_reward(5.0) == 0.0);
  CHECK(sparse_loco_reward(4.99) == -1.0);
  CHECK(sparse_loco_reward(-20.0) == -1.0);
}

TEST_CASE("sparse-loco: always-forward reaches the goal at the step fixed by the recurrence") {
  const auto xs = forward_positions(200);
  const auto first = static_cast<std::size_t>(std::find_if(xs.begin(), xs.end(), [](double x) { return x >= 5.0; }) - xs.begin()) + 1;
  REQUIRE(first == 18);
  LocoEnv env(LocoReward::Sparse);
  Rng rng(0);
  env.reset(rng);
  std::size_t reached = 0;
  for (std::size_t t = 1; t <= 200; ++t) {
    const auto r = env.step(std::vector<double>{1.0});
    CHECK(r.info.position == doctest::Approx(xs[t - 1]).epsilon(1e-12));
    if (!reached && r.reward == 0.0) reached = t;
    CHECK(r.end == (t == 200 ? EndKind::Truncated : EndKind::NotDone));
  }
  CHECK(reached == first);
}

TEST_CASE("loco: free step function matches the environment") {
  LocoState s{4.9, 0.2};
  std::size_t t = 0;
  const auto r = sparse_loco_step(s, 1.0, t);
  CHECK(s.v == doctest::Approx(0.28));
  CHECK(s.x == doctest::Approx(5.18));
  CHECK(r.reward == 0.0);
  CHECK(t == 1);
  CHECK(r.obs_next[0] == doctest::Approx(5.18 / 5.0));
}

TEST_CASE("local-max: reward profile") {
  CHECK(local_max_reward(0.5) == 0.0);
  CHECK(local_max_reward(-1.0) == 0.0);
  CHECK(local_max_reward(2.0) == -1.0);
  CHECK(local_max_reward(-3.0) == -1.0);
  CHECK(local_max_reward(6.0) == 100.0);
}

TEST_CASE("local-max: stay-at-origin and always-forward returns") {
  Rng rng(0);
  LocoEnv stay(LocoReward::LocalMax);
  stay.reset(rng);
  double ret = 0.0;
  for (int t = 0; t < 200; ++t) ret += stay.step(std::vector<double>{0.0}).reward;
  CHECK(ret == 0.0);

  const auto xs = forward_positions(200);
  double expect = 0.0;
  for (double x : xs) expect += x >= 5.0 ? 100.0 : (std::abs(x) <= 1.0 ? 0.0 : -1.0);
  LocoEnv fwd(LocoReward::LocalMax);
  fwd.reset(rng);
  ret = 0.0;
  for (int t = 0; t < 200; ++t) ret += fwd.step(std::vector<double>{1.0}).reward;
  CHECK(ret == expect);
  CHECK(expect == 18287.0);
}

TEST_CASE("loco: reset and dynamics bounds") {
  LocoEnv env(LocoReward::Sparse);
  Rng rng(5);
  const auto obs = env.reset(rng);
  CHECK(obs == std::vector<double>{0.0, 0.0});
  std::uniform_real_distribution<double> u(-3.0, 3.0);  // out-of-box actions are clipped
  for (int t = 0; t < 200; ++t) {
    env.step(std::vector<double>{u(rng)});
    CHECK(std::abs(env.state().v) <= kLocoMaxSpeed);
    CHECK(std::isfinite(env.state().x));
  }
}

TEST_CASE("reward codomains are exact") {
  for (const std::string id : {"sparse-loco", "local-max", "goal-push", "sparse-loco+shift(1)"}) {
    auto env = make_env(id);
    const std::set<double> allowed(env->spec().reward_set.begin(), env->spec().reward_set.end());
    Rng rng(11);
    for (int ep = 0; ep < 5; ++ep) {
      env->reset(rng);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (std::size_t t = 0; t < env->spec().episode_len; ++t) {
        std::vector<double> a(env->act_dim());
        for (double& x : a) x = ep % 2 ? 1.0 : u(rng);
        const auto r = env->step(a);
        CHECK(allowed.count(r.reward) == 1);
      }
    }
  }
}

TEST_CASE("determinism: same seed and actions give identical trajectories") {
  for (const std::string id : {"sparse-loco+noisytv(1)", "goal-push", "local-max"}) {
    auto run = [&id] {
      auto env = make_env(id);
      Rng rng(3), act(4);
      std::vector<std::vector<double>> obs{env->reset(rng)};
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (int t = 0; t < 200; ++t) {
        std::vector<double> a(env->act_dim());
        for (double& x : a) x = u(act) - 0.3;
        obs.push_back(env->step(a).obs_next);
      }
      return obs;
    };
    CHECK(run() == run());
  }
}

TEST_CASE("goal-push: block on goal at reset gives reward 0 immediately") {
  GoalPushEnv env;
  Rng rng(0);
  env.reset(rng);
  auto s = env.state();
  s.goal = s.block;
  env.set_state(s);
  CHECK(env.current_reward() == 0.0);
  const auto r = env.step(std::vector<double>{-1.0, 0.0});  // move away from the block
  CHECK(r.reward == 0.0);
  CHECK(r.info.success);
}

TEST_CASE("goal-push: far agent never moves the block") {
  GoalPushEnv env;
  Rng rng(1);
  env.reset(rng);
  auto s = env.state();
  s.agent = {-0.9, -0.9};
  s.goal = {0.3, 0.3};
  env.set_state(s);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    const auto r = env.step(std::vector<double>{u(rng), u(rng)});
    CHECK(env.state().block == s.block);
    CHECK(r.reward == -1.0);
  }
}

TEST_CASE("goal-push: reward is goal-conditioned") {
  const PushConfig cfg;
  PushState a{{-0.5, 0.0}, {0.1, 0.1}, {0.1, 0.12}};
  PushState b = a;
  b.goal = {-0.2, 0.3};
  CHECK(goal_push_reward(a, cfg) == 0.0);
  CHECK(goal_push_reward(b, cfg) == -1.0);
}

TEST_CASE("goal-push: scripted push policy succeeds for reachable goals") {
  Rng rng(2024);
  int successes = 0;
  const int episodes = 50;
  for (int ep = 0; ep < episodes; ++ep) {
    GoalPushEnv env;
    env.reset(rng);
    bool ok = false;
    for (int t = 0; t < 200 && !ok; ++t) ok = env.step(scripted_push(env.state())).info.success;
    successes += ok;
  }
  CHECK(successes == episodes);
}

TEST_CASE("goal-push: block stays in the workspace and goals stay in range") {
  GoalPushEnv env;
  Rng rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int ep = 0; ep < 20; ++ep) {
    env.reset(rng);
    CHECK(std::abs(env.state().goal[0]) <= env.config().goal_range);
    CHECK(std::abs(env.state().goal[1]) <= env.config().goal_range);
    for (int t = 0; t < 200; ++t) {
      // drive into the block toward a wall
      env.step(std::vector<double>{1.0, 0.2 * u(rng)});
      CHECK(std::abs(env.state().block[0]) <= 1.0);
      CHECK(std::abs(env.state().block[1]) <= 1.0);
    }
  }
}

TEST_CASE("goal-push: same seed gives the same goal sequence") {
  GoalPushEnv a, b;
  Rng ra(6), rb(6);
  for (int i = 0; i < 10; ++i) {
    a.reset(ra);
    b.reset(rb);
    CHECK(a.state().goal == b.state().goal);
  }
}

TEST_CASE("noisy-tv: zero noise at x >= 0, sigma k*|x| behind the start") {
  auto inner = std::make_unique<LocoEnv>(LocoReward::Sparse);
  auto* loco = inner.get();
  NoisyTvWrapper env(std::move(inner), 1.0);
  Rng rng(9);
  auto obs = env.reset(rng);
  CHECK(obs.size() == 3);
  CHECK(obs[2] == 0.0);
  for (int t = 0; t < 30; ++t) CHECK(env.step(std::vector<double>{1.0}).obs_next[2] == 0.0);

  loco->set_state({-2.0, 0.0});
  CHECK(env.noise_sigma() == 2.0);
  double s = 0.0, s2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    loco->set_state({-2.0, 0.0});
    const double v = env.step(std::vector<double>{0.0}).obs_next[2];  // x stays at -2 with v = 0
    s += v;
    s2 += v * v;
  }
  const double sd = std::sqrt(s2 / n - (s / n) * (s / n));
  CHECK(sd == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("noisy-tv: sigma is non-increasing in x") {
  auto inner = std::make_unique<LocoEnv>(LocoReward::Sparse);
  auto* loco = inner.get();
  NoisyTvWrapper env(std::move(inner), 0.7);
  double prev = -1.0;
  for (double x = 3.0; x >= -6.0; x -= 0.25) {
    loco->set_state({x, 0.0});
    CHECK(env.noise_sigma() >= prev);
    prev = env.noise_sigma();
  }
}

TEST_CASE("wrappers leave the reward sequence alone (noisy-tv) or shift it exactly") {
  auto plain = make_env("sparse-loco");
  auto noisy = make_env("sparse-loco+noisytv(1)");
  auto shifted = make_env("sparse-loco+shift(1)");
  Rng r1(1), r2(1), r3(1), act(2);
  plain->reset(r1);
  noisy->reset(r2);
  shifted->reset(r3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double ret_plain = 0.0, ret_shift = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::vector<double> a{u(act) - 0.2};
    const auto a1 = plain->step(a), a2 = noisy->step(a), a3 = shifted->step(a);
    CHECK(a1.reward == a2.reward);
    CHECK(a3.reward == a1.reward + 1.0);
    CHECK(a1.obs_next[0] == a2.obs_next[0]);
    ret_plain += a1.reward;
    ret_shift += a3.reward;
  }
  CHECK(ret_shift == ret_plain + 200.0);
  CHECK(make_env("sparse-loco+shift(0)")->spec().reward_set == plain->spec().reward_set);
}

TEST_CASE("registry: ids and errors") {
  CHECK(base_env_ids().size() == 3);
  CHECK(make_env("goal-push")->obs_dim() == 6);
  CHECK(make_env("sparse-loco+noisytv(0.5)+shift(1)")->obs_dim() == 3);
  CHECK_THROWS_AS(make_env("cartpole"), ConfigError);
  CHECK_THROWS_AS(make_env("sparse-loco+noisytv(x)"), ConfigError);
  CHECK_THROWS_AS(make_env("sparse-loco+blur(1)"), ConfigError);
  CHECK(make_env("local-max", EnvOptions{50})->spec().episode_len == 50);
}
