#include "qxlab/agents/agent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "qxlab/errors.hpp"
#include "qxlab/intrinsic/dora.hpp"
#include "qxlab/intrinsic/rnd.hpp"
#include "qxlab/replay/replay_buffer.hpp"

namespace qxlab::agents {

namespace {

double mean_of(std::span<const double> v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

nn::InitScheme scheme(const AgentConfig& cfg, double output_bias) { return {cfg.init, output_bias}; }

/// One environment with its replay buffer and the running episode.
class Collector {
 public:
  Collector(const envs::Env& prototype, std::size_t capacity, std::uint64_t env_seed)
      : env_(prototype.clone()),
        buffer_(capacity, prototype.obs_dim(), prototype.act_dim()),
        env_rng_(env_seed) {
    obs_ = env_->reset(env_rng_);
  }

  const std::vector<double>& obs() const { return obs_; }
  const replay::ReplayBuffer& buffer() const { return buffer_; }
  const envs::Env& env() const { return *env_; }
  std::size_t steps() const { return steps_; }

  struct Outcome {
    double reward = 0.0;
    double position = 0.0;
    bool episode_end = false;
    bool success = false;
  };

  Outcome advance(const std::vector<double>& action) {
    const auto res = env_->step(action);
    buffer_.push({obs_, action, res.reward, res.obs_next, res.end});
    ++steps_;
    Outcome out{res.reward, res.info.position, res.end != replay::EndKind::NotDone, res.info.success};
    if (out.episode_end) {
      obs_ = env_->reset(env_rng_);
    } else {
      obs_ = res.obs_next;
    }
    return out;
  }

 private:
  std::unique_ptr<envs::Env> env_;
  replay::ReplayBuffer buffer_;
  Rng env_rng_;
  std::vector<double> obs_;
  std::size_t steps_ = 0;
};

std::size_t own_rows(const replay::TransitionBatch& b) {
  return static_cast<std::size_t>(std::count(b.source.begin(), b.source.end(), replay::Source::Self));
}

policy::CemConfig deterministic(policy::CemConfig cfg) {
  cfg.stochastic_final = false;
  return cfg;
}

std::vector<double> choose(const TwinQ& q, const std::vector<double>& obs, const AgentConfig& cfg,
                           const policy::ActionBounds& bounds, std::size_t steps_so_far, Rng& rng) {
  if (steps_so_far < cfg.warmup_steps) return policy::uniform_action(bounds, rng);
  return policy::cem_select(q.objective(), obs, cfg.act_cem, bounds, rng);
}

// QXplore, QXplore-RND and signed QXplore: an extrinsic Q and an exploration Q,
// each acting in its own environment and training on mixed batches from both buffers.
class DualAgent final : public Agent {
 public:
  DualAgent(Method method, const AgentConfig& cfg, const envs::Env& prototype, std::uint64_t seed)
      : Agent(method, cfg),
        bounds_(prototype.bounds()),
        env_q_(prototype, cfg.buffer_capacity, derive_seed(seed, "env.q")),
        env_x_(prototype, cfg.buffer_capacity, derive_seed(seed, "env.qx")),
        act_q_(make_stream(seed, "act.q")),
        act_x_(make_stream(seed, "act.qx")),
        sample_q_(make_stream(seed, "sample.q")),
        sample_x_(make_stream(seed, "sample.qx")),
        target_q_(make_stream(seed, "target.q")),
        target_x_(make_stream(seed, "target.qx")),
        target_rx_(make_stream(seed, "target.rx")) {
    cfg_.validate();
    const std::size_t obs = prototype.obs_dim(), act = prototype.act_dim();
    Rng init_q = make_stream(seed, "init.q");
    Rng init_x = make_stream(seed, "init.qx");
    exploit_ = TwinQ(obs, act, cfg_.hidden, scheme(cfg_, cfg_.beta_q), cfg_.q_lr, init_q);
    explore_ = TwinQ(obs, act, cfg_.hidden, scheme(cfg_, 0.0), cfg_.qx_lr, init_x);
    td_spec_ = cfg_.td_spec();
    td_spec_.signed_error = method == Method::Signed || cfg_.td.signed_error;
    if (method == Method::QxRnd) {
      Rng init_rnd = make_stream(seed, "init.rnd");
      rnd_.emplace(obs, cfg_.hidden, cfg_.rnd, nn::InitScheme{cfg_.init, 0.0}, init_rnd);
    }
  }

  StepLog step() override {
    StepLog log;
    const auto a_q = choose(exploit_, env_q_.obs(), cfg_, bounds_, env_q_.steps(), act_q_);
    const auto a_x = choose(explore_, env_x_.obs(), cfg_, bounds_, env_x_.steps(), act_x_);
    const auto out_q = env_q_.advance(a_q);
    const auto out_x = env_x_.advance(a_x);
    ++env_steps_;
    log.reward = out_q.reward;
    log.reward_explore = out_x.reward;
    log.position = out_q.position;
    log.position_explore = out_x.position;
    log.episode_end = out_q.episode_end;
    log.success = out_q.success;
    log.success_explore = out_x.success;
    if (out_q.episode_end) ++episodes_;

    if (env_steps_ < cfg_.warmup_steps) return log;
    for (std::size_t k = 0; k < cfg_.train_steps_per_env_step; ++k) {
      if (!train_once(log)) break;
    }
    return log;
  }

  Policy exploit_policy() const override {
    const auto cem = deterministic(cfg_.act_cem);
    return [this, cem](std::span<const double> obs, Rng& rng) {
      return policy::cem_select(exploit_.objective(), obs, cem, bounds_, rng);
    };
  }

  void save(const std::filesystem::path& dir) const override {
    exploit_.save(dir, "q");
    explore_.save(dir, "qx");
    if (rnd_) {
      std::ofstream os(dir / "rnd_predictor.bin", std::ios::binary);
      rnd_->predictor().save(os);
    }
  }

  void load(const std::filesystem::path& dir) override {
    exploit_.load(dir, "q");
    explore_.load(dir, "qx");
  }

  std::vector<const TwinQ*> q_functions() const override { return {&exploit_, &explore_}; }

 private:
  bool train_once(StepLog& log) {
    auto bq = replay::sample_mixed(env_q_.buffer(), env_x_.buffer(), {cfg_.batch_size, cfg_.ratio_q}, sample_q_);
    auto bx = replay::sample_mixed(env_x_.buffer(), env_q_.buffer(), {cfg_.batch_size, cfg_.ratio_qx}, sample_x_);
    if (!bq || !bx) return false;

    // exploration reward from the extrinsic Q before either network moves
    std::vector<double> rx;
    if (rnd_) {
      rx = rnd_->intrinsic(bx->s_next);
      rnd_->train(bx->s_next);
    } else {
      const nn::Tensor next_rx = target_actions(exploit_, bx->s_next, cfg_, bounds_, target_rx_);
      rx = intrinsic::compute_rx(exploit_.online(), exploit_.target(), *bx, next_rx, td_spec_);
    }

    const nn::Tensor next_q = target_actions(exploit_, bq->s_next, cfg_, bounds_, target_q_);
    const auto y_q = intrinsic::td_targets(bq->r, bq->end, exploit_.target_min(bq->s_next, next_q), cfg_.gamma);
    const nn::Tensor next_x = target_actions(explore_, bx->s_next, cfg_, bounds_, target_x_);
    const auto y_x = intrinsic::td_targets(rx, bx->end, explore_.target_min(bx->s_next, next_x), cfg_.gamma);

    if (record_inputs_) {
      last_inputs_ = LossInputs{bq->r, rx, y_q, y_x, own_rows(*bq), own_rows(*bx)};
    }
    const double td_abs = exploit_.train(bq->s, bq->a, y_q);
    explore_.train(bx->s, bx->a, y_x);
    const bool moved = exploit_.after_train_step(cfg_.tau, cfg_.target_update_freq);
    explore_.after_train_step(cfg_.tau, cfg_.target_update_freq);

    log.trained = true;
    log.targets_updated = log.targets_updated || moved;
    log.mean_rx = mean_of(rx);
    log.intrinsic_mean = log.mean_rx;
    log.mean_td_abs = td_abs;
    return true;
  }

  policy::ActionBounds bounds_;
  Collector env_q_;
  Collector env_x_;
  Rng act_q_, act_x_, sample_q_, sample_x_, target_q_, target_x_, target_rx_;
  TwinQ exploit_;
  TwinQ explore_;
  intrinsic::TdErrorSpec td_spec_;
  std::optional<intrinsic::Rnd> rnd_;
};

// One acting Q on one buffer; the methods differ only in the reward the Q is
// trained on (and the exploration coin for epsilon-greedy and DORA).
class SingleAgent final : public Agent {
 public:
  SingleAgent(Method method, const AgentConfig& cfg, const envs::Env& prototype, std::uint64_t seed)
      : Agent(method, cfg),
        bounds_(prototype.bounds()),
        env_(prototype, cfg.buffer_capacity, derive_seed(seed, "env.q")),
        act_(make_stream(seed, "act.q")),
        coin_(make_stream(seed, "eps")),
        sample_(make_stream(seed, "sample.q")),
        target_(make_stream(seed, "target.q")) {
    cfg_.validate();
    const std::size_t obs = prototype.obs_dim(), act = prototype.act_dim();
    // the single-policy ablations act on their exploration objective, so that Q starts unbiased
    const bool explores = method == Method::OneStep || method == Method::Value;
    Rng init_q = make_stream(seed, "init.q");
    q_ = TwinQ(obs, act, cfg_.hidden, scheme(cfg_, explores ? 0.0 : cfg_.beta_q), explores ? cfg_.qx_lr : cfg_.q_lr,
               init_q);
    switch (method) {
      case Method::Rnd: {
        Rng r = make_stream(seed, "init.rnd");
        rnd_.emplace(obs, cfg_.hidden, cfg_.rnd, scheme(cfg_, 0.0), r);
        break;
      }
      case Method::Dora: {
        Rng r = make_stream(seed, "init.dora");
        dora_.emplace(obs, act, cfg_.hidden, cfg_.dora, scheme(cfg_, 0.0), cfg_.q_lr, r);
        break;
      }
      case Method::OneStep: {
        Rng r = make_stream(seed, "init.pred");
        predictor_.emplace(obs, act, cfg_.hidden, scheme(cfg_, 0.0), cfg_.q_lr, r);
        break;
      }
      case Method::Value: {
        Rng r = make_stream(seed, "init.v");
        value_.emplace(q_layer_dims(obs, cfg_.hidden), scheme(cfg_, cfg_.beta_q), r,
                       nn::AdamConfig{.learning_rate = cfg_.q_lr});
        value_target_.emplace(*value_);
        break;
      }
      default:
        break;
    }
  }

  StepLog step() override {
    StepLog log;
    std::vector<double> action;
    if (env_.steps() < cfg_.warmup_steps) {
      action = policy::uniform_action(bounds_, act_);
    } else {
      const auto greedy = [this] { return policy::cem_select(acting_objective(), env_.obs(), cfg_.act_cem, bounds_, act_); };
      action = policy::eps_greedy(greedy, policy::EpsGreedyConfig{exploration_epsilon()}, bounds_, coin_);
    }
    const auto out = env_.advance(action);
    ++env_steps_;
    log.reward = out.reward;
    log.position = out.position;
    log.episode_end = out.episode_end;
    log.success = out.success;
    if (out.episode_end) ++episodes_;

    if (env_steps_ < cfg_.warmup_steps) return log;
    for (std::size_t k = 0; k < cfg_.train_steps_per_env_step; ++k) {
      if (!train_once(log)) break;
    }
    return log;
  }

  Policy exploit_policy() const override {
    const auto cem = deterministic(cfg_.act_cem);
    return [this, cem](std::span<const double> obs, Rng& rng) {
      return policy::cem_select(q_.objective(), obs, cem, bounds_, rng);
    };
  }

  void save(const std::filesystem::path& dir) const override {
    q_.save(dir, "q");
    auto dump = [&dir](const nn::MlpNet& net, const char* name) {
      std::ofstream os(dir / name, std::ios::binary);
      net.save(os);
    };
    if (rnd_) dump(rnd_->predictor(), "rnd_predictor.bin");
    if (dora_) dump(dora_->net(), "dora_e.bin");
    if (predictor_) dump(predictor_->net(), "reward_predictor.bin");
    if (value_) dump(*value_, "value.bin");
  }

  void load(const std::filesystem::path& dir) override { q_.load(dir, "q"); }

  std::vector<const TwinQ*> q_functions() const override { return {&q_}; }

 private:
  double exploration_epsilon() const {
    if (method_ == Method::EpsGreedy) return cfg_.eps.epsilon;
    if (method_ == Method::Dora) return cfg_.dora.epsilon;
    return 0.0;
  }

  policy::QBatchEval acting_objective() const {
    if (dora_ && cfg_.dora.summed_objective) {
      return [this](const nn::Tensor& s, const nn::Tensor& a) {
        auto v = q_.value(s, a);
        const auto b = dora_->bonus(s, a);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += b[i];
        return v;
      };
    }
    return q_.objective();
  }

  bool train_once(StepLog& log) {
    auto batch = replay::sample_uniform(env_.buffer(), cfg_.batch_size, sample_);
    if (!batch) return false;
    const auto& b = *batch;
    const nn::Tensor next = target_actions(q_, b.s_next, cfg_, bounds_, target_);

    std::vector<double> rewards = b.r;
    std::vector<double> bonus;
    switch (method_) {
      case Method::Rnd:
        bonus = rnd_->intrinsic(b.s_next);
        for (std::size_t i = 0; i < rewards.size(); ++i)
          rewards[i] = intrinsic::rnd_combined_reward(b.r[i], bonus[i], cfg_.rnd);
        rnd_->train(b.s_next);
        break;
      case Method::Dora:
        if (!cfg_.dora.summed_objective) {
          bonus = dora_->bonus(b.s, b.a);
          for (std::size_t i = 0; i < rewards.size(); ++i) rewards[i] += bonus[i];
        }
        dora_->train(b.s, b.a, b.s_next, next, b.end);
        break;
      case Method::OneStep:
        bonus = predictor_->error(b.s, b.a, b.r);
        for (std::size_t i = 0; i < rewards.size(); ++i) rewards[i] = bonus[i] + b.r[i];
        predictor_->train(b.s, b.a, b.r);
        break;
      case Method::Value: {
        const nn::Tensor v_next = value_target_->forward(b.s_next);
        const auto y_v = intrinsic::td_targets(b.r, b.end, v_next.values(), cfg_.gamma);
        const nn::Tensor v = value_->forward_train(b.s);
        bonus.resize(rewards.size());
        for (std::size_t i = 0; i < rewards.size(); ++i) {
          bonus[i] = std::abs(v.values()[i] - y_v[i]);
          rewards[i] = bonus[i] + cfg_.alpha * b.r[i];
        }
        nn::Tensor grad;
        nn::mse_loss(v, nn::column(y_v), grad);
        value_->adam_step(value_->backward(grad));
        value_->clear_cache();
        break;
      }
      default:
        break;
    }

    const auto y = intrinsic::td_targets(rewards, b.end, q_.target_min(b.s_next, next), cfg_.gamma);
    if (record_inputs_) last_inputs_ = LossInputs{b.r, rewards, y, {}, b.size(), 0};
    const double td_abs = q_.train(b.s, b.a, y);
    const bool moved = q_.after_train_step(cfg_.tau, cfg_.target_update_freq);
    if (moved && value_) value_target_->polyak_update(*value_, cfg_.tau);

    log.trained = true;
    log.targets_updated = log.targets_updated || moved;
    log.mean_td_abs = td_abs;
    log.intrinsic_mean = mean_of(bonus);
    if (method_ == Method::Value || method_ == Method::OneStep) log.mean_rx = log.intrinsic_mean;
    return true;
  }

  policy::ActionBounds bounds_;
  Collector env_;
  Rng act_, coin_, sample_, target_;
  TwinQ q_;
  std::optional<intrinsic::Rnd> rnd_;
  std::optional<intrinsic::DoraModule> dora_;
  std::optional<intrinsic::RewardPredictor> predictor_;
  std::optional<nn::MlpNet> value_;
  std::optional<nn::TargetNet> value_target_;
};

}  // namespace

EpisodeSummary Agent::run_episode() {
  EpisodeSummary sum;
  std::size_t steps = 0, trained = 0;
  double pos = 0.0, pos_x = 0.0;
  while (true) {
    const StepLog log = step();
    ++steps;
    sum.return_q += log.reward;
    sum.return_qx += log.reward_explore;
    pos += log.position;
    pos_x += log.position_explore;
    if (log.trained) {
      ++trained;
      sum.mean_rx += log.mean_rx;
      sum.mean_td_abs += log.mean_td_abs;
      sum.intrinsic_mean += log.intrinsic_mean;
    }
    if (log.episode_end) {
      sum.success = log.success;
      sum.success_qx = log.success_explore;
      break;
    }
  }
  sum.episode = episodes_ - 1;
  sum.env_steps = env_steps_;
  sum.train_steps = trained;
  sum.mean_position = pos / static_cast<double>(steps);
  sum.mean_position_qx = pos_x / static_cast<double>(steps);
  if (trained > 0) {
    sum.mean_rx /= static_cast<double>(trained);
    sum.mean_td_abs /= static_cast<double>(trained);
    sum.intrinsic_mean /= static_cast<double>(trained);
  }
  return sum;
}

nn::Tensor target_actions(const TwinQ& q, const nn::Tensor& next_states, const AgentConfig& cfg,
                          const policy::ActionBounds& bounds, Rng& rng) {
  nn::Tensor a = policy::cem_select_batch(q.objective(), next_states, cfg.target_cem, bounds, rng);
  policy::smooth_batch(a, cfg.policy_noise, cfg.noise_clip, bounds, rng);
  return a;
}

std::unique_ptr<Agent> make_agent(Method method, const AgentConfig& cfg, const envs::Env& prototype,
                                  std::uint64_t seed) {
  if (is_dual(method)) return std::make_unique<DualAgent>(method, cfg, prototype, seed);
  return std::make_unique<SingleAgent>(method, cfg, prototype, seed);
}

double EvalResult::mean_return() const { return mean_of(returns); }

double EvalResult::success_rate() const {
  if (successes.empty()) return 0.0;
  return static_cast<double>(std::count(successes.begin(), successes.end(), true)) /
         static_cast<double>(successes.size());
}

double EvalResult::mean_position() const { return mean_of(mean_positions); }

EvalResult evaluate(const Policy& policy, envs::Env& env, std::size_t n_episodes, Rng& rng) {
  EvalResult out;
  for (std::size_t ep = 0; ep < n_episodes; ++ep) {
    auto obs = env.reset(rng);
    double ret = 0.0, pos = 0.0;
    std::size_t steps = 0;
    bool success = false;
    while (true) {
      const auto res = env.step(policy(obs, rng));
      ret += res.reward;
      pos += res.info.position;
      ++steps;
      if (res.end != replay::EndKind::NotDone) {
        success = res.info.success;
        break;
      }
      obs = res.obs_next;
    }
    out.returns.push_back(ret);
    out.successes.push_back(success);
    out.mean_positions.push_back(pos / static_cast<double>(steps));
  }
  return out;
}

}  // namespace qxlab::agents
