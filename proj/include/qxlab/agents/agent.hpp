#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qxlab/agents/config.hpp"
#include "qxlab/agents/twin_q.hpp"
#include "qxlab/envs/env.hpp"
#include "qxlab/intrinsic/one_step.hpp"

namespace qxlab::agents {

/// Maps an observation to an action; draws from `rng` only for the CEM search.
using Policy = std::function<std::vector<double>(std::span<const double> obs, Rng& rng)>;

/// Values fed to each loss on the most recent training step. Tests use this to check
/// which reward channel reached which network.
struct LossInputs {
  std::vector<double> exploit_rewards;  // reward column of the extrinsic Q batch
  std::vector<double> explore_rewards;  // reward column used for the exploration Q (dual) / shaped reward (single)
  std::vector<double> exploit_targets;
  std::vector<double> explore_targets;
  std::size_t exploit_own_rows = 0;  // rows drawn from the exploit policy's own buffer
  std::size_t explore_own_rows = 0;
};

struct StepLog {
  double reward = 0.0;
  double reward_explore = 0.0;
  double position = 0.0;
  double position_explore = 0.0;
  bool trained = false;
  bool targets_updated = false;
  double mean_rx = 0.0;
  double mean_td_abs = 0.0;
  double intrinsic_mean = 0.0;
  bool episode_end = false;
  bool success = false;          // of the finished episode, when episode_end
  bool success_explore = false;
};

struct EpisodeSummary {
  std::size_t episode = 0;
  std::size_t env_steps = 0;  // cumulative, exploit-side environment
  double return_q = 0.0;
  double return_qx = 0.0;
  bool success = false;
  bool success_qx = false;
  double mean_position = 0.0;
  double mean_position_qx = 0.0;
  double mean_rx = 0.0;
  double mean_td_abs = 0.0;
  double intrinsic_mean = 0.0;
  std::size_t train_steps = 0;
};

/// A training agent owning its networks, replay buffers, environments and RNG
/// streams. All streams derive from the construction seed by name.
class Agent {
 public:
  virtual ~Agent() = default;

  Method method() const { return method_; }
  const AgentConfig& config() const { return cfg_; }
  bool dual() const { return is_dual(method_); }

  /// One environment step per policy, then training when the buffers are ready.
  virtual StepLog step() = 0;

  /// Steps until the current exploit-side episode ends.
  EpisodeSummary run_episode();

  /// Deterministic exploitation policy: CEM mean over the extrinsic Q (the single
  /// acting Q for the single-policy ablations).
  virtual Policy exploit_policy() const = 0;

  /// Extrinsic Q first, then the exploration Q for dual agents.
  virtual std::vector<const TwinQ*> q_functions() const = 0;

  virtual void save(const std::filesystem::path& dir) const = 0;
  virtual void load(const std::filesystem::path& dir) = 0;

  std::size_t env_steps() const { return env_steps_; }
  std::size_t episodes() const { return episodes_; }
  const LossInputs& last_loss_inputs() const { return last_inputs_; }
  void record_loss_inputs(bool on) { record_inputs_ = on; }

 protected:
  Agent(Method method, AgentConfig cfg) : method_(method), cfg_(std::move(cfg)) {}

  Method method_;
  AgentConfig cfg_;
  std::size_t env_steps_ = 0;
  std::size_t episodes_ = 0;
  LossInputs last_inputs_;
  bool record_inputs_ = false;
};

std::unique_ptr<Agent> make_agent(Method method, const AgentConfig& cfg, const envs::Env& prototype,
                                  std::uint64_t seed);

/// Smoothed CEM actions at the next states, as used inside bootstrap targets.
nn::Tensor target_actions(const TwinQ& q, const nn::Tensor& next_states, const AgentConfig& cfg,
                          const policy::ActionBounds& bounds, Rng& rng);

struct EvalResult {
  std::vector<double> returns;
  std::vector<bool> successes;
  std::vector<double> mean_positions;

  std::size_t episodes() const { return returns.size(); }
  double mean_return() const;
  double success_rate() const;
  double mean_position() const;
};

/// Runs `n_episodes` full episodes with `policy`, no training.
EvalResult evaluate(const Policy& policy, envs::Env& env, std::size_t n_episodes, Rng& rng);

}  // namespace qxlab::agents
