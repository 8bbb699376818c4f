#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qxlab/policy/cem.hpp"
#include "qxlab/replay/replay_buffer.hpp"
#include "qxlab/rng.hpp"

namespace qxlab::envs {

using replay::EndKind;

struct StepInfo {
  double position = 0.0;  // progress coordinate (x for the loco tasks, agent x for push)
  bool success = false;   // in the task's goal region after this step
};

struct StepResult {
  std::vector<double> obs_next;
  double reward = 0.0;
  EndKind end = EndKind::NotDone;
  StepInfo info;
};

struct EnvSpec {
  std::size_t obs_dim = 0;
  std::size_t act_dim = 0;
  std::size_t episode_len = 200;
  std::string reward_profile;
  std::vector<double> reward_set;  // every value step() can return
};

/// Episodic environment with a [-1, 1]^act_dim action box. Episodes end by
/// truncation at episode_len.
class Env {
 public:
  virtual ~Env() = default;

  virtual std::vector<double> reset(Rng& rng) = 0;
  virtual StepResult step(std::span<const double> action) = 0;
  virtual const EnvSpec& spec() const = 0;
  virtual double position() const = 0;
  virtual std::unique_ptr<Env> clone() const = 0;

  std::size_t obs_dim() const { return spec().obs_dim; }
  std::size_t act_dim() const { return spec().act_dim; }
  policy::ActionBounds bounds() const { return policy::ActionBounds::symmetric(act_dim()); }
};

}  // namespace qxlab::envs
