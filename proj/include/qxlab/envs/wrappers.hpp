#pragma once

#include "qxlab/envs/env.hpp"

namespace qxlab::envs {

/// Appends one observation entry drawn from N(0, (k * max(0, -x))^2), where x is
/// the inner environment's position. Rewards and dynamics are untouched.
class NoisyTvWrapper final : public Env {
 public:
  NoisyTvWrapper(std::unique_ptr<Env> inner, double k);
  NoisyTvWrapper(const NoisyTvWrapper& o);

  std::vector<double> reset(Rng& rng) override;
  StepResult step(std::span<const double> action) override;
  const EnvSpec& spec() const override { return spec_; }
  double position() const override { return inner_->position(); }
  std::unique_ptr<Env> clone() const override { return std::make_unique<NoisyTvWrapper>(*this); }

  double noise_sigma() const;
  const Env& inner() const { return *inner_; }

 private:
  std::vector<double> augment(std::vector<double> obs);

  std::unique_ptr<Env> inner_;
  double k_;
  EnvSpec spec_;
  Rng noise_rng_;
};

/// reward' = reward + delta.
class RewardShiftWrapper final : public Env {
 public:
  RewardShiftWrapper(std::unique_ptr<Env> inner, double delta);
  RewardShiftWrapper(const RewardShiftWrapper& o);

  std::vector<double> reset(Rng& rng) override { return inner_->reset(rng); }
  StepResult step(std::span<const double> action) override;
  const EnvSpec& spec() const override { return spec_; }
  double position() const override { return inner_->position(); }
  std::unique_ptr<Env> clone() const override { return std::make_unique<RewardShiftWrapper>(*this); }

 private:
  std::unique_ptr<Env> inner_;
  double delta_;
  EnvSpec spec_;
};

}  // namespace qxlab::envs
