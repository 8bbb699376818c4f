#include "qxlab/envs/wrappers.hpp"

#include <algorithm>
#include <cmath>

namespace qxlab::envs {

NoisyTvWrapper::NoisyTvWrapper(std::unique_ptr<Env> inner, double k) : inner_(std::move(inner)), k_(k) {
  spec_ = inner_->spec();
  spec_.obs_dim += 1;
  spec_.reward_profile += "+noisytv";
}

NoisyTvWrapper::NoisyTvWrapper(const NoisyTvWrapper& o)
    : inner_(o.inner_->clone()), k_(o.k_), spec_(o.spec_), noise_rng_(o.noise_rng_) {}

double NoisyTvWrapper::noise_sigma() const { return k_ * std::max(0.0, -inner_->position()); }

std::vector<double> NoisyTvWrapper::augment(std::vector<double> obs) {
  const double sigma = noise_sigma();
  double v = 0.0;
  if (sigma > 0.0) {
    std::normal_distribution<double> d(0.0, sigma);
    v = d(noise_rng_);
  }
  obs.push_back(v);
  return obs;
}

std::vector<double> NoisyTvWrapper::reset(Rng& rng) {
  noise_rng_.seed(rng());
  return augment(inner_->reset(rng));
}

StepResult NoisyTvWrapper::step(std::span<const double> action) {
  StepResult r = inner_->step(action);
  r.obs_next = augment(std::move(r.obs_next));
  return r;
}

RewardShiftWrapper::RewardShiftWrapper(std::unique_ptr<Env> inner, double delta)
    : inner_(std::move(inner)), delta_(delta) {
  spec_ = inner_->spec();
  for (double& r : spec_.reward_set) r += delta_;
  spec_.reward_profile += "+shift";
}

RewardShiftWrapper::RewardShiftWrapper(const RewardShiftWrapper& o)
    : inner_(o.inner_->clone()), delta_(o.delta_), spec_(o.spec_) {}

StepResult RewardShiftWrapper::step(std::span<const double> action) {
  StepResult r = inner_->step(action);
  r.reward += delta_;
  return r;
}

}  // namespace qxlab::envs
