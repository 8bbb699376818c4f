#include "qxlab/intrinsic/rnd.hpp"

#include "qxlab/errors.hpp"

namespace qxlab::intrinsic {

void RndSpec::validate() const {
  if (embed_dim == 0) throw ConfigError("rnd embed_dim must be >= 1");
  if (!(predictor_lr > 0.0)) throw ConfigError("rnd predictor_lr must be positive");
  if (extrinsic_weight < 0.0 || intrinsic_weight < 0.0) throw ConfigError("rnd weights must be >= 0");
  if (!(gamma_extrinsic > 0.0 && gamma_extrinsic <= 1.0) || !(gamma_intrinsic > 0.0 && gamma_intrinsic <= 1.0))
    throw ConfigError("rnd discounts must lie in (0, 1]");
}

double rnd_combined_reward(double r_extrinsic, double r_intrinsic, const RndSpec& spec) {
  return spec.extrinsic_weight * r_extrinsic + spec.intrinsic_weight * r_intrinsic;
}

namespace {

std::vector<std::size_t> rnd_dims(std::size_t obs_dim, const std::vector<std::size_t>& hidden, std::size_t out) {
  std::vector<std::size_t> dims{obs_dim};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  return dims;
}

}  // namespace

Rnd::Rnd(std::size_t obs_dim, const std::vector<std::size_t>& hidden, const RndSpec& spec,
         const nn::InitScheme& init, Rng& rng)
    : spec_(spec) {
  spec_.validate();
  const auto dims = rnd_dims(obs_dim, hidden, spec_.embed_dim);
  nn::InitScheme unbiased = init;
  unbiased.output_bias = 0.0;
  target_ = nn::MlpNet(dims, unbiased, rng);
  predictor_ = nn::MlpNet(dims, unbiased, rng, nn::AdamConfig{.learning_rate = spec_.predictor_lr});
}

std::vector<double> Rnd::intrinsic(const nn::Tensor& states) const {
  const nn::Tensor g = target_.forward(states);
  const nn::Tensor p = predictor_.forward(states);
  std::vector<double> out(states.rows(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
      const double d = p(i, j) - g(i, j);
      out[i] += d * d;
    }
  }
  return out;
}

double Rnd::train(const nn::Tensor& states) {
  const nn::Tensor g = target_.forward(states);
  // mse averages over rows and embed dims; rescale to the per-row squared norm
  return nn::regression_step(predictor_, states, g) * static_cast<double>(spec_.embed_dim);
}

}  // namespace qxlab::intrinsic
