#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "qxlab/nn/init.hpp"
#include "qxlab/nn/tensor.hpp"
#include "qxlab/rng.hpp"

namespace qxlab::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double epsilon = 1e-8;
};

/// Per-layer parameter gradients, shaped like the network's parameters.
struct Gradients {
  std::vector<Tensor> weights;
  std::vector<Tensor> biases;

  std::size_t parameter_count() const;
};

/// Fully connected network: affine + ReLU on hidden layers, linear output.
/// Weights are stored in x out so a batch forward is X * W + b.
class MlpNet {
 public:
  MlpNet() = default;
  MlpNet(std::vector<std::size_t> layer_dims, const InitScheme& scheme, Rng& rng,
         AdamConfig adam = {});

  const std::vector<std::size_t>& layer_dims() const { return dims_; }
  std::size_t input_dim() const { return dims_.front(); }
  std::size_t output_dim() const { return dims_.back(); }
  std::size_t layer_count() const { return weights_.size(); }
  std::size_t parameter_count() const;

  /// Pure evaluation.
  Tensor forward(const Tensor& batch) const;

  /// Evaluation that caches activations for a following backward().
  Tensor forward_train(const Tensor& batch);

  /// Gradients of sum(upstream .* output) w.r.t. every parameter, using the
  /// activations cached by the most recent forward_train().
  Gradients backward(const Tensor& upstream) const;
  bool has_cache() const { return cache_.has_value(); }
  void clear_cache() { cache_.reset(); }

  void adam_step(const Gradients& grads);
  std::size_t adam_steps() const { return adam_t_; }
  const AdamConfig& adam_config() const { return adam_; }
  void set_learning_rate(double lr) { adam_.learning_rate = lr; }

  std::vector<Tensor>& weights() { return weights_; }
  const std::vector<Tensor>& weights() const { return weights_; }
  std::vector<Tensor>& biases() { return biases_; }
  const std::vector<Tensor>& biases() const { return biases_; }

  /// Parameter blocks in a fixed order (w0, b0, w1, b1, ...).
  std::vector<std::span<double>> parameter_blocks();
  std::vector<std::span<const double>> parameter_blocks() const;

  /// Same parameter values and shapes (Adam state ignored).
  bool same_parameters(const MlpNet& other) const;

  void save(std::ostream& os) const;
  static MlpNet load(std::istream& is);

 private:
  struct Cache {
    std::vector<Tensor> activations;  // input, then post-ReLU hidden outputs
  };

  std::vector<std::size_t> dims_;
  std::vector<Tensor> weights_;
  std::vector<Tensor> biases_;  // 1 x out
  std::vector<Tensor> adam_m_;
  std::vector<Tensor> adam_v_;
  std::size_t adam_t_ = 0;
  AdamConfig adam_;
  std::optional<Cache> cache_;
};

/// Squared-error helper: returns mean((pred - target)^2) over all entries and
/// writes d loss / d pred into `grad`.
double mse_loss(const Tensor& pred, const Tensor& target, Tensor& grad);

/// One Adam step on mse(net(x), y). Returns the loss before the step.
double regression_step(MlpNet& net, const Tensor& x, const Tensor& y);

/// Frozen parameter copy that moves only through polyak_update().
class TargetNet {
 public:
  TargetNet() = default;
  explicit TargetNet(const MlpNet& online) : net_(online) { net_.clear_cache(); }

  Tensor forward(const Tensor& batch) const { return net_.forward(batch); }
  const MlpNet& net() const { return net_; }

  /// p' <- (1 - tau) p' + tau p for every parameter. tau == 1 copies exactly.
  void polyak_update(const MlpNet& online, double tau);

 private:
  MlpNet net_;
};

}  // namespace qxlab::nn
