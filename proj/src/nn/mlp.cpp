#include "qxlab/nn/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>

#include "qxlab/nn/kernels.hpp"

namespace qxlab::nn {

namespace {

void init_layer(Tensor& w, Tensor& b, const InitScheme& scheme, bool is_output, Rng& rng) {
  const double fan_in = static_cast<double>(w.rows());
  const double fan_out = static_cast<double>(w.cols());
  auto fill_uniform = [&rng](std::span<double> xs, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    for (double& x : xs) x = d(rng);
  };
  auto fill_normal = [&rng](std::span<double> xs, double stddev) {
    std::normal_distribution<double> d(0.0, stddev);
    for (double& x : xs) x = d(rng);
  };

  b.fill(0.0);
  switch (scheme.tag) {
    case InitTag::KaimingUniform: {
      // kaiming_uniform(a = sqrt(5)) reduces to a 1/sqrt(fan_in) bound
      const double bound = 1.0 / std::sqrt(fan_in);
      fill_uniform(w.values(), -bound, bound);
      fill_uniform(b.values(), -bound, bound);
      break;
    }
    case InitTag::KaimingNormal:
      fill_normal(w.values(), std::sqrt(2.0 / fan_in));
      break;
    case InitTag::XavierUniform: {
      const double bound = std::sqrt(6.0 / (fan_in + fan_out));
      fill_uniform(w.values(), -bound, bound);
      break;
    }
    case InitTag::Normal01:
      fill_normal(w.values(), 1.0);
      break;
    case InitTag::UniformPM1:
      fill_uniform(w.values(), -1.0, 1.0);
      break;
  }
  if (is_output) b.fill(scheme.output_bias);
}

void check_same_layout(const MlpNet& a, const MlpNet& b) {
  if (a.layer_dims() != b.layer_dims()) throw ShapeError("network layouts differ");
}

}  // namespace

std::size_t Gradients::parameter_count() const {
  std::size_t n = 0;
  for (const auto& w : weights) n += w.size();
  for (const auto& b : biases) n += b.size();
  return n;
}

MlpNet::MlpNet(std::vector<std::size_t> layer_dims, const InitScheme& scheme, Rng& rng,
               AdamConfig adam)
    : dims_(std::move(layer_dims)), adam_(adam) {
  if (dims_.size() < 2) throw ConfigError("an MLP needs at least input and output dims");
  for (auto d : dims_) {
    if (d == 0) throw ConfigError("layer dims must be >= 1");
  }
  if (!(adam_.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  const std::size_t layers = dims_.size() - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    weights_.emplace_back(dims_[l], dims_[l + 1]);
    biases_.emplace_back(1, dims_[l + 1]);
    init_layer(weights_.back(), biases_.back(), scheme, l + 1 == layers, rng);
    adam_m_.emplace_back(dims_[l] + 1, dims_[l + 1]);
    adam_v_.emplace_back(dims_[l] + 1, dims_[l + 1]);
  }
}

std::size_t MlpNet::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) n += weights_[l].size() + biases_[l].size();
  return n;
}

Tensor MlpNet::forward(const Tensor& batch) const {
  if (batch.cols() != input_dim()) {
    throw ShapeError("forward: batch has " + std::to_string(batch.cols()) +
                     " columns, network expects " + std::to_string(input_dim()));
  }
  // Row chunks run through every layer while their activations are still in cache.
  constexpr std::size_t kChunk = 256;
  const std::size_t n = batch.rows();
  Tensor out(n, output_dim());
  std::size_t widest = 0;
  for (std::size_t l = 0; l + 1 < weights_.size(); ++l) widest = std::max(widest, dims_[l + 1]);
  std::vector<double> ping(kChunk * widest), pong(kChunk * widest);
  for (std::size_t r0 = 0; r0 < n; r0 += kChunk) {
    const std::size_t m = std::min(kChunk, n - r0);
    const double* src = batch.data() + r0 * input_dim();
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      const auto& w = weights_[l];
      const bool last = l + 1 == weights_.size();
      double* dst = last ? out.data() + r0 * output_dim() : (l % 2 == 0 ? ping.data() : pong.data());
      kernels::affine_forward(src, w.data(), biases_[l].data(), dst, m, w.rows(), w.cols());
      if (!last) kernels::relu_inplace(dst, m * w.cols());
      src = dst;
    }
  }
  return out;
}

Tensor MlpNet::forward_train(const Tensor& batch) {
  if (batch.cols() != input_dim()) {
    throw ShapeError("forward: batch has " + std::to_string(batch.cols()) +
                     " columns, network expects " + std::to_string(input_dim()));
  }
  Cache cache;
  cache.activations.reserve(weights_.size());
  cache.activations.push_back(batch);
  Tensor out;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const auto& w = weights_[l];
    const Tensor& cur = cache.activations.back();
    Tensor next(cur.rows(), w.cols());
    kernels::affine_forward(cur.data(), w.data(), biases_[l].data(), next.data(), cur.rows(),
                            w.rows(), w.cols());
    if (l + 1 < weights_.size()) {
      kernels::relu_inplace(next.data(), next.size());
      cache.activations.push_back(std::move(next));
    } else {
      out = std::move(next);
    }
  }
  cache_ = std::move(cache);
  return out;
}

Gradients MlpNet::backward(const Tensor& upstream) const {
  if (!cache_) throw StateError("backward called without a cached forward pass");
  const auto& acts = cache_->activations;
  const std::size_t n = acts.front().rows();
  if (upstream.rows() != n || upstream.cols() != output_dim()) {
    throw ShapeError("backward: upstream gradient shape mismatch");
  }
  Gradients g;
  const std::size_t layers = weights_.size();
  g.weights.resize(layers);
  g.biases.resize(layers);
  Tensor delta = upstream;
  for (std::size_t li = layers; li-- > 0;) {
    const auto& w = weights_[li];
    const Tensor& x = acts[li];
    g.weights[li] = Tensor(w.rows(), w.cols());
    g.biases[li] = Tensor(1, w.cols());
    kernels::affine_param_grad(x.data(), delta.data(), g.weights[li].data(),
                               g.biases[li].data(), n, w.rows(), w.cols());
    if (li == 0) break;
    Tensor dx(n, w.rows());
    kernels::affine_input_grad(delta.data(), w.data(), dx.data(), n, w.rows(), w.cols());
    kernels::relu_backward_inplace(dx.data(), x.data(), dx.size());
    delta = std::move(dx);
  }
  return g;
}

void MlpNet::adam_step(const Gradients& grads) {
  if (grads.weights.size() != weights_.size() || grads.biases.size() != biases_.size()) {
    throw ShapeError("adam_step: gradient layer count mismatch");
  }
  ++adam_t_;
  const double b1 = adam_.beta1;
  const double b2 = adam_.beta2;
  const double t = static_cast<double>(adam_t_);
  const double c1 = 1.0 - std::pow(b1, t);
  const double c2 = 1.0 - std::pow(b2, t);
  const double lr = adam_.learning_rate;
  const double eps = adam_.epsilon;

  auto update = [&](std::span<double> p, std::span<const double> g, double* m, double* v) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  };

  for (std::size_t l = 0; l < weights_.size(); ++l) {
    auto& w = weights_[l];
    auto& b = biases_[l];
    if (!grads.weights[l].same_shape(w) || !grads.biases[l].same_shape(b)) {
      throw ShapeError("adam_step: gradient shape mismatch at layer " + std::to_string(l));
    }
    // moment rows 0..in-1 track weights, row `in` tracks the bias
    update(w.values(), grads.weights[l].values(), adam_m_[l].data(), adam_v_[l].data());
    update(b.values(), grads.biases[l].values(), adam_m_[l].data() + w.size(),
           adam_v_[l].data() + w.size());
  }
}

std::vector<std::span<double>> MlpNet::parameter_blocks() {
  std::vector<std::span<double>> out;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    out.push_back(weights_[l].values());
    out.push_back(biases_[l].values());
  }
  return out;
}

std::vector<std::span<const double>> MlpNet::parameter_blocks() const {
  std::vector<std::span<const double>> out;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    out.push_back(weights_[l].values());
    out.push_back(biases_[l].values());
  }
  return out;
}

bool MlpNet::same_parameters(const MlpNet& other) const {
  return dims_ == other.dims_ && weights_ == other.weights_ && biases_ == other.biases_;
}

namespace {
constexpr std::uint32_t kNetMagic = 0x4E4E5851;  // "QXNN" little-endian

template <typename T>
void write_pod(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ParseError("truncated network checkpoint");
  return v;
}
}  // namespace

void MlpNet::save(std::ostream& os) const {
  write_pod(os, kNetMagic);
  write_pod(os, static_cast<std::uint32_t>(dims_.size()));
  for (auto d : dims_) write_pod(os, static_cast<std::uint64_t>(d));
  write_pod(os, adam_.learning_rate);
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    os.write(reinterpret_cast<const char*>(weights_[l].data()),
             static_cast<std::streamsize>(weights_[l].size() * sizeof(double)));
    os.write(reinterpret_cast<const char*>(biases_[l].data()),
             static_cast<std::streamsize>(biases_[l].size() * sizeof(double)));
  }
}

MlpNet MlpNet::load(std::istream& is) {
  if (read_pod<std::uint32_t>(is) != kNetMagic) throw ParseError("not a network checkpoint");
  const auto count = read_pod<std::uint32_t>(is);
  if (count < 2 || count > 64) throw ParseError("implausible layer count in checkpoint");
  MlpNet net;
  for (std::uint32_t i = 0; i < count; ++i) {
    net.dims_.push_back(static_cast<std::size_t>(read_pod<std::uint64_t>(is)));
  }
  net.adam_.learning_rate = read_pod<double>(is);
  for (std::size_t l = 0; l + 1 < net.dims_.size(); ++l) {
    Tensor w(net.dims_[l], net.dims_[l + 1]);
    Tensor b(1, net.dims_[l + 1]);
    is.read(reinterpret_cast<char*>(w.data()), static_cast<std::streamsize>(w.size() * sizeof(double)));
    is.read(reinterpret_cast<char*>(b.data()), static_cast<std::streamsize>(b.size() * sizeof(double)));
    if (!is) throw ParseError("truncated network checkpoint");
    net.weights_.push_back(std::move(w));
    net.biases_.push_back(std::move(b));
    net.adam_m_.emplace_back(net.dims_[l] + 1, net.dims_[l + 1]);
    net.adam_v_.emplace_back(net.dims_[l] + 1, net.dims_[l + 1]);
  }
  return net;
}

double mse_loss(const Tensor& pred, const Tensor& target, Tensor& grad) {
  if (!pred.same_shape(target)) throw ShapeError("mse_loss: shape mismatch");
  grad = Tensor(pred.rows(), pred.cols());
  const double n = static_cast<double>(pred.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred.values()[i] - target.values()[i];
    loss += d * d;
    grad.values()[i] = 2.0 * d / n;
  }
  return loss / n;
}

double regression_step(MlpNet& net, const Tensor& x, const Tensor& y) {
  const Tensor pred = net.forward_train(x);
  Tensor grad;
  const double loss = mse_loss(pred, y, grad);
  net.adam_step(net.backward(grad));
  return loss;
}

void TargetNet::polyak_update(const MlpNet& online, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("polyak tau must lie in [0, 1]");
  check_same_layout(net_, online);
  auto dst = net_.parameter_blocks();
  auto src = online.parameter_blocks();
  for (std::size_t b = 0; b < dst.size(); ++b) {
    if (tau == 1.0) {
      std::copy(src[b].begin(), src[b].end(), dst[b].begin());
    } else if (tau != 0.0) {
      for (std::size_t i = 0; i < dst[b].size(); ++i) {
        dst[b][i] = (1.0 - tau) * dst[b][i] + tau * src[b][i];
      }
    }
  }
}

}  // namespace qxlab::nn
