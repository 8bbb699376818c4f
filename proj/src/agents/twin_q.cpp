#include "qxlab/agents/twin_q.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "qxlab/errors.hpp"

namespace qxlab::agents {

std::vector<std::size_t> q_layer_dims(std::size_t in, const std::vector<std::size_t>& hidden) {
  std::vector<std::size_t> dims{in};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(1);
  return dims;
}

TwinQ::TwinQ(std::size_t obs_dim, std::size_t act_dim, const std::vector<std::size_t>& hidden,
             nn::InitScheme init, double lr, Rng& rng) {
  const auto dims = q_layer_dims(obs_dim + act_dim, hidden);
  for (auto& net : online_) net = nn::MlpNet(dims, init, rng, nn::AdamConfig{.learning_rate = lr});
  for (std::size_t t = 0; t < 2; ++t) target_[t] = nn::TargetNet(online_[t]);
}

std::vector<double> TwinQ::value(const nn::Tensor& states, const nn::Tensor& actions) const {
  const nn::Tensor v = online_[0].forward(nn::concat_cols(states, actions));
  return {v.values().begin(), v.values().end()};
}

std::vector<double> TwinQ::target_min(const nn::Tensor& states, const nn::Tensor& actions) const {
  const nn::Tensor input = nn::concat_cols(states, actions);
  const nn::Tensor a = target_[0].forward(input);
  const nn::Tensor b = target_[1].forward(input);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(a.values()[i], b.values()[i]);
  return out;
}

policy::QBatchEval TwinQ::objective() const {
  return [this](const nn::Tensor& s, const nn::Tensor& a) { return value(s, a); };
}

double TwinQ::train(const nn::Tensor& states, const nn::Tensor& actions, std::span<const double> targets) {
  if (targets.size() != states.rows()) throw ShapeError("TwinQ::train: target count mismatch");
  const nn::Tensor input = nn::concat_cols(states, actions);
  const nn::Tensor y = nn::column(targets);
  double abs_err = 0.0;
  for (auto& net : online_) {
    const nn::Tensor pred = net.forward_train(input);
    for (std::size_t i = 0; i < pred.size(); ++i) abs_err += std::abs(pred.values()[i] - targets[i]);
    nn::Tensor grad;
    nn::mse_loss(pred, y, grad);
    net.adam_step(net.backward(grad));
    net.clear_cache();
  }
  return abs_err / static_cast<double>(2 * targets.size());
}

bool TwinQ::after_train_step(double tau, std::size_t update_freq) {
  ++train_steps_;
  if (train_steps_ % update_freq != 0) return false;
  for (std::size_t t = 0; t < 2; ++t) target_[t].polyak_update(online_[t], tau);
  ++target_updates_;
  return true;
}

void TwinQ::save(const std::filesystem::path& dir, const std::string& prefix) const {
  std::filesystem::create_directories(dir);
  for (std::size_t t = 0; t < 2; ++t) {
    std::ofstream on(dir / (prefix + "_online" + std::to_string(t) + ".bin"), std::ios::binary);
    online_[t].save(on);
    std::ofstream tg(dir / (prefix + "_target" + std::to_string(t) + ".bin"), std::ios::binary);
    target_[t].net().save(tg);
  }
}

void TwinQ::load(const std::filesystem::path& dir, const std::string& prefix) {
  for (std::size_t t = 0; t < 2; ++t) {
    std::ifstream on(dir / (prefix + "_online" + std::to_string(t) + ".bin"), std::ios::binary);
    if (!on) throw ParseError("missing checkpoint " + (dir / (prefix + "_online" + std::to_string(t) + ".bin")).string());
    online_[t] = nn::MlpNet::load(on);
    std::ifstream tg(dir / (prefix + "_target" + std::to_string(t) + ".bin"), std::ios::binary);
    if (!tg) throw ParseError("missing checkpoint " + (dir / (prefix + "_target" + std::to_string(t) + ".bin")).string());
    target_[t] = nn::TargetNet(nn::MlpNet::load(tg));
  }
}

}  // namespace qxlab::agents
