#include "qxlab/agents/config.hpp"

#include <array>

#include "qxlab/errors.hpp"

namespace qxlab::agents {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 8> kMethods{{
    {Method::QXplore, "qxplore"},
    {Method::Rnd, "rnd"},
    {Method::Dora, "dora"},
    {Method::EpsGreedy, "epsgreedy"},
    {Method::OneStep, "qxplore-1step"},
    {Method::Value, "qxplore-value"},
    {Method::QxRnd, "qxplore-rnd"},
    {Method::Signed, "qxplore-signed"},
}};

}  // namespace

std::string_view to_string(Method m) {
  for (const auto& [method, name] : kMethods) {
    if (method == m) return name;
  }
  return "unknown";
}

Method parse_method(std::string_view id) {
  for (const auto& [method, name] : kMethods) {
    if (name == id) return method;
  }
  throw ConfigError("unknown method '" + std::string(id) + "'");
}

std::vector<std::string> method_ids() {
  std::vector<std::string> out;
  for (const auto& [method, name] : kMethods) out.emplace_back(name);
  return out;
}

bool is_dual(Method m) { return m == Method::QXplore || m == Method::QxRnd || m == Method::Signed; }

AgentConfig AgentConfig::desk() {
  AgentConfig cfg;
  cfg.hidden = {64, 64};
  cfg.target_cem = policy::CemConfig{.iterations = 2, .num_samples = 16, .top_k = 4};
  return cfg;
}

AgentConfig AgentConfig::paper_scale() {
  AgentConfig cfg;
  cfg.hidden = {256, 256, 256};
  return cfg;
}

void AgentConfig::validate() const {
  if (!(q_lr > 0.0) || !(qx_lr > 0.0)) throw ConfigError("learning rates must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("tau must lie in (0, 1]");
  if (target_update_freq == 0) throw ConfigError("target_update_freq must be >= 1");
  if (policy_noise < 0.0 || noise_clip < 0.0) throw ConfigError("target smoothing noise must be >= 0");
  if (train_steps_per_env_step == 0) throw ConfigError("train_steps_per_env_step must be >= 1");
  if (!(ratio_q >= 0.0 && ratio_q <= 1.0) || !(ratio_qx >= 0.0 && ratio_qx <= 1.0))
    throw ConfigError("batch ratios must lie in [0, 1]");
  if (hidden.empty()) throw ConfigError("at least one hidden layer is required");
  for (auto h : hidden) {
    if (h == 0) throw ConfigError("hidden widths must be >= 1");
  }
  if (alpha < 0.0) throw ConfigError("alpha must be >= 0");
  if (buffer_capacity == 0) throw ConfigError("buffer_capacity must be >= 1");
  if (eps.epsilon < 0.0 || eps.epsilon > 1.0) throw ConfigError("epsilon must lie in [0, 1]");
  act_cem.validate();
  target_cem.validate();
  td_spec().validate();
  rnd.validate();
  dora.validate();
}

intrinsic::TdErrorSpec AgentConfig::td_spec() const {
  intrinsic::TdErrorSpec spec = td;
  spec.gamma = gamma;
  return spec;
}

}  // namespace qxlab::agents
