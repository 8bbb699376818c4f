#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qxlab/intrinsic/dora.hpp"
#include "qxlab/intrinsic/rnd.hpp"
#include "qxlab/intrinsic/td_error.hpp"
#include "qxlab/nn/init.hpp"
#include "qxlab/policy/cem.hpp"
#include "qxlab/policy/exploration.hpp"

namespace qxlab::agents {

enum class Method { QXplore, Rnd, Dora, EpsGreedy, OneStep, Value, QxRnd, Signed };

std::string_view to_string(Method m);
Method parse_method(std::string_view id);
std::vector<std::string> method_ids();

/// Two policies with their own environments and buffers.
bool is_dual(Method m);

struct AgentConfig {
  double q_lr = 1e-3;
  double qx_lr = 1e-3;
  std::size_t batch_size = 128;
  double gamma = 0.99;
  double tau = 0.005;
  std::size_t target_update_freq = 2;
  double policy_noise = 0.2;
  double noise_clip = 0.5;
  std::size_t train_steps_per_env_step = 1;
  double ratio_q = 0.75;
  double ratio_qx = 0.75;
  double beta_q = 0.0;  // output bias of the extrinsic value net
  std::vector<std::size_t> hidden{64, 64};
  nn::InitTag init = nn::InitTag::KaimingUniform;
  double alpha = 0.1;  // extrinsic weight in the single-policy value ablation
  std::size_t warmup_steps = 1000;
  std::size_t buffer_capacity = 1'000'000;

  policy::CemConfig act_cem{};     // action selection in the environment
  policy::CemConfig target_cem{};  // next-state actions inside bootstrap targets
  intrinsic::TdErrorSpec td{};     // gamma is taken from `gamma`
  intrinsic::RndSpec rnd{};
  intrinsic::DoraSpec dora{};
  policy::EpsGreedyConfig eps{};

  /// Small nets and a reduced target search for single-core runs.
  static AgentConfig desk();
  /// Table-scale nets: 3 x 256, full CEM everywhere.
  static AgentConfig paper_scale();

  void validate() const;
  intrinsic::TdErrorSpec td_spec() const;
};

}  // namespace qxlab::agents
