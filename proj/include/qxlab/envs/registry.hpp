#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qxlab/envs/env.hpp"

namespace qxlab::envs {

struct EnvOptions {
  std::size_t episode_len = 200;
};

/// Base ids: sparse-loco, local-max, goal-push. Wrappers are appended as suffixes,
/// applied left to right: `sparse-loco+noisytv(1)+shift(1)`.
std::unique_ptr<Env> make_env(std::string_view id, const EnvOptions& opts = {});

std::vector<std::string> base_env_ids();
std::vector<std::string> wrapper_syntax();

/// Scale factor between raw episode returns and the 0..500 presentation scale used
/// for locomotion plots (recorded as metadata, never applied to data).
double presentation_scale(const Env& env);

}  // namespace qxlab::envs
