#include "qxlab/envs/registry.hpp"

#include <charconv>
#include <string>

#include "qxlab/envs/goal_push.hpp"
#include "qxlab/envs/loco.hpp"
#include "qxlab/envs/wrappers.hpp"
#include "qxlab/errors.hpp"

namespace qxlab::envs {

namespace {

double parse_arg(std::string_view part, std::string_view name) {
  // name(<number>)
  if (part.size() < name.size() + 3 || part.substr(0, name.size()) != name || part[name.size()] != '(' ||
      part.back() != ')') {
    throw ConfigError("malformed wrapper '" + std::string(part) + "'");
  }
  const std::string num(part.substr(name.size() + 1, part.size() - name.size() - 2));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(num, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != num.size() || num.empty()) throw ConfigError("bad number in wrapper '" + std::string(part) + "'");
  return v;
}

}  // namespace

std::unique_ptr<Env> make_env(std::string_view id, const EnvOptions& opts) {
  if (opts.episode_len == 0) throw ConfigError("episode_len must be >= 1");
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto plus = id.find('+', start);
    parts.push_back(id.substr(start, plus == std::string_view::npos ? std::string_view::npos : plus - start));
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }

  std::unique_ptr<Env> env;
  const auto base = parts.front();
  if (base == "sparse-loco") {
    env = std::make_unique<LocoEnv>(LocoReward::Sparse, opts.episode_len);
  } else if (base == "local-max") {
    env = std::make_unique<LocoEnv>(LocoReward::LocalMax, opts.episode_len);
  } else if (base == "goal-push") {
    env = std::make_unique<GoalPushEnv>(opts.episode_len);
  } else {
    throw ConfigError("unknown environment '" + std::string(base) + "'");
  }

  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto part = parts[i];
    if (part.starts_with("noisytv")) {
      env = std::make_unique<NoisyTvWrapper>(std::move(env), parse_arg(part, "noisytv"));
    } else if (part.starts_with("shift")) {
      env = std::make_unique<RewardShiftWrapper>(std::move(env), parse_arg(part, "shift"));
    } else {
      throw ConfigError("unknown environment wrapper '" + std::string(part) + "'");
    }
  }
  return env;
}

std::vector<std::string> base_env_ids() { return {"sparse-loco", "local-max", "goal-push"}; }

std::vector<std::string> wrapper_syntax() { return {"+noisytv(k)", "+shift(d)"}; }

double presentation_scale(const Env& env) { return 500.0 / static_cast<double>(env.spec().episode_len); }

}  // namespace qxlab::envs
