#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "qxlab/agents/config.hpp"

namespace qxlab::harness {

struct ExperimentConfig {
  std::string method = "qxplore";
  std::string env = "sparse-loco";
  std::size_t episode_len = 0;  // 0: desk default for the base env
  agents::AgentConfig agent = agents::AgentConfig::desk();
  std::size_t n_seeds = 5;
  std::uint64_t seed_base = 1;  // seeds are seed_base, seed_base + 1, ...
  std::size_t n_episodes = 300;
  std::size_t eval_every = 1;  // 0 disables evaluation rows
  std::size_t eval_episodes = 1;
  double smoothing_sigma = 10.0;  // episodes
  std::string milestone_metric = "success";
  std::vector<double> milestones{0.5, 0.8};
  std::size_t milestone_window = 10;
  std::size_t final_window = 50;
  std::filesystem::path out_dir = "runs/qxlab";

  std::vector<std::uint64_t> seeds() const;
  std::size_t resolved_episode_len() const;
  void validate() const;
};

/// Episode length used when none is configured.
std::size_t desk_episode_len(const std::string& env_id);

/// One settable configuration key. Keys are dotted paths ("agent.q_lr"); the JSON
/// tree and the command line address the same keys.
struct ConfigField {
  std::string key;
  std::string help;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<ConfigField>& config_fields();

void set_field(ExperimentConfig& cfg, const std::string& key, const std::string& value);
std::string get_field(const ExperimentConfig& cfg, const std::string& key);

/// Applies every leaf of a JSON tree; nested objects become dotted keys.
void apply_json(ExperimentConfig& cfg, const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& file);

/// `key = value` lines for every field, in registry order.
std::string resolved_text(const ExperimentConfig& cfg);
/// Inverse of resolved_text.
ExperimentConfig parse_resolved(const std::string& text);

/// Shortest round-tripping decimal form.
std::string format_double(double v);

}  // namespace qxlab::harness
