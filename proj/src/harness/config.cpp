#include "qxlab/harness/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qxlab/envs/registry.hpp"
#include "qxlab/errors.hpp"

namespace qxlab::harness {

namespace {

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : v) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '[' && c != ']') {
      cur += c;
    }
  }
  if (!cur.empty() || !parts.empty()) parts.push_back(cur);
  return parts;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F fmt) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt(xs[i]);
  }
  return out;
}

using Cfg = ExperimentConfig;

ConfigField dbl(std::string key, std::string help, double Cfg::*member) {
  return {key, std::move(help), [key, member](Cfg& c, const std::string& v) { c.*member = to_double(key, v); },
          [member](const Cfg& c) { return format_double(c.*member); }};
}

template <class Get>
ConfigField dbl_at(std::string key, std::string help, Get get) {
  return {key, std::move(help), [key, get](Cfg& c, const std::string& v) { get(c) = to_double(key, v); },
          [get](const Cfg& c) { return format_double(get(const_cast<Cfg&>(c))); }};
}

template <class Get>
ConfigField size_at(std::string key, std::string help, Get get) {
  return {key, std::move(help),
          [key, get](Cfg& c, const std::string& v) { get(c) = static_cast<std::size_t>(to_uint(key, v)); },
          [get](const Cfg& c) { return std::to_string(get(const_cast<Cfg&>(c))); }};
}

template <class Get>
ConfigField bool_at(std::string key, std::string help, Get get) {
  return {key, std::move(help), [key, get](Cfg& c, const std::string& v) { get(c) = to_bool(key, v); },
          [get](const Cfg& c) { return std::string(get(const_cast<Cfg&>(c)) ? "true" : "false"); }};
}

template <class Get>
void add_cem(std::vector<ConfigField>& f, const std::string& prefix, const std::string& what, Get get) {
  f.push_back(size_at(prefix + ".iterations", what + " CEM iterations",
                      [get](Cfg& c) -> std::size_t& { return get(c).iterations; }));
  f.push_back(size_at(prefix + ".samples", what + " CEM samples per iteration",
                      [get](Cfg& c) -> std::size_t& { return get(c).num_samples; }));
  f.push_back(size_at(prefix + ".top_k", what + " CEM elite count", [get](Cfg& c) -> std::size_t& { return get(c).top_k; }));
}

std::vector<ConfigField> build_fields() {
  std::vector<ConfigField> f;
  f.push_back({"method", "agent method id",
               [](Cfg& c, const std::string& v) { c.method = v; }, [](const Cfg& c) { return c.method; }});
  f.push_back({"env", "environment id with optional +wrapper suffixes",
               [](Cfg& c, const std::string& v) { c.env = v; }, [](const Cfg& c) { return c.env; }});
  f.push_back(size_at("episode_len", "steps per episode (0 = desk default for the env)",
                      [](Cfg& c) -> std::size_t& { return c.episode_len; }));
  f.push_back(size_at("seeds", "number of independent seeds", [](Cfg& c) -> std::size_t& { return c.n_seeds; }));
  f.push_back({"seed_base", "first seed",
               [](Cfg& c, const std::string& v) { c.seed_base = to_uint("seed_base", v); },
               [](const Cfg& c) { return std::to_string(c.seed_base); }});
  f.push_back(size_at("episodes", "training episodes per seed", [](Cfg& c) -> std::size_t& { return c.n_episodes; }));
  f.push_back(size_at("eval_every", "evaluate the exploit policy every k episodes (0 = never)",
                      [](Cfg& c) -> std::size_t& { return c.eval_every; }));
  f.push_back(size_at("eval_episodes", "episodes per evaluation", [](Cfg& c) -> std::size_t& { return c.eval_episodes; }));
  f.push_back(dbl("smoothing_sigma", "Gaussian smoothing width in episodes", &Cfg::smoothing_sigma));
  f.push_back({"milestone_metric", "metric column used for episodes-to-milestone",
               [](Cfg& c, const std::string& v) { c.milestone_metric = v; },
               [](const Cfg& c) { return c.milestone_metric; }});
  f.push_back({"milestones", "comma-separated milestone values",
               [](Cfg& c, const std::string& v) {
                 c.milestones.clear();
                 for (const auto& p : split_list(v)) c.milestones.push_back(to_double("milestones", p));
               },
               [](const Cfg& c) { return join(c.milestones, format_double); }});
  f.push_back(size_at("milestone_window", "trailing episodes averaged before a milestone test",
                      [](Cfg& c) -> std::size_t& { return c.milestone_window; }));
  f.push_back(size_at("final_window", "trailing episodes in the final success rate",
                      [](Cfg& c) -> std::size_t& { return c.final_window; }));
  f.push_back({"out", "output directory",
               [](Cfg& c, const std::string& v) { c.out_dir = v; }, [](const Cfg& c) { return c.out_dir.string(); }});

  auto A = [](Cfg& c) -> agents::AgentConfig& { return c.agent; };
  f.push_back(dbl_at("agent.q_lr", "extrinsic Q learning rate", [A](Cfg& c) -> double& { return A(c).q_lr; }));
  f.push_back(dbl_at("agent.qx_lr", "exploration Q learning rate", [A](Cfg& c) -> double& { return A(c).qx_lr; }));
  f.push_back(size_at("agent.batch_size", "training batch rows", [A](Cfg& c) -> std::size_t& { return A(c).batch_size; }));
  f.push_back(dbl_at("agent.gamma", "discount", [A](Cfg& c) -> double& { return A(c).gamma; }));
  f.push_back(dbl_at("agent.tau", "Polyak rate", [A](Cfg& c) -> double& { return A(c).tau; }));
  f.push_back(size_at("agent.target_update_freq", "training steps per target update",
                      [A](Cfg& c) -> std::size_t& { return A(c).target_update_freq; }));
  f.push_back(dbl_at("agent.policy_noise", "target action smoothing stdev",
                     [A](Cfg& c) -> double& { return A(c).policy_noise; }));
  f.push_back(dbl_at("agent.noise_clip", "target action smoothing clip", [A](Cfg& c) -> double& { return A(c).noise_clip; }));
  f.push_back(size_at("agent.train_steps_per_env_step", "gradient steps per environment step",
                      [A](Cfg& c) -> std::size_t& { return A(c).train_steps_per_env_step; }));
  f.push_back(dbl_at("agent.ratio_q", "self-collected fraction of the Q batch", [A](Cfg& c) -> double& { return A(c).ratio_q; }));
  f.push_back(
      dbl_at("agent.ratio_qx", "self-collected fraction of the Q_x batch", [A](Cfg& c) -> double& { return A(c).ratio_qx; }));
  f.push_back(dbl_at("agent.beta_q", "initial output bias of Q", [A](Cfg& c) -> double& { return A(c).beta_q; }));
  f.push_back({"agent.hidden", "comma-separated hidden widths",
               [](Cfg& c, const std::string& v) {
                 c.agent.hidden.clear();
                 for (const auto& p : split_list(v)) c.agent.hidden.push_back(static_cast<std::size_t>(to_uint("agent.hidden", p)));
               },
               [](const Cfg& c) { return join(c.agent.hidden, [](std::size_t h) { return std::to_string(h); }); }});
  f.push_back({"agent.init", "weight init scheme",
               [](Cfg& c, const std::string& v) {
                 try {
                   c.agent.init = nn::parse_init_tag(v);
                 } catch (const std::exception& e) {
                   throw ConfigError(std::string("agent.init: ") + e.what());
                 }
               },
               [](const Cfg& c) { return std::string(nn::to_string(c.agent.init)); }});
  f.push_back(dbl_at("agent.alpha", "extrinsic weight of the single-policy value ablation",
                     [A](Cfg& c) -> double& { return A(c).alpha; }));
  f.push_back(size_at("agent.warmup_steps", "uniform-random steps before training",
                      [A](Cfg& c) -> std::size_t& { return A(c).warmup_steps; }));
  f.push_back(size_at("agent.buffer_capacity", "replay capacity per buffer",
                      [A](Cfg& c) -> std::size_t& { return A(c).buffer_capacity; }));
  add_cem(f, "agent.act_cem", "acting", [](Cfg& c) -> policy::CemConfig& { return c.agent.act_cem; });
  add_cem(f, "agent.target_cem", "bootstrap-target", [](Cfg& c) -> policy::CemConfig& { return c.agent.target_cem; });
  f.push_back(bool_at("agent.td.signed", "use the signed TD-error as r_x", [](Cfg& c) -> bool& { return c.agent.td.signed_error; }));
  f.push_back({"agent.td.twin_reduction", "mean-abs | first-twin",
               [](Cfg& c, const std::string& v) {
                 if (v == "mean-abs") c.agent.td.twin_reduction = intrinsic::TwinReduction::MeanAbs;
                 else if (v == "first-twin") c.agent.td.twin_reduction = intrinsic::TwinReduction::FirstTwin;
                 else throw ConfigError("agent.td.twin_reduction: expected mean-abs or first-twin, got '" + v + "'");
               },
               [](const Cfg& c) {
                 return std::string(c.agent.td.twin_reduction == intrinsic::TwinReduction::MeanAbs ? "mean-abs" : "first-twin");
               }});
  f.push_back(size_at("agent.rnd.embed_dim", "RND embedding width", [](Cfg& c) -> std::size_t& { return c.agent.rnd.embed_dim; }));
  f.push_back(
      dbl_at("agent.rnd.predictor_lr", "RND predictor learning rate", [](Cfg& c) -> double& { return c.agent.rnd.predictor_lr; }));
  f.push_back(dbl_at("agent.rnd.extrinsic_weight", "RND extrinsic reward weight",
                     [](Cfg& c) -> double& { return c.agent.rnd.extrinsic_weight; }));
  f.push_back(dbl_at("agent.rnd.intrinsic_weight", "RND intrinsic reward weight",
                     [](Cfg& c) -> double& { return c.agent.rnd.intrinsic_weight; }));
  f.push_back(dbl_at("agent.dora.epsilon", "DORA random-action probability", [](Cfg& c) -> double& { return c.agent.dora.epsilon; }));
  f.push_back(dbl_at("agent.dora.beta", "DORA bonus scale", [](Cfg& c) -> double& { return c.agent.dora.beta; }));
  f.push_back(dbl_at("agent.dora.gamma_e", "DORA E-value discount", [](Cfg& c) -> double& { return c.agent.dora.gamma_e; }));
  f.push_back(dbl_at("agent.dora.init_logit", "DORA initial E logit", [](Cfg& c) -> double& { return c.agent.dora.init_logit; }));
  f.push_back(bool_at("agent.dora.summed_objective", "DORA acts on Q + bonus",
                      [](Cfg& c) -> bool& { return c.agent.dora.summed_objective; }));
  f.push_back(dbl_at("agent.eps.epsilon", "epsilon-greedy random-action probability",
                     [](Cfg& c) -> double& { return c.agent.eps.epsilon; }));
  return f;
}

void flatten(const nlohmann::json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(*it, prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    return;
  }
  std::string v;
  if (j.is_string()) {
    v = j.get<std::string>();
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) v += ',';
      v += j[i].is_string() ? j[i].get<std::string>() : j[i].dump();
    }
  } else if (j.is_number_float()) {
    v = format_double(j.get<double>());
  } else {
    v = j.dump();
  }
  out.emplace_back(prefix, v);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::size_t desk_episode_len(const std::string& env_id) {
  const auto base = env_id.substr(0, env_id.find('+'));
  if (base == "goal-push") return 50;
  return 30;
}

std::vector<std::uint64_t> ExperimentConfig::seeds() const {
  std::vector<std::uint64_t> s(n_seeds);
  for (std::size_t i = 0; i < n_seeds; ++i) s[i] = seed_base + i;
  return s;
}

std::size_t ExperimentConfig::resolved_episode_len() const {
  return episode_len ? episode_len : desk_episode_len(env);
}

void ExperimentConfig::validate() const {
  (void)agents::parse_method(method);
  (void)envs::make_env(env, {resolved_episode_len()});
  agent.validate();
  if (n_seeds == 0) throw ConfigError("seeds must be >= 1");
  if (n_episodes == 0) throw ConfigError("episodes must be >= 1");
  if (eval_every > 0 && eval_episodes == 0) throw ConfigError("eval_episodes must be >= 1 when evaluating");
  if (!(smoothing_sigma >= 0.0)) throw ConfigError("smoothing_sigma must be >= 0");
  if (milestone_window == 0 || final_window == 0) throw ConfigError("milestone and final windows must be >= 1");
  if (out_dir.empty()) throw ConfigError("out must not be empty");
}

const std::vector<ConfigField>& config_fields() {
  static const std::vector<ConfigField> fields = build_fields();
  return fields;
}

void set_field(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& f : config_fields()) {
    if (f.key == key) {
      f.set(cfg, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

std::string get_field(const ExperimentConfig& cfg, const std::string& key) {
  for (const auto& f : config_fields()) {
    if (f.key == key) return f.get(cfg);
  }
  throw ConfigError("unknown config key '" + key + "'");
}

void apply_json(ExperimentConfig& cfg, const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file: top level must be an object");
  std::vector<std::pair<std::string, std::string>> leaves;
  flatten(j, "", leaves);
  for (const auto& [k, v] : leaves) set_field(cfg, k, v);
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg;
  apply_json(cfg, ss.str());
  return cfg;
}

std::string resolved_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& f : config_fields()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

ExperimentConfig parse_resolved(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw ParseError("resolved config line " + std::to_string(lineno) + ": expected 'key = value'");
    set_field(cfg, line.substr(0, eq), line.substr(eq + 3));
  }
  return cfg;
}

}  // namespace qxlab::harness
