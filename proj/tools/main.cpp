#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "qxlab/agents/config.hpp"
#include "qxlab/envs/registry.hpp"
#include "qxlab/errors.hpp"
#include "qxlab/harness/config.hpp"
#include "qxlab/harness/experiment.hpp"
#include "qxlab/harness/plot.hpp"
#include "qxlab/harness/summary.hpp"
#include "qxlab/harness/sweep.hpp"
#include "qxlab/nn/zero_fit.hpp"

using namespace qxlab;
using namespace qxlab::harness;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0, kConfigError = 1, kRuntimeError = 2;

// Flags shared by the commands that build an ExperimentConfig.
struct ExperimentFlags {
  std::string config_file;
  bool paper_scale = false;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "JSON config tree (keys as below, nested by '.')")->check(CLI::ExistingFile);
    cmd->add_flag("--paper-scale", paper_scale, "3x256 nets, full CEM, 200-step episodes, paper episode counts");
    for (const auto& f : config_fields()) {
      options[f.key] = cmd->add_option("--" + f.key, values[f.key], f.help + "  [" + f.key + "]")
                           ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
    cmd->footer(
        "Every --<key> flag sets the config key of the same name. Precedence: defaults, then --paper-scale, "
        "then --config, then flags. The resolved values are written to <out>/config.resolved.txt.");
  }

  bool given(const std::string& key) const { return options.at(key)->count() > 0; }

  ExperimentConfig apply_sources(ExperimentConfig cfg) const {
    if (!config_file.empty()) apply_json(cfg, read_text(config_file));
    for (const auto& f : config_fields()) {
      if (given(f.key)) set_field(cfg, f.key, values.at(f.key));
    }
    return cfg;
  }

  /// Empty when neither the config file nor the flags name an environment.
  std::string chosen_env() const {
    ExperimentConfig probe;
    probe.env.clear();
    return apply_sources(probe).env;
  }

  ExperimentConfig build() const {
    ExperimentConfig cfg;
    if (paper_scale) {
      const auto env = chosen_env();
      cfg.agent = agents::AgentConfig::paper_scale();
      cfg.episode_len = 200;
      cfg.n_episodes = env.starts_with("goal-push") ? 50000 : 5000;
    }
    return apply_sources(cfg);
  }
};

RunOptions run_options() {
  RunOptions opts;
  opts.progress = [](const std::string& msg) { std::fprintf(stderr, "%s\n", msg.c_str()); };
  return opts;
}

int finish(const fs::path& dir, std::size_t failures) {
  const auto summary = summarize(dir);
  write_summary(dir, summary);
  std::cout << summary_table(summary);
  if (failures > 0) {
    std::fprintf(stderr, "%zu seed run(s) failed; see *.error under %s\n", failures, dir.string().c_str());
    return kRuntimeError;
  }
  return kOk;
}

int cmd_list() {
  std::cout << "methods:\n";
  for (const auto& m : agents::method_ids()) std::cout << "  " << m << "\n";
  std::cout << "envs:\n";
  for (const auto& e : envs::base_env_ids()) std::cout << "  " << e << "\n";
  std::cout << "wrappers (append to an env id, applied left to right):\n";
  for (const auto& w : envs::wrapper_syntax()) std::cout << "  " << w << "\n";
  std::cout << "  e.g. sparse-loco+noisytv(1)+shift(1)\n";
  std::cout << "sweep grids:\n";
  for (const auto& g : grid_names()) std::cout << "  " << g << " (" << named_grid(g).cell_count() << " cells)\n";
  std::cout << "ablations:\n  1step\n  value\n  qxrnd\n  signed\n";
  return kOk;
}

std::string ablation_method(const std::string& which) {
  if (which == "1step") return "qxplore-1step";
  if (which == "value") return "qxplore-value";
  if (which == "qxrnd") return "qxplore-rnd";
  if (which == "signed") return "qxplore-signed";
  throw ConfigError("unknown ablation '" + which + "' (expected 1step, value, qxrnd or signed)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qxlab: TD-error driven exploration experiments on small sparse-reward tasks"};
  app.require_subcommand(1, 1);

  ExperimentFlags train_flags, sweep_flags, ablate_flags;
  auto* train = app.add_subcommand("train", "train one method on one env over several seeds");
  train_flags.attach(train);

  auto* sweep = app.add_subcommand("sweep", "run a preset hyperparameter grid");
  std::string grid;
  sweep->add_option("--grid", grid, "lr | ratio | rnd")->required()->check(CLI::IsMember({"lr", "ratio", "rnd"}));
  sweep_flags.attach(sweep);

  auto* ablate = app.add_subcommand("ablate", "run an ablation of the dual-policy method");
  std::string which;
  ablate->add_option("--which", which, "1step | value | qxrnd | signed")
      ->required()
      ->check(CLI::IsMember({"1step", "value", "qxrnd", "signed"}));
  ablate_flags.attach(ablate);

  auto* zerofit = app.add_subcommand("demo-zerofit", "fit nets to f(x) = 0 and measure them off the training support");
  nn::ZeroFitConfig zf;
  zf.hidden_dims = {64, 64};
  std::string zf_out = "runs/zerofit";
  bool zf_paper = false;
  zerofit->add_option("--nets", zf.n_nets, "number of independent nets")->capture_default_str();
  zerofit->add_option("--seed", zf.seed, "base seed")->capture_default_str();
  zerofit->add_option("--hidden", zf.hidden_dims, "hidden widths")->delimiter(',')->capture_default_str();
  zerofit->add_option("--max-steps", zf.max_steps, "Adam steps per net before giving up")->capture_default_str();
  zerofit->add_option("--mse", zf.mse_threshold, "convergence threshold")->capture_default_str();
  zerofit->add_option("--out", zf_out, "output directory")->capture_default_str();
  zerofit->add_flag("--paper-scale", zf_paper, "3x256 nets");

  auto* eval = app.add_subcommand("eval", "reload the checkpoints of a finished train run and evaluate them");
  std::string eval_in;
  std::size_t eval_episodes = 50;
  eval->add_option("--in", eval_in, "experiment directory")->required();
  eval->add_option("--episodes", eval_episodes, "evaluation episodes per seed")->capture_default_str();

  auto* plot = app.add_subcommand("plot", "SVG charts from aggregate CSVs");
  std::string plot_in, plot_out;
  plot->add_option("--in", plot_in, "experiment directory, or a directory of experiments to overlay")->required();
  plot->add_option("--out", plot_out, "chart directory (default <in>/plots)");

  auto* list = app.add_subcommand("list", "registered methods, envs, wrappers and grids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n";
    const auto active = app.get_subcommands();
    std::cerr << (active.empty() ? app.help() : active.front()->help());
    return kConfigError;
  }

  try {
    if (list->parsed()) return cmd_list();

    if (train->parsed()) {
      if (train_flags.chosen_env().empty()) {
        std::cerr << "train: --env is required\n\n" << train->help();
        return kConfigError;
      }
      const auto cfg = train_flags.build();
      cfg.validate();
      const auto res = run_experiment(cfg, run_options());
      return finish(cfg.out_dir, res.failures());
    }

    if (sweep->parsed()) {
      auto cfg = sweep_flags.build();
      if (!sweep_flags.given("method")) cfg.method = grid_method(grid);
      cfg.validate();
      const auto board = run_sweep(cfg, named_grid(grid), run_options());
      std::size_t failures = 0;
      for (const auto& e : board) failures += e.failed_seeds;
      return finish(cfg.out_dir, failures);
    }

    if (ablate->parsed()) {
      auto cfg = ablate_flags.build();
      cfg.method = ablation_method(which);
      if (!ablate_flags.given("out")) cfg.out_dir = fs::path("runs") / cfg.method;
      cfg.validate();
      const auto res = run_experiment(cfg, run_options());
      return finish(cfg.out_dir, res.failures());
    }

    if (zerofit->parsed()) {
      if (zf_paper) zf.hidden_dims = {256, 256, 256};
      if (zf.n_nets == 0) throw ConfigError("--nets must be >= 1");
      const auto res = nn::zero_fit_demo(zf);
      nn::write_zero_fit_csv(res, zf_out);
      std::printf("converged nets: %zu of %zu\n", res.curves.size(), zf.n_nets);
      std::printf("mean |f| on the support: %.3g\n", res.mean_inside_abs);
      std::printf("mean max |f| at |x| >= %.1f: %.3g\n", zf.outside_abs, res.mean_outside_max);
      if (res.mean_inside_abs > 0.0) std::printf("ratio: %.1f\n", res.mean_outside_max / res.mean_inside_abs);
      return res.curves.empty() ? kRuntimeError : kOk;
    }

    if (eval->parsed()) {
      std::vector<std::uint64_t> missing;
      const auto evs = evaluate_checkpoints(eval_in, eval_episodes, &missing);
      for (const auto& e : evs)
        std::printf("seed %llu: return %.2f success %.2f position %.2f\n", static_cast<unsigned long long>(e.seed),
                    e.mean_return, e.success_rate, e.mean_position);
      for (auto s : missing) std::fprintf(stderr, "seed %llu: no checkpoint\n", static_cast<unsigned long long>(s));
      return missing.empty() ? kOk : kRuntimeError;
    }

    if (plot->parsed()) {
      const fs::path in = plot_in;
      const fs::path out = plot_out.empty() ? in / "plots" : fs::path(plot_out);
      const auto files = emit_plots(find_aggregates(in), out);
      for (const auto& f : files) std::cout << f.string() << "\n";
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kConfigError;
}
