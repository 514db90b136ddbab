#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lspsel/harness.hpp"
#include "lspsel/io.hpp"

using namespace lspsel;

namespace {

Experiment open_experiment(const std::string& config_file, bool desk, unsigned threads) {
  ExperimentConfig cfg = load_config(config_file);
  if (desk) cfg.scale = kDeskScale;
  if (threads > 0) cfg.threads = threads;
  return load_experiment(cfg);
}

void print_precompute(const PrecomputeSummary& s) {
  std::printf("trials: %zu run, %zu cached; replays: %zu run, %zu cached; non-terminating replays: %zu\n",
              s.trials_run, s.trials_cached, s.replays_run, s.replays_cached, s.replay_fallbacks);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-map navigation testbed with replay-constrained policy selection"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* gen = app.add_subcommand("gen-envs", "Generate a scenario set");
  std::string family, out;
  int count = 0;
  std::uint64_t seed = 0;
  gen->add_option("--family", family, "maze_green, maze_gray, maze_random, office_base or office_diff")->required();
  gen->add_option("--count", count, "Number of scenarios")->required();
  gen->add_option("--seed", seed, "Set seed")->required();
  gen->add_option("--out", out, "Output directory")->required();

  auto* train = app.add_subcommand("train", "Write the shipped estimators, training the tabular ones");
  std::string est_dir;
  train->add_option("--out", est_dir, "Output directory")->required();
  train->add_option("--seed", seed, "Master seed for training scenarios");

  auto* pre = app.add_subcommand("precompute", "Run every trial and replay for a config (resumable)");
  std::string config;
  bool desk = false;
  pre->add_option("--config", config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
  pre->add_flag("--desk", desk, "Use the desk scale (40 scenarios, 30 trials, 50 deployments)");

  auto* dep = app.add_subcommand("deploy", "Run deployments from the precomputed cache");
  std::string mode = "constrained", bound = "sc";
  double p_short = 0.5;
  std::string logs_out;
  dep->add_option("--config", config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
  dep->add_option("--mode", mode, "ucb or constrained")->check(CLI::IsMember({"ucb", "constrained"}));
  dep->add_option("--bound", bound, "opt, sc or wgt")->check(CLI::IsMember({"opt", "sc", "wgt"}));
  dep->add_option("--p-short", p_short, "Weight of the optimistic bound (wgt only)")->check(CLI::Range(0.0, 1.0));
  dep->add_option("--logs", logs_out, "Logs directory (default: from config)");
  dep->add_flag("--desk", desk, "Use the desk scale (40 scenarios, 30 trials, 50 deployments)");

  auto* rep = app.add_subcommand("report", "Aggregate deployment logs into CSV files");
  std::string logs_dir;
  rep->add_option("--logs", logs_dir, "Logs directory")->required()->check(CLI::ExistingDirectory);
  rep->add_option("--out", out, "Output directory")->required();

  auto* desk_cmd = app.add_subcommand("desk", "Run the desk preset end to end for every family");
  desk_cmd->add_option("--out", out, "Output directory")->required();
  desk_cmd->add_option("--seed", seed, "Master seed");
  std::vector<std::string> desk_families;
  desk_cmd->add_option("--family", desk_families, "Restrict to these families");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const auto scenarios = generate_scenario_set(parse_family(family), count, seed, out, threads);
      std::printf("wrote %zu scenarios to %s\n", scenarios.size(), out.c_str());
    } else if (*train) {
      write_shipped_estimators(est_dir, seed, ScanParams{}, threads);
      std::printf("estimators in %s\n", est_dir.c_str());
    } else if (*pre) {
      print_precompute(precompute(open_experiment(config, desk, threads)));
    } else if (*dep) {
      const Experiment e = open_experiment(config, desk, threads);
      SelectorConfig sel = e.config.selector;
      sel.mode = parse_selector_mode(mode);
      sel.bound = {parse_bound_kind(bound), p_short};
      const auto [matrix, cache] = load_cache(e);
      const auto logs = run_deployments(e, matrix, cache, sel);
      const fs::path dir = write_logs(logs_out.empty() ? e.config.logs_dir : fs::path(logs_out),
                                      configuration_label(sel), logs, matrix);
      std::printf("wrote %zu deployment logs to %s\n", logs.size(), dir.string().c_str());
    } else if (*rep) {
      const Report r = report(logs_dir, out);
      for (const auto& c : r.configurations) {
        std::printf("%-24s final avg cost %9.3f  best single %9.3f  regret %9.3f\n", c.label.c_str(),
                    c.avg_cost.mean.back(), c.best_single_avg, c.regret.mean.back());
      }
    } else if (*desk_cmd) {
      std::vector<EnvFamily> fams;
      for (const auto& f : desk_families) fams.push_back(parse_family(f));
      for (const FamilyRun& run : run_desk(out, seed, threads, fams)) {
        std::printf("%s\n", std::string(to_string(run.family)).c_str());
        print_precompute(run.precompute);
        for (const auto& c : run.report.configurations) {
          std::printf("  %-24s final avg cost %9.3f  best single %9.3f  regret %9.3f\n", c.label.c_str(),
                      c.avg_cost.mean.back(), c.best_single_avg, c.regret.mean.back());
        }
      }
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
