#pragma once

// Experiment orchestration: precompute every (policy, scenario) trial and
// every replay once, then run many cheap deployments as table lookups, then
// reduce the logs to CSV reports.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lspsel/envgen.hpp"
#include "lspsel/estimators.hpp"
#include "lspsel/gridmap.hpp"
#include "lspsel/replay.hpp"
#include "lspsel/selection.hpp"

namespace lspsel {

namespace fs = std::filesystem;

struct Scale {
  int n_scenarios = 150;
  int n_trials = 100;
  int n_deployments = 200;
};

inline constexpr Scale kDeskScale{40, 30, 50};

struct ExperimentConfig {
  std::vector<fs::path> roster;  // estimator files
  fs::path scenario_dir;
  ScanParams sensing;
  SelectorConfig selector;
  Scale scale;
  std::uint64_t master_seed = 0;
  fs::path cache_dir;  // default: <config dir>/cache
  fs::path logs_dir;   // default: <config dir>/logs
  bool paired = true;  // UCB and constrained runs share scenario draws
  unsigned threads = 0;
};

/// Relative paths in the file are resolved against its directory.
ExperimentConfig load_config(const fs::path& file);
void save_config(const fs::path& file, const ExperimentConfig& config);

struct Experiment {
  ExperimentConfig config;
  std::vector<Estimator> roster;
  std::vector<Scenario> scenarios;  // first n_scenarios of the manifest
};

Experiment load_experiment(const ExperimentConfig& config);

/// gen-envs: writes <out>/<id>.json per scenario plus <out>/manifest.json.
/// Scenario i uses seed derive_seed(seed, EnvGen, i).
std::vector<Scenario> generate_scenario_set(EnvFamily family, int count, std::uint64_t seed, const fs::path& out,
                                            unsigned threads = 0);

struct CostMatrix {
  std::vector<std::string> policies;
  std::vector<std::string> scenario_ids;
  std::vector<std::string> environments;       // per scenario
  std::vector<std::vector<double>> cost;       // [policy][scenario]
  std::vector<std::vector<char>> reached;      // [policy][scenario]
};

struct ReplayCache {
  // [deployed][scenario] -> one outcome per roster policy, roster order
  std::vector<std::vector<std::vector<ReplayOutcome>>> outcomes;
};

// Replay counts cover alternative policies only; the self-replay of each
// record is computed and stored too but not counted.
struct PrecomputeSummary {
  std::size_t trials_run = 0;
  std::size_t trials_cached = 0;
  std::size_t replays_run = 0;
  std::size_t replays_cached = 0;
  std::size_t replay_fallbacks = 0;  // replay did not terminate; bounds set to 0
};

/// Resumable: existing trial and replay files are reused.
PrecomputeSummary precompute(const Experiment& experiment);

/// Throws IncompleteCache when any trial or replay file is missing.
std::pair<CostMatrix, ReplayCache> load_cache(const Experiment& experiment);

struct TrialLogEntry {
  long k = 0;
  std::size_t policy = 0;
  std::size_t scenario = 0;
  double cost = 0.0;
  std::vector<double> bounds;  // per roster policy; NaN for the deployed one
};

struct DeploymentLog {
  std::uint64_t seed = 0;
  std::vector<TrialLogEntry> trials;
};

std::string configuration_label(const SelectorConfig& selector);

std::vector<DeploymentLog> run_deployments(const Experiment& experiment, const CostMatrix& matrix,
                                           const ReplayCache& cache, const SelectorConfig& selector);

/// Writes <logs_dir>/<label>/deployment-NNNN.jsonl and <logs_dir>/cost_matrix.json.
fs::path write_logs(const fs::path& logs_dir, const std::string& label, const std::vector<DeploymentLog>& logs,
                    const CostMatrix& matrix);

struct SeriesStats {
  std::vector<double> mean, p10, p90;
};

struct ConfigurationReport {
  std::string label;
  SeriesStats avg_cost;
  SeriesStats regret;
  std::vector<double> mean_selections;  // per policy
  double best_single_avg = 0.0;  // mean over deployments of the hindsight-best policy's average cost
};

struct Report {
  std::vector<std::string> policies;
  std::vector<ConfigurationReport> configurations;  // sorted by label
};

/// Reads every configuration under `logs_dir` (subdirectories of
/// deployment-*.jsonl files, or such files directly) plus cost_matrix.json.
Report report(const fs::path& logs_dir, const fs::path& out_dir);

/// Linear interpolation between order statistics; q in [0, 1].
double percentile(std::vector<double> values, double q);

// Desk preset: every family, default rosters, kDeskScale, four selector
// configurations (ucb, constrained with each bound kind, weighted at 0.5).

struct FamilyRun {
  EnvFamily family;
  fs::path dir;
  std::vector<std::string> roster;
  PrecomputeSummary precompute;
  Report report;
};

/// Roster used by the desk preset for a family, as estimator names.
std::vector<std::string> desk_roster(EnvFamily family);

/// Trains (or reuses) the tabular estimators and writes all shipped
/// estimators to <dir>/<name>.json.
void write_shipped_estimators(const fs::path& dir, std::uint64_t master_seed, const ScanParams& sensing,
                              unsigned threads = 0);

std::vector<FamilyRun> run_desk(const fs::path& out, std::uint64_t master_seed, unsigned threads = 0,
                                std::vector<EnvFamily> families = {});


}  // namespace lspsel
