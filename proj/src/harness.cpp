#include "lspsel/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "lspsel/io.hpp"
#include "lspsel/parallel.hpp"
#include "lspsel/planner.hpp"
#include "lspsel/rng.hpp"

namespace lspsel {

using io::json;

namespace {

fs::path resolve(const fs::path& base, const fs::path& p) { return p.is_absolute() ? p : base / p; }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

ExperimentConfig load_config(const fs::path& file) {
  const json j = io::read_json(file);
  const fs::path base = file.has_parent_path() ? file.parent_path() : fs::path(".");
  ExperimentConfig c;
  try {
    for (const auto& r : j.at("roster")) c.roster.push_back(resolve(base, r.get<std::string>()));
    c.scenario_dir = resolve(base, j.at("scenario_dir").get<std::string>());
    if (j.contains("sensing")) {
      c.sensing.range = j["sensing"].value("range", c.sensing.range);
      c.sensing.n_rays = j["sensing"].value("n_rays", c.sensing.n_rays);
    }
    if (j.contains("selector")) {
      const json& s = j["selector"];
      c.selector.c = s.value("c", c.selector.c);
      if (s.contains("mode")) c.selector.mode = parse_selector_mode(s["mode"].get<std::string>());
      if (s.contains("bound")) c.selector.bound.kind = parse_bound_kind(s["bound"].get<std::string>());
      c.selector.bound.p_short = s.value("p_short", c.selector.bound.p_short);
    }
    if (j.contains("scale")) {
      c.scale.n_scenarios = j["scale"].value("n_scenarios", c.scale.n_scenarios);
      c.scale.n_trials = j["scale"].value("n_trials", c.scale.n_trials);
      c.scale.n_deployments = j["scale"].value("n_deployments", c.scale.n_deployments);
    }
    c.master_seed = j.value("master_seed", std::uint64_t{0});
    c.cache_dir = resolve(base, j.value("cache_dir", std::string("cache")));
    c.logs_dir = resolve(base, j.value("logs_dir", std::string("logs")));
    c.paired = j.value("paired", true);
    c.threads = j.value("threads", 0u);
  } catch (const io::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, file.string() + ": " + e.what());
  }
  if (c.roster.empty()) throw Error(ErrorCode::InvalidArgument, "config roster is empty");
  if (c.scale.n_trials > c.scale.n_scenarios || c.scale.n_trials < 1 || c.scale.n_deployments < 1) {
    throw Error(ErrorCode::InvalidArgument, "scale needs 1 <= n_trials <= n_scenarios and n_deployments >= 1");
  }
  return c;
}

void save_config(const fs::path& file, const ExperimentConfig& c) {
  const fs::path base = file.has_parent_path() ? file.parent_path() : fs::path(".");
  auto rel = [&](const fs::path& p) { return p.lexically_relative(base).generic_string(); };
  json roster = json::array();
  for (const auto& r : c.roster) roster.push_back(rel(r));
  io::write_json(file, json{{"roster", roster},
                            {"scenario_dir", rel(c.scenario_dir)},
                            {"sensing", {{"range", c.sensing.range}, {"n_rays", c.sensing.n_rays}}},
                            {"selector",
                             {{"c", c.selector.c},
                              {"mode", std::string(to_string(c.selector.mode))},
                              {"bound", std::string(to_string(c.selector.bound.kind))},
                              {"p_short", c.selector.bound.p_short}}},
                            {"scale",
                             {{"n_scenarios", c.scale.n_scenarios},
                              {"n_trials", c.scale.n_trials},
                              {"n_deployments", c.scale.n_deployments}}},
                            {"master_seed", c.master_seed},
                            {"cache_dir", rel(c.cache_dir)},
                            {"logs_dir", rel(c.logs_dir)},
                            {"paired", c.paired}});
}

Experiment load_experiment(const ExperimentConfig& config) {
  Experiment e;
  e.config = config;
  std::set<std::string> names;
  for (const auto& f : config.roster) {
    e.roster.push_back(io::estimator_from_json(io::read_json(f)));
    if (!names.insert(e.roster.back().name).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate policy name '" + e.roster.back().name + "'");
    }
  }
  const json manifest = io::read_json(config.scenario_dir / "manifest.json");
  const auto& files = manifest.at("files");
  if (files.size() < static_cast<std::size_t>(config.scale.n_scenarios)) {
    throw Error(ErrorCode::InvalidArgument, "scenario set has " + std::to_string(files.size()) + " scenarios, " +
                                                std::to_string(config.scale.n_scenarios) + " required");
  }
  e.scenarios.resize(static_cast<std::size_t>(config.scale.n_scenarios));
  parallel_for(e.scenarios.size(), config.threads, [&](std::size_t i) {
    e.scenarios[i] = io::scenario_from_json(io::read_json(config.scenario_dir / files[i].get<std::string>()));
  });
  return e;
}

std::vector<Scenario> generate_scenario_set(EnvFamily family, int count, std::uint64_t seed, const fs::path& out,
                                            unsigned threads) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be positive");
  std::vector<Scenario> scenarios(static_cast<std::size_t>(count));
  parallel_for(scenarios.size(), threads, [&](std::size_t i) {
    scenarios[i] = generate_scenario(family, derive_seed(seed, SeedStream::EnvGen, i));
    io::write_json(out / (scenarios[i].id + ".json"), io::scenario_to_json(scenarios[i]));
  });
  json seeds = json::array();
  json files = json::array();
  for (const auto& s : scenarios) {
    seeds.push_back(s.seed);
    files.push_back(s.id + ".json");
  }
  io::write_json(out / "manifest.json", json{{"family", std::string(to_string(family))},
                                             {"master_seed", seed},
                                             {"seeds", seeds},
                                             {"files", files}});
  return scenarios;
}

namespace {

fs::path trial_path(const Experiment& e, std::size_t p, std::size_t s) {
  return e.config.cache_dir / "trials" / e.roster[p].name / (e.scenarios[s].id + ".json");
}

fs::path replay_path(const Experiment& e, std::size_t p, std::size_t s) {
  return e.config.cache_dir / "replays" / e.roster[p].name / (e.scenarios[s].id + ".jsonl");
}

json matrix_to_json(const CostMatrix& m) {
  return json{{"policies", m.policies},
              {"scenario_ids", m.scenario_ids},
              {"environments", m.environments},
              {"cost", m.cost},
              {"reached", m.reached}};
}

CostMatrix matrix_from_json(const json& j) {
  CostMatrix m;
  m.policies = j.at("policies").get<std::vector<std::string>>();
  m.scenario_ids = j.at("scenario_ids").get<std::vector<std::string>>();
  m.environments = j.at("environments").get<std::vector<std::string>>();
  m.cost = j.at("cost").get<std::vector<std::vector<double>>>();
  m.reached = j.at("reached").get<std::vector<std::vector<char>>>();
  return m;
}

}  // namespace

PrecomputeSummary precompute(const Experiment& e) {
  const std::size_t P = e.roster.size();
  const std::size_t S = e.scenarios.size();
  struct Counts {
    bool trial_run = false, replay_run = false;
    std::size_t fallbacks = 0;
  };
  std::vector<Counts> counts(P * S);

  parallel_for(P * S, e.config.threads, [&](std::size_t task) {
    const std::size_t p = task / S;
    const std::size_t s = task % S;
    const Scenario& sc = e.scenarios[s];
    const fs::path tp = trial_path(e, p, s);
    const fs::path rp = replay_path(e, p, s);
    const bool have_trial = fs::exists(tp);
    if (have_trial && fs::exists(rp)) return;

    TrialRecord record;
    if (have_trial) {
      record = io::record_from_json(io::read_json(tp));
    } else {
      record = navigate_trial(sc, e.roster[p], e.config.sensing).second;
      io::write_json(tp, io::record_to_json(record));
      counts[task].trial_run = true;
    }

    std::string rows;
    for (std::size_t a = 0; a < P; ++a) {
      ReplayOutcome out;
      try {
        out = replay_policy(record, e.roster[a], sc.goal, e.config.sensing);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::ReplayNonTermination) throw;
        // 0 is a valid, uninformative lower bound
        out.policy = e.roster[a].name;
        out.scenario_id = sc.id;
        ++counts[task].fallbacks;
      }
      rows += io::replay_row(out, e.roster[p].name).dump() + "\n";
    }
    io::write_text(rp, rows);
    counts[task].replay_run = true;
  });

  PrecomputeSummary sum;
  for (const auto& c : counts) {
    (c.trial_run ? sum.trials_run : sum.trials_cached) += 1;
    (c.replay_run ? sum.replays_run : sum.replays_cached) += P - 1;
    sum.replay_fallbacks += c.fallbacks;
  }

  const auto [matrix, cache] = load_cache(e);
  io::write_json(e.config.cache_dir / "cost_matrix.json", matrix_to_json(matrix));
  return sum;
}

std::pair<CostMatrix, ReplayCache> load_cache(const Experiment& e) {
  const std::size_t P = e.roster.size();
  const std::size_t S = e.scenarios.size();
  CostMatrix m;
  for (const auto& r : e.roster) m.policies.push_back(r.name);
  for (const auto& s : e.scenarios) {
    m.scenario_ids.push_back(s.id);
    m.environments.emplace_back(to_string(s.family));
  }
  m.cost.assign(P, std::vector<double>(S, kNaN));
  m.reached.assign(P, std::vector<char>(S, 0));
  ReplayCache cache;
  cache.outcomes.assign(P, std::vector<std::vector<ReplayOutcome>>(S));

  parallel_for(P * S, e.config.threads, [&](std::size_t task) {
    const std::size_t p = task / S;
    const std::size_t s = task % S;
    const fs::path tp = trial_path(e, p, s);
    const fs::path rp = replay_path(e, p, s);
    if (!fs::exists(tp) || !fs::exists(rp)) {
      throw Error(ErrorCode::IncompleteCache, "missing precomputed output for " + e.roster[p].name + " on " +
                                                  e.scenarios[s].id + "; run precompute");
    }
    // Only the summary fields are needed here; skip parsing the footprints.
    const json trial = io::read_json(tp);
    m.cost[p][s] = trial.at("cost").get<double>();
    m.reached[p][s] = trial.at("reached").get<bool>() ? 1 : 0;
    for (const json& row : io::read_json_lines(rp)) cache.outcomes[p][s].push_back(io::replay_from_row(row));
    auto& outs = cache.outcomes[p][s];
    if (outs.size() != P) throw Error(ErrorCode::IncompleteCache, rp.string() + " has the wrong number of rows");
    for (std::size_t a = 0; a < P; ++a) {
      if (outs[a].policy != e.roster[a].name) {
        throw Error(ErrorCode::IncompleteCache, rp.string() + " does not match the roster");
      }
    }
  });
  return {std::move(m), std::move(cache)};
}

std::string configuration_label(const SelectorConfig& selector) {
  if (selector.mode == SelectorMode::Ucb) return "ucb";
  std::string label = "constrained-" + std::string(to_string(selector.bound.kind));
  if (selector.bound.kind == BoundKind::Weighted) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "-p%.2f", selector.bound.p_short);
    label += buf;
  }
  return label;
}

std::vector<DeploymentLog> run_deployments(const Experiment& e, const CostMatrix& matrix, const ReplayCache& cache,
                                           const SelectorConfig& selector) {
  const std::size_t P = e.roster.size();
  const std::size_t S = e.scenarios.size();
  if (matrix.cost.size() != P || cache.outcomes.size() != P) {
    throw Error(ErrorCode::IncompleteCache, "cache does not match the roster");
  }
  const auto n_dep = static_cast<std::size_t>(e.config.scale.n_deployments);
  const auto n_trials = static_cast<std::size_t>(e.config.scale.n_trials);
  std::vector<DeploymentLog> logs(n_dep);

  parallel_for(n_dep, e.config.threads, [&](std::size_t d) {
    std::uint64_t seed = derive_seed(e.config.master_seed, SeedStream::Deployment, d);
    if (!e.config.paired) seed = derive_seed(seed, static_cast<std::uint64_t>(selector.mode) + 1, 0);
    Rng rng(seed);
    std::vector<std::size_t> order(S);
    for (std::size_t i = 0; i < S; ++i) order[i] = i;
    shuffle(std::span(order), rng);
    order.resize(n_trials);
    const std::size_t first = uniform_index(rng, P);

    std::vector<PolicyStats> stats(P);
    for (std::size_t p = 0; p < P; ++p) stats[p].policy = e.roster[p].name;

    DeploymentLog& log = logs[d];
    log.seed = seed;
    for (std::size_t i = 0; i < n_trials; ++i) {
      const long k = static_cast<long>(i) + 1;
      const std::size_t s = order[i];
      const std::size_t p = k == 1 ? first : select_policy(stats, k, selector);
      const double cost = matrix.cost[p][s];
      const auto& outcomes = cache.outcomes[p][s];
      TrialLogEntry entry{k, p, s, cost, std::vector<double>(P, kNaN)};
      std::vector<ReplayOutcome> alts;
      for (std::size_t a = 0; a < P; ++a) {
        if (a == p) continue;
        alts.push_back(outcomes[a]);
        entry.bounds[a] = bound_value(outcomes[a], selector.bound);
      }
      stats = update_after_trial(stats, p, cost, alts, selector.bound);
      log.trials.push_back(std::move(entry));
    }
  });
  return logs;
}

fs::path write_logs(const fs::path& logs_dir, const std::string& label, const std::vector<DeploymentLog>& logs,
                    const CostMatrix& matrix) {
  const fs::path dir = logs_dir / label;
  if (fs::exists(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() == ".jsonl") fs::remove(entry.path());
    }
  }
  for (std::size_t d = 0; d < logs.size(); ++d) {
    std::string text;
    for (const auto& t : logs[d].trials) {
      json bounds = json::object();
      for (std::size_t a = 0; a < t.bounds.size(); ++a) {
        if (!std::isnan(t.bounds[a])) bounds[matrix.policies[a]] = t.bounds[a];
      }
      text += json{{"deployment_seed", logs[d].seed},
                   {"k", t.k},
                   {"selected_policy", matrix.policies[t.policy]},
                   {"scenario_id", matrix.scenario_ids[t.scenario]},
                   {"cost", t.cost},
                   {"bounds_used", bounds}}
                  .dump() +
              "\n";
    }
    char name[64];
    std::snprintf(name, sizeof name, "deployment-%04zu.jsonl", d);
    io::write_text(dir / name, text);
  }
  io::write_json(logs_dir / "cost_matrix.json", matrix_to_json(matrix));
  return dir;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::NoData, "percentile of nothing");
  std::ranges::sort(values);
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

SeriesStats summarize(const std::vector<std::vector<double>>& series) {
  SeriesStats out;
  const std::size_t n = series.front().size();
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> column;
    double sum = 0.0;
    for (const auto& s : series) {
      column.push_back(s[k]);
      sum += s[k];
    }
    out.mean.push_back(sum / static_cast<double>(series.size()));
    out.p10.push_back(percentile(column, 0.10));
    out.p90.push_back(percentile(column, 0.90));
  }
  return out;
}

struct ParsedLog {
  std::uint64_t seed = 0;
  std::vector<std::size_t> policy;
  std::vector<std::size_t> scenario;
  std::vector<double> cost;
};

ParsedLog parse_log(const fs::path& file, const std::map<std::string, std::size_t>& policy_index,
                    const std::map<std::string, std::size_t>& scenario_index) {
  ParsedLog log;
  std::vector<std::pair<long, json>> rows;
  for (json& row : io::read_json_lines(file)) rows.emplace_back(row.at("k").get<long>(), std::move(row));
  std::ranges::sort(rows, {}, &std::pair<long, json>::first);
  for (const auto& [k, row] : rows) {
    log.seed = row.at("deployment_seed").get<std::uint64_t>();
    const auto p = policy_index.find(row.at("selected_policy").get<std::string>());
    const auto s = scenario_index.find(row.at("scenario_id").get<std::string>());
    if (p == policy_index.end() || s == scenario_index.end()) {
      throw Error(ErrorCode::IncompleteMatrix, file.string() + " refers to an entry missing from cost_matrix.json");
    }
    log.policy.push_back(p->second);
    log.scenario.push_back(s->second);
    log.cost.push_back(row.at("cost").get<double>());
  }
  return log;
}

}  // namespace

Report report(const fs::path& logs_dir, const fs::path& out_dir) {
  if (!fs::is_directory(logs_dir)) throw Error(ErrorCode::EmptyLogs, logs_dir.string() + " is not a directory");
  const CostMatrix matrix = matrix_from_json(io::read_json(logs_dir / "cost_matrix.json"));
  std::map<std::string, std::size_t> policy_index, scenario_index;
  for (std::size_t p = 0; p < matrix.policies.size(); ++p) policy_index[matrix.policies[p]] = p;
  for (std::size_t s = 0; s < matrix.scenario_ids.size(); ++s) scenario_index[matrix.scenario_ids[s]] = s;

  // configuration label -> log files
  std::map<std::string, std::vector<fs::path>> groups;
  auto collect = [&](const fs::path& dir, const std::string& label) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".jsonl") groups[label].push_back(entry.path());
    }
  };
  collect(logs_dir, logs_dir.filename().string());
  for (const auto& entry : fs::directory_iterator(logs_dir)) {
    if (entry.is_directory()) collect(entry.path(), entry.path().filename().string());
  }
  if (groups.empty()) throw Error(ErrorCode::EmptyLogs, "no deployment logs under " + logs_dir.string());

  Report rep;
  rep.policies = matrix.policies;
  for (auto& [label, files] : groups) {
    std::vector<ParsedLog> logs;
    for (const auto& f : files) logs.push_back(parse_log(f, policy_index, scenario_index));
    std::ranges::sort(logs, [](const ParsedLog& a, const ParsedLog& b) {
      return std::tie(a.seed, a.scenario, a.policy) < std::tie(b.seed, b.scenario, b.policy);
    });
    const std::size_t n = logs.front().cost.size();
    for (const auto& l : logs) {
      if (l.cost.size() != n || n == 0) throw Error(ErrorCode::InvalidArgument, label + ": deployments differ in length");
    }

    ConfigurationReport cr;
    cr.label = label;
    cr.mean_selections.assign(matrix.policies.size(), 0.0);
    std::vector<std::vector<double>> avg, regret;
    double best_sum = 0.0;
    for (const auto& l : logs) {
      std::vector<double> a(n);
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        acc += l.cost[k];
        a[k] = acc / static_cast<double>(k + 1);
      }
      avg.push_back(std::move(a));
      regret.push_back(cumulative_regret(l.policy, l.scenario, matrix.cost));
      for (std::size_t p : l.policy) cr.mean_selections[p] += 1.0;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& row : matrix.cost) {
        double total = 0.0;
        for (std::size_t s : l.scenario) total += row[s];
        best = std::min(best, total / static_cast<double>(n));
      }
      best_sum += best;
    }
    for (double& m : cr.mean_selections) m /= static_cast<double>(logs.size());
    cr.avg_cost = summarize(avg);
    cr.regret = summarize(regret);
    cr.best_single_avg = best_sum / static_cast<double>(logs.size());
    rep.configurations.push_back(std::move(cr));
  }

  auto series_csv = [&](auto member) {
    std::string text = "configuration,k,mean,p10,p90\n";
    for (const auto& cr : rep.configurations) {
      const SeriesStats& st = cr.*member;
      for (std::size_t k = 0; k < st.mean.size(); ++k) {
        text += cr.label + "," + std::to_string(k + 1) + "," + fmt(st.mean[k]) + "," + fmt(st.p10[k]) + "," +
                fmt(st.p90[k]) + "\n";
      }
    }
    return text;
  };
  io::write_text(out_dir / "avg_cost.csv", series_csv(&ConfigurationReport::avg_cost));
  io::write_text(out_dir / "regret.csv", series_csv(&ConfigurationReport::regret));

  // per-environment single-policy means over the whole matrix
  std::string single = "policy,environment,mean_cost\n";
  std::set<std::string> envs(matrix.environments.begin(), matrix.environments.end());
  for (const auto& env : envs) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < matrix.policies.size(); ++p) {
      double total = 0.0;
      int count = 0;
      for (std::size_t s = 0; s < matrix.scenario_ids.size(); ++s) {
        if (matrix.environments[s] != env) continue;
        total += matrix.cost[p][s];
        ++count;
      }
      const double mean = total / count;
      best = std::min(best, mean);
      single += matrix.policies[p] + "," + env + "," + fmt(mean) + "\n";
    }
    single += "best_single_policy," + env + "," + fmt(best) + "\n";
  }
  io::write_text(out_dir / "single_policy.csv", single);

  std::string sel = "configuration,policy,mean_selections\n";
  std::string summary;
  for (const auto& cr : rep.configurations) {
    for (std::size_t p = 0; p < rep.policies.size(); ++p) {
      sel += cr.label + "," + rep.policies[p] + "," + fmt(cr.mean_selections[p]) + "\n";
    }
    summary += cr.label + ": final avg cost " + fmt(cr.avg_cost.mean.back()) + " (best single policy " +
               fmt(cr.best_single_avg) + "), final cumulative regret " + fmt(cr.regret.mean.back()) + "\n";
    if (cr.label.find("wgt") != std::string::npos) {
      summary += "  note: weighted bounds may break the asymptotic regret guarantee of the constrained selector\n";
    }
  }
  io::write_text(out_dir / "selection.csv", sel);
  io::write_text(out_dir / "summary.txt", summary);
  return rep;
}

std::vector<std::string> desk_roster(EnvFamily family) {
  if (is_maze(family)) return {"non_learned", "trusting", "avoiding", "tabular_maze_random"};
  return {"non_learned", "trusting", "tabular_office_base", "tabular_office_diff"};
}

namespace {

constexpr int kTrainingScenarios = 50;

int family_index(EnvFamily f) { return static_cast<int>(f); }

}  // namespace

void write_shipped_estimators(const fs::path& dir, std::uint64_t master_seed, const ScanParams& sensing,
                              unsigned threads) {
  for (const Estimator& e : {non_learned(), trusting(), avoiding()}) {
    io::write_json(dir / (e.name + ".json"), io::estimator_to_json(e));
  }
  for (EnvFamily f : {EnvFamily::MazeRandom, EnvFamily::OfficeBase, EnvFamily::OfficeDiff}) {
    const std::string name = "tabular_" + std::string(to_string(f));
    const fs::path file = dir / (name + ".json");
    if (fs::exists(file)) continue;
    std::vector<Scenario> training(kTrainingScenarios);
    parallel_for(training.size(), threads, [&](std::size_t i) {
      training[i] = generate_scenario(
          f, derive_seed(master_seed, SeedStream::Training, static_cast<std::uint64_t>(family_index(f)) * 100000 + i));
    });
    io::write_json(file, io::estimator_to_json(train_tabular(training, sensing, name, nullptr, threads)));
  }
}

std::vector<FamilyRun> run_desk(const fs::path& out, std::uint64_t master_seed, unsigned threads,
                                std::vector<EnvFamily> families) {
  if (families.empty()) {
    families = {EnvFamily::MazeGreen, EnvFamily::MazeGray, EnvFamily::MazeRandom, EnvFamily::OfficeBase,
                EnvFamily::OfficeDiff};
  }
  const ScanParams sensing;
  const fs::path est_dir = out / "estimators";
  write_shipped_estimators(est_dir, master_seed, sensing, threads);

  std::vector<FamilyRun> runs;
  for (EnvFamily f : families) {
    FamilyRun run{f, out / std::string(to_string(f)), desk_roster(f), {}, {}};
    const fs::path scen_dir = run.dir / "scenarios";
    if (!fs::exists(scen_dir / "manifest.json")) {
      generate_scenario_set(f, kDeskScale.n_scenarios,
                            derive_seed(master_seed, SeedStream::EnvGen, static_cast<std::uint64_t>(family_index(f))),
                            scen_dir, threads);
    }
    ExperimentConfig cfg;
    for (const auto& name : run.roster) cfg.roster.push_back(est_dir / (name + ".json"));
    cfg.scenario_dir = scen_dir;
    cfg.sensing = sensing;
    cfg.scale = kDeskScale;
    cfg.master_seed = master_seed;
    cfg.cache_dir = run.dir / "cache";
    cfg.logs_dir = run.dir / "logs";
    cfg.threads = threads;
    save_config(run.dir / "config.json", cfg);

    const Experiment e = load_experiment(cfg);
    run.precompute = precompute(e);
    const auto [matrix, cache] = load_cache(e);
    std::vector<SelectorConfig> selectors(4);
    selectors[0].mode = SelectorMode::Ucb;
    selectors[1].bound.kind = BoundKind::SimplyConnected;
    selectors[2].bound.kind = BoundKind::Optimistic;
    selectors[3].bound = {BoundKind::Weighted, 0.5};
    for (const auto& sel : selectors) {
      write_logs(cfg.logs_dir, configuration_label(sel), run_deployments(e, matrix, cache, sel), matrix);
    }
    run.report = report(cfg.logs_dir, run.dir / "report");
    runs.push_back(std::move(run));
  }
  return runs;
}

}  // namespace lspsel
