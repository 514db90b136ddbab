#pragma once

// UCB and constrained-UCB policy selection over a fixed roster. Costs are
// minimized, so UCB subtracts its exploration bonus.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lspsel/replay.hpp"

namespace lspsel {

struct PolicyStats {
  std::string policy;
  long n_deployed = 0;
  double mean_cost = 0.0;  // meaningful when n_deployed >= 1
  long n_replayed = 0;
  double mean_replay_lb = 0.0;

  friend bool operator==(const PolicyStats&, const PolicyStats&) = default;
};

enum class SelectorMode { Ucb, Constrained };

std::string_view to_string(SelectorMode m);  // "ucb", "constrained"
SelectorMode parse_selector_mode(std::string_view s);

struct SelectorConfig {
  double c = 100.0;
  SelectorMode mode = SelectorMode::Constrained;
  BoundConfig bound;
};

/// mean_cost - c * sqrt(ln k / n_deployed); -inf when never deployed.
double ucb_score(const PolicyStats& stats, long k, double c);

/// (n_deployed * mean_cost + n_replayed * mean_replay_lb) / (n_deployed + n_replayed).
/// Throws NoData when both counts are zero.
double combined_mean_bound(const PolicyStats& stats);

/// max(combined_mean_bound, ucb_score).
double constrained_score(const PolicyStats& stats, long k, double c);

// Both return a roster index; ties go to the lower index.
std::size_t select_ucb(std::span<const PolicyStats> stats, long k, const SelectorConfig& config);
std::size_t select_constrained(std::span<const PolicyStats> stats, long k, const SelectorConfig& config);
std::size_t select_policy(std::span<const PolicyStats> stats, long k, const SelectorConfig& config);

/// Folds one trial into the statistics: the deployed policy's cost and, for
/// every other policy, the configured bound from its replay outcome (matched
/// by policy name). Throws MissingReplay when an alternative has no outcome.
std::vector<PolicyStats> update_after_trial(std::span<const PolicyStats> stats, std::size_t deployed, double cost,
                                            std::span<const ReplayOutcome> replays, const BoundConfig& bound);

/// Regret against the best single policy in hindsight over the logged
/// scenarios. cost[p][s] is policy p's cost on scenario s; selected[i] and
/// scenario[i] describe trial i+1. Throws IncompleteMatrix on missing entries.
std::vector<double> cumulative_regret(std::span<const std::size_t> selected, std::span<const std::size_t> scenario,
                                      const std::vector<std::vector<double>>& cost);

}  // namespace lspsel
