#include "lspsel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lspsel {

std::string_view to_string(SelectorMode m) { return m == SelectorMode::Ucb ? "ucb" : "constrained"; }

SelectorMode parse_selector_mode(std::string_view s) {
  if (s == "ucb") return SelectorMode::Ucb;
  if (s == "constrained") return SelectorMode::Constrained;
  throw Error(ErrorCode::InvalidArgument, "unknown selector mode '" + std::string(s) + "'");
}

double ucb_score(const PolicyStats& stats, long k, double c) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "trial index starts at 1");
  if (stats.n_deployed == 0) return -std::numeric_limits<double>::infinity();
  return stats.mean_cost - c * std::sqrt(std::log(static_cast<double>(k)) / static_cast<double>(stats.n_deployed));
}

double combined_mean_bound(const PolicyStats& stats) {
  const long n = stats.n_deployed + stats.n_replayed;
  if (n == 0) throw Error(ErrorCode::NoData, "policy '" + stats.policy + "' has no deployments or replays");
  if (stats.n_replayed == 0) return stats.mean_cost;
  if (stats.n_deployed == 0) return stats.mean_replay_lb;
  return (static_cast<double>(stats.n_deployed) * stats.mean_cost +
          static_cast<double>(stats.n_replayed) * stats.mean_replay_lb) /
         static_cast<double>(n);
}

double constrained_score(const PolicyStats& stats, long k, double c) {
  return std::max(combined_mean_bound(stats), ucb_score(stats, k, c));
}

namespace {

template <typename Score>
std::size_t argmin(std::span<const PolicyStats> stats, Score&& score) {
  if (stats.empty()) throw Error(ErrorCode::InvalidArgument, "empty roster");
  std::size_t best = 0;
  double best_score = score(stats[0]);
  for (std::size_t i = 1; i < stats.size(); ++i) {
    const double s = score(stats[i]);
    if (s < best_score) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

}  // namespace

std::size_t select_ucb(std::span<const PolicyStats> stats, long k, const SelectorConfig& config) {
  return argmin(stats, [&](const PolicyStats& s) { return ucb_score(s, k, config.c); });
}

std::size_t select_constrained(std::span<const PolicyStats> stats, long k, const SelectorConfig& config) {
  return argmin(stats, [&](const PolicyStats& s) { return constrained_score(s, k, config.c); });
}

std::size_t select_policy(std::span<const PolicyStats> stats, long k, const SelectorConfig& config) {
  return config.mode == SelectorMode::Ucb ? select_ucb(stats, k, config) : select_constrained(stats, k, config);
}

std::vector<PolicyStats> update_after_trial(std::span<const PolicyStats> stats, std::size_t deployed, double cost,
                                            std::span<const ReplayOutcome> replays, const BoundConfig& bound) {
  if (deployed >= stats.size()) throw Error(ErrorCode::InvalidArgument, "deployed index outside roster");
  std::vector<PolicyStats> out(stats.begin(), stats.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    PolicyStats& s = out[i];
    if (i == deployed) {
      ++s.n_deployed;
      s.mean_cost += (cost - s.mean_cost) / static_cast<double>(s.n_deployed);
      continue;
    }
    const auto it = std::ranges::find(replays, s.policy, &ReplayOutcome::policy);
    if (it == replays.end()) throw Error(ErrorCode::MissingReplay, "no replay outcome for '" + s.policy + "'");
    ++s.n_replayed;
    s.mean_replay_lb += (bound_value(*it, bound) - s.mean_replay_lb) / static_cast<double>(s.n_replayed);
  }
  return out;
}

std::vector<double> cumulative_regret(std::span<const std::size_t> selected, std::span<const std::size_t> scenario,
                                      const std::vector<std::vector<double>>& cost) {
  if (selected.size() != scenario.size()) throw Error(ErrorCode::InvalidArgument, "log columns differ in length");
  auto at = [&](std::size_t p, std::size_t s) {
    if (p >= cost.size() || s >= cost[p].size() || std::isnan(cost[p][s])) {
      throw Error(ErrorCode::IncompleteMatrix, "cost matrix lacks a logged entry");
    }
    return cost[p][s];
  };
  for (std::size_t i = 0; i < selected.size(); ++i) at(selected[i], scenario[i]);

  std::size_t best = 0;
  double best_total = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < cost.size(); ++p) {
    double total = 0.0;
    for (std::size_t s : scenario) total += at(p, s);
    if (total < best_total) {
      best = p;
      best_total = total;
    }
  }

  std::vector<double> regret(selected.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    acc += at(selected[i], scenario[i]) - at(best, scenario[i]);
    regret[i] = acc;
  }
  return regret;
}

}  // namespace lspsel
