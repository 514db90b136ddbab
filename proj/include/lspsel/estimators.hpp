#pragma once

// Subgoal-property estimators. An estimator maps (belief, frontier, goal) to
// the probability that the frontier leads to the goal and the expected costs
// of success and failure beyond it. Outputs never depend on the robot pose.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "lspsel/envgen.hpp"
#include "lspsel/gridmap.hpp"

namespace lspsel {

struct SubgoalProperties {
  double p_s = 1.0;
  double r_s = 0.0;
  double r_e = 0.0;

  friend bool operator==(const SubgoalProperties&, const SubgoalProperties&) = default;
};

enum class EstimatorKind { NonLearned, FeatureKeyed, Tabular };

std::string_view to_string(EstimatorKind k);
EstimatorKind parse_estimator_kind(std::string_view s);

/// FeatureKeyed row: r_s = r_s_scale * optimistic distance to goal.
struct KeyedEntry {
  double p_s = 1.0;
  double r_s_scale = 1.0;
  double r_e = 0.0;

  friend bool operator==(const KeyedEntry&, const KeyedEntry&) = default;
};

struct TabularCounts {
  long n = 0;
  long successes = 0;
  double sum_success_cost = 0.0;
  double sum_failure_cost = 0.0;
  // success cost divided by the optimistic frontier-to-goal distance
  double sum_success_ratio = 0.0;

  friend bool operator==(const TabularCounts&, const TabularCounts&) = default;
};

inline constexpr double kDefaultFailureCost = 20.0;

struct Estimator {
  EstimatorKind kind = EstimatorKind::NonLearned;
  std::string name = "non_learned";
  std::map<int, KeyedEntry> keyed;  // FeatureKeyed
  KeyedEntry keyed_default;         // FeatureKeyed, unmapped signatures
  std::map<int, TabularCounts> table;  // Tabular
  double default_r_e = kDefaultFailureCost;

  friend bool operator==(const Estimator&, const Estimator&) = default;
};

Estimator non_learned();
/// Believes marker-adjacent frontiers lead to the goal.
Estimator trusting();
/// Believes plain frontiers lead to the goal and marker ones do not.
Estimator avoiding();

/// Dominant feature label among known Free cells in the frontier and its
/// 8-neighbourhood; ties go to the larger label.
int feature_signature(const GridMap& belief, const Frontier& frontier);

/// Throws UnreachableGoal when the goal cannot be reached from the frontier
/// centroid even with Unknown treated as free.
SubgoalProperties estimate(const Estimator& est, const GridMap& belief, const Frontier& frontier, Cell goal);

/// Same, with a precomputed goal-sourced cost grid (Unknown traversable).
SubgoalProperties estimate(const Estimator& est, const GridMap& belief, const Frontier& frontier,
                           const CostGrid& optimistic_to_goal);

SubgoalProperties non_learned_properties(const Frontier& frontier, const CostGrid& optimistic_to_goal);

struct TrainingSample {
  int signature = 0;
  bool leads_to_goal = false;
  std::optional<double> success_cost;
  std::optional<double> failure_cost;
  double optimistic_cost = 0.0;  // centroid to goal in the belief, Unknown free
};

/// Ground-truth label for one frontier, computed from the fully known map by
/// searching only the space that is unknown in `belief` (plus the frontier).
TrainingSample label_subgoal(const GridMap& true_map, const GridMap& belief, const Frontier& frontier, Cell goal);

void accumulate(Estimator& est, const TrainingSample& sample);

struct TrainingReport {
  std::size_t scenarios_used = 0;
  std::size_t scenarios_skipped = 0;
  std::size_t samples = 0;
};

/// Runs the non-learned planner on every scenario and aggregates labels of
/// every frontier seen at every step into a Tabular estimator.
Estimator train_tabular(std::span<const Scenario> scenarios, const ScanParams& sensing, std::string name,
                        TrainingReport* report = nullptr, unsigned threads = 0);

}  // namespace lspsel
