#pragma once

// Learning-over-subgoals planning: frontier actions scored with the factored
// Bellman recursion, executed one grid step at a time with replanning.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lspsel/envgen.hpp"
#include "lspsel/estimators.hpp"
#include "lspsel/gridmap.hpp"

namespace lspsel {

/// Expected cost assigned when every remaining action has failed.
inline constexpr double kInfeasibleCost = 1e8;

/// Exact subset evaluation is limited to this many frontiers.
inline constexpr std::size_t kMaxExactFrontiers = 10;

struct Belief {
  GridMap map;
  Pose pose;
  Cell goal;
  int step_count = 0;
  double distance_traveled = 0.0;
};

struct ActionTerms {
  double d = 0.0;
  SubgoalProperties props;
};

/// Q(a) for every action under
///   Q(S, a) = D(a) + Ps(a) Rs(a) + (1 - Ps(a)) (Re(a) + min_{a' in S\a} Q(S\a, a'))
/// with the minimum over an empty set equal to kInfeasibleCost. Memoized over
/// subsets, so cost is O(n 2^n).
std::vector<double> expected_costs(std::span<const ActionTerms> actions);

struct ActionEvaluation {
  Frontier frontier;
  double d = 0.0;
  SubgoalProperties props;
  double q = 0.0;
};

using PropertySource =
    std::function<SubgoalProperties(const Belief& belief, const Frontier&, const CostGrid& optimistic_to_goal)>;

/// Drops frontiers unreachable through known space or with no optimistic
/// route to the goal, keeps the kMaxExactFrontiers best by D + optimistic
/// distance, and scores the rest exactly. Throws NoActions when nothing is left.
std::vector<ActionEvaluation> evaluate_actions(const Belief& belief, std::span<const Frontier> frontiers,
                                               const PropertySource& properties);
std::vector<ActionEvaluation> evaluate_actions(const Belief& belief, std::span<const Frontier> frontiers,
                                               const Estimator& estimator);

/// argmin q; ties go to the row-major smaller centroid.
const ActionEvaluation& select_action(std::span<const ActionEvaluation> evaluations);

/// The move `step` would take down `toward` from `here` (Unknown blocked):
/// strictly lower cost, smallest step + remaining cost, first in
/// kNeighbors8 order on ties. None at a target cell or when stuck.
std::optional<Offset> descent_move(const GridMap& map, Cell here, const CostGrid& toward);

/// One grid move down the known-space cost gradient towards `chosen`.
std::pair<Belief, double> step(const Belief& belief, const Frontier& chosen);

struct TrialResult {
  double cost = 0.0;
  std::vector<Pose> trajectory;
  bool reached = false;
  std::string scenario_id;
  std::string policy;
};

struct TrialStep {
  Pose pose;
  Footprint footprint;
};

struct TrialRecord {
  std::vector<TrialStep> steps;
  GridMap m_final;
  std::string scenario_id;
  std::string policy;
  double cost = 0.0;
  bool reached = false;
};

inline int default_step_cap(const GridMap& m) { return 10 * (m.width() + m.height()); }

std::pair<TrialResult, TrialRecord> navigate_trial(const Scenario& scenario, const Estimator& estimator,
                                                   const ScanParams& sensing, int step_cap = 0);

// The planning loop shared by live trials and offline replay.

struct LoopHooks {
  PropertySource properties;
  /// Called with the selected action before moving. Returning true means the
  /// hook handled this iteration (it may edit the world and belief) and the
  /// loop replans without moving. The step cap counts moves only.
  std::function<bool(GridMap& world, Belief& belief, const ActionEvaluation& chosen)> before_step;
};

enum class LoopEnd { Reached, StepCap, Exhausted };

struct LoopOutcome {
  Belief belief;
  std::vector<Pose> trajectory;
  std::vector<TrialStep> steps;
  LoopEnd end = LoopEnd::Exhausted;
};

LoopOutcome run_planner_loop(GridMap& world, Cell start, Cell goal, const ScanParams& sensing, int step_cap,
                             const LoopHooks& hooks);

}  // namespace lspsel
