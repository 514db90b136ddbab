#pragma once

// Offline replay of an alternative policy inside the final belief map of a
// recorded trial. Unknown space of that map is never entered: reaching it is
// an exit attempt, which is priced optimistically and then walled off.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lspsel/estimators.hpp"
#include "lspsel/gridmap.hpp"
#include "lspsel/planner.hpp"

namespace lspsel {

struct ReplayOutcome {
  std::string policy;
  std::string scenario_id;
  double c_lb_opt = 0.0;
  double c_lb_sc = 0.0;
  int exit_attempts = 0;
  std::vector<Pose> trajectory;
};

enum class BoundKind { Optimistic, SimplyConnected, Weighted };

std::string_view to_string(BoundKind k);  // "opt", "sc", "wgt"
BoundKind parse_bound_kind(std::string_view s);

struct BoundConfig {
  BoundKind kind = BoundKind::SimplyConnected;
  double p_short = 0.5;  // Weighted only
};

/// p_short * c_opt + (1 - p_short) * c_sc.
double weighted_bound(double c_opt, double c_sc, double p_short);

/// The outcome's bound of the configured kind.
double bound_value(const ReplayOutcome& outcome, const BoundConfig& config);

/// Which recorded steps saw each cell.
class SightIndex {
 public:
  explicit SightIndex(const TrialRecord& record);

  bool seen(Cell c) const;
  /// Recorded step whose footprint intersects the frontier and whose pose is
  /// nearest (Euclidean) to `from`; lowest step index on ties.
  std::optional<std::size_t> nearest(const Frontier& frontier, Cell from) const;

 private:
  const TrialRecord* record_;
  int width_ = 0;
  std::vector<std::vector<std::size_t>> seen_by_;
};

std::optional<std::size_t> nearest_seeing_pose(const TrialRecord& record, const Frontier& frontier, Cell from);

/// Throws CorruptRecord when footprints and m_final disagree, and
/// ReplayNonTermination when the replay does not reach the goal within the
/// step cap (default: same cap as live trials).
ReplayOutcome replay_policy(const TrialRecord& record, const Estimator& estimator, Cell goal,
                            const ScanParams& sensing, int step_cap = 0);

}  // namespace lspsel
