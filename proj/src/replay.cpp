#include "lspsel/replay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lspsel {

std::string_view to_string(BoundKind k) {
  switch (k) {
    case BoundKind::Optimistic: return "opt";
    case BoundKind::SimplyConnected: return "sc";
    case BoundKind::Weighted: return "wgt";
  }
  return "unknown";
}

BoundKind parse_bound_kind(std::string_view s) {
  for (auto k : {BoundKind::Optimistic, BoundKind::SimplyConnected, BoundKind::Weighted}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown bound kind '" + std::string(s) + "'");
}

double weighted_bound(double c_opt, double c_sc, double p_short) {
  if (!(p_short >= 0.0 && p_short <= 1.0)) {
    throw Error(ErrorCode::InvalidProbability, "p_short must lie in [0, 1]");
  }
  if (c_opt > c_sc) throw Error(ErrorCode::InvalidArgument, "optimistic bound exceeds simply-connected bound");
  const double w = p_short * c_opt + (1.0 - p_short) * c_sc;
  return std::clamp(w, c_opt, c_sc);  // guard against rounding outside the interval
}

double bound_value(const ReplayOutcome& outcome, const BoundConfig& config) {
  switch (config.kind) {
    case BoundKind::Optimistic: return outcome.c_lb_opt;
    case BoundKind::SimplyConnected: return outcome.c_lb_sc;
    case BoundKind::Weighted: return weighted_bound(outcome.c_lb_opt, outcome.c_lb_sc, config.p_short);
  }
  return outcome.c_lb_sc;
}

SightIndex::SightIndex(const TrialRecord& record)
    : record_(&record), width_(record.m_final.width()), seen_by_(record.m_final.size()) {
  const GridMap& m = record.m_final;
  for (std::size_t i = 0; i < record.steps.size(); ++i) {
    const TrialStep& st = record.steps[i];
    if (!m.in_bounds(st.pose.cell()) || !m.is_free(st.pose.cell())) {
      throw Error(ErrorCode::CorruptRecord, "recorded pose is not free in the final map");
    }
    for (const Cell& c : st.footprint) {
      if (!m.in_bounds(c) || !m.is_known(c)) throw Error(ErrorCode::CorruptRecord, "footprint cell unknown in final map");
      auto& list = seen_by_[m.index(c)];
      if (list.empty() || list.back() != i) list.push_back(i);
    }
  }
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m.is_known(m.cell_at(k)) && seen_by_[k].empty()) {
      throw Error(ErrorCode::CorruptRecord, "final map knows a cell no footprint covers");
    }
  }
}

bool SightIndex::seen(Cell c) const {
  return record_->m_final.in_bounds(c) && !seen_by_[record_->m_final.index(c)].empty();
}

std::optional<std::size_t> SightIndex::nearest(const Frontier& frontier, Cell from) const {
  std::optional<std::size_t> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const Cell& c : frontier.cells) {
    if (!record_->m_final.in_bounds(c)) continue;
    for (std::size_t i : seen_by_[record_->m_final.index(c)]) {
      const Cell p = record_->steps[i].pose.cell();
      const double d = std::hypot(p.x - from.x, p.y - from.y);
      if (d < best_d || (d == best_d && i < *best)) {
        best = i;
        best_d = d;
      }
    }
  }
  return best;
}

std::optional<std::size_t> nearest_seeing_pose(const TrialRecord& record, const Frontier& frontier, Cell from) {
  return SightIndex(record).nearest(frontier, from);
}

ReplayOutcome replay_policy(const TrialRecord& record, const Estimator& estimator, Cell goal,
                            const ScanParams& sensing, int step_cap) {
  if (record.steps.empty()) throw Error(ErrorCode::CorruptRecord, "record has no steps");
  const SightIndex sight(record);
  const GridMap& original = record.m_final;
  if (step_cap <= 0) step_cap = default_step_cap(original);

  const Cell goal_src[] = {goal};
  const CostGrid optimistic_goal = cost_grid(original, goal_src, UnknownRule::Traversable);

  GridMap world = original;
  std::vector<double> candidates;
  int exits = 0;

  LoopHooks hooks;
  hooks.properties = [&](const Belief& b, const Frontier& f, const CostGrid& optimistic) {
    if (!sight.nearest(f, b.pose.cell())) return non_learned_properties(f, optimistic);
    return estimate(estimator, b.map, f, optimistic);
  };
  // Standing on the chosen frontier after a scan means its remaining Unknown
  // neighbours are Unknown in the final map too: the next move would exit.
  hooks.before_step = [&](GridMap& w, Belief& b, const ActionEvaluation& chosen) {
    bool exit_now = chosen.frontier.contains(b.pose.cell());
    if (!exit_now) {
      // About to step onto a boundary cell of the final map: a live robot
      // standing there would have seen its neighbours, the record did not.
      auto on_boundary = [&](Cell c) {
        if (!chosen.frontier.contains(c)) return false;
        for (const auto& o : kNeighbors4) {
          const Cell n{c.x + o.dx, c.y + o.dy};
          if (original.in_bounds(n) && !original.is_known(n)) return true;
        }
        return false;
      };
      const Cell here = b.pose.cell();
      bool near = false;
      for (const auto& o : kNeighbors8) near = near || on_boundary({here.x + o.dx, here.y + o.dy});
      if (near) {
        const auto next = descent_move(b.map, here, cost_grid(b.map, chosen.frontier.cells, UnknownRule::Blocked));
        exit_now = next && on_boundary({here.x + next->dx, here.y + next->dy});
      }
    }
    if (!exit_now) return false;
    ++exits;
    const Cell here[] = {b.pose.cell()};
    const double to_centroid = cost_grid(b.map, here, UnknownRule::Blocked).at(chosen.frontier.centroid);
    candidates.push_back(b.distance_traveled + to_centroid + optimistic_goal.at(chosen.frontier.centroid));
    for (const Cell& c : chosen.frontier.cells) {
      for (const auto& o : kNeighbors4) {
        const Cell n{c.x + o.dx, c.y + o.dy};
        if (w.in_bounds(n) && !original.is_known(n)) {
          w.set(n, CellState::Occupied);
          b.map.set(n, CellState::Occupied);
        }
      }
    }
    return true;
  };

  LoopOutcome loop = run_planner_loop(world, record.steps.front().pose.cell(), goal, sensing, step_cap, hooks);
  if (loop.end != LoopEnd::Reached) {
    throw Error(ErrorCode::ReplayNonTermination, "replay of " + estimator.name + " on " + record.scenario_id +
                                                     " did not reach the goal");
  }

  ReplayOutcome out;
  out.policy = estimator.name;
  out.scenario_id = record.scenario_id;
  out.c_lb_sc = loop.belief.distance_traveled;
  out.c_lb_opt = out.c_lb_sc;
  for (double c : candidates) out.c_lb_opt = std::min(out.c_lb_opt, c);
  out.exit_attempts = exits;
  out.trajectory = std::move(loop.trajectory);
  return out;
}

}  // namespace lspsel
