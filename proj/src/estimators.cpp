#include "lspsel/estimators.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "lspsel/parallel.hpp"
#include "lspsel/planner.hpp"

namespace lspsel {

std::string_view to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::NonLearned: return "non_learned";
    case EstimatorKind::FeatureKeyed: return "feature_keyed";
    case EstimatorKind::Tabular: return "tabular";
  }
  return "unknown";
}

EstimatorKind parse_estimator_kind(std::string_view s) {
  for (auto k : {EstimatorKind::NonLearned, EstimatorKind::FeatureKeyed, EstimatorKind::Tabular}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown estimator kind '" + std::string(s) + "'");
}

Estimator non_learned() { return Estimator{}; }

Estimator trusting() {
  Estimator e;
  e.kind = EstimatorKind::FeatureKeyed;
  e.name = "trusting";
  e.keyed = {{kMarkerLabel, {0.95, 1.0, 10.0}}, {0, {0.05, 1.0, 10.0}}};
  e.keyed_default = {0.05, 1.0, 10.0};
  return e;
}

Estimator avoiding() {
  Estimator e;
  e.kind = EstimatorKind::FeatureKeyed;
  e.name = "avoiding";
  e.keyed = {{kMarkerLabel, {0.05, 1.0, 10.0}}, {0, {0.95, 1.0, 10.0}}};
  e.keyed_default = {0.05, 1.0, 10.0};
  return e;
}

int feature_signature(const GridMap& belief, const Frontier& frontier) {
  std::map<int, int> counts;
  std::vector<Cell> seen;
  for (const Cell& c : frontier.cells) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const Cell n{c.x + dx, c.y + dy};
        if (belief.is_free(n)) seen.push_back(n);
      }
    }
  }
  normalize(seen);
  for (const Cell& c : seen) ++counts[belief.feature(c)];
  int best = 0;
  int best_count = -1;
  for (const auto& [label, n] : counts) {  // ascending labels, so >= prefers the larger
    if (n >= best_count) {
      best = label;
      best_count = n;
    }
  }
  return best;
}

SubgoalProperties non_learned_properties(const Frontier& frontier, const CostGrid& optimistic_to_goal) {
  const double dist = optimistic_to_goal.at(frontier.centroid);
  if (dist == kUnreachable) throw Error(ErrorCode::UnreachableGoal, "frontier is enclosed");
  return {1.0, dist, 0.0};
}

SubgoalProperties estimate(const Estimator& est, const GridMap& belief, const Frontier& frontier,
                           const CostGrid& optimistic_to_goal) {
  const SubgoalProperties optimistic = non_learned_properties(frontier, optimistic_to_goal);
  switch (est.kind) {
    case EstimatorKind::NonLearned: return optimistic;
    case EstimatorKind::FeatureKeyed: {
      const int sig = feature_signature(belief, frontier);
      const auto it = est.keyed.find(sig);
      const KeyedEntry& e = it != est.keyed.end() ? it->second : est.keyed_default;
      return {e.p_s, e.r_s_scale * optimistic.r_s, e.r_e};
    }
    case EstimatorKind::Tabular: {
      const int sig = feature_signature(belief, frontier);
      const auto it = est.table.find(sig);
      const TabularCounts t = it != est.table.end() ? it->second : TabularCounts{};
      const long failures = t.n - t.successes;
      return {static_cast<double>(t.successes + 1) / static_cast<double>(t.n + 2),
              t.successes > 0 ? optimistic.r_s * t.sum_success_ratio / static_cast<double>(t.successes)
                              : optimistic.r_s,
              failures > 0 ? t.sum_failure_cost / static_cast<double>(failures) : est.default_r_e};
    }
  }
  return optimistic;
}

SubgoalProperties estimate(const Estimator& est, const GridMap& belief, const Frontier& frontier, Cell goal) {
  const Cell src[] = {goal};
  return estimate(est, belief, frontier, cost_grid(belief, src, UnknownRule::Traversable));
}

TrainingSample label_subgoal(const GridMap& true_map, const GridMap& belief, const Frontier& frontier, Cell goal) {
  if (true_map.width() != belief.width() || true_map.height() != belief.height()) {
    throw Error(ErrorCode::DimensionMismatch, "belief and true map differ in size");
  }
  // Space behind the frontier: unknown to the robot, free in reality.
  GridMap pocket(true_map.width(), true_map.height(), CellState::Occupied);
  for (std::size_t i = 0; i < true_map.size(); ++i) {
    const Cell c = true_map.cell_at(i);
    if (!belief.is_known(c) && true_map.state(c) == CellState::Free) pocket.set(c, CellState::Free);
  }
  for (const Cell& c : frontier.cells) pocket.set(c, CellState::Free);

  const Cell src[] = {frontier.centroid};
  const CostGrid g = cost_grid(pocket, src, UnknownRule::Blocked);

  TrainingSample s;
  s.signature = feature_signature(belief, frontier);
  const Cell goal_src[] = {goal};
  s.optimistic_cost = cost_grid(belief, goal_src, UnknownRule::Traversable).at(frontier.centroid);
  if (!belief.is_known(goal) && g.reachable(goal)) {
    s.leads_to_goal = true;
    s.success_cost = g.at(goal);
    return s;
  }
  double deepest = 0.0;
  for (double d : g.cost) {
    if (d != kUnreachable) deepest = std::max(deepest, d);
  }
  s.failure_cost = deepest;
  return s;
}

void accumulate(Estimator& est, const TrainingSample& sample) {
  TabularCounts& t = est.table[sample.signature];
  ++t.n;
  if (sample.leads_to_goal) {
    ++t.successes;
    t.sum_success_cost += *sample.success_cost;
    t.sum_success_ratio += sample.optimistic_cost > 0.0 ? *sample.success_cost / sample.optimistic_cost : 1.0;
  } else {
    t.sum_failure_cost += *sample.failure_cost;
  }
}

Estimator train_tabular(std::span<const Scenario> scenarios, const ScanParams& sensing, std::string name,
                        TrainingReport* report, unsigned threads) {
  if (scenarios.empty()) throw Error(ErrorCode::InvalidArgument, "training needs at least one scenario");

  std::vector<std::vector<TrainingSample>> per_scenario(scenarios.size());
  std::vector<char> used(scenarios.size(), 0);
  const Estimator heuristic = non_learned();

  parallel_for(scenarios.size(), threads, [&](std::size_t i) {
    const Scenario& sc = scenarios[i];
    const auto [result, record] = navigate_trial(sc, heuristic, sensing);
    if (!result.reached) return;
    used[i] = 1;
    GridMap belief(sc.true_map.width(), sc.true_map.height());
    for (const TrialStep& st : record.steps) {
      belief = update_belief(belief, sc.true_map, st.footprint);
      for (const Frontier& f : extract_frontiers(belief)) {
        per_scenario[i].push_back(label_subgoal(sc.true_map, belief, f, sc.goal));
      }
    }
  });

  Estimator est;
  est.kind = EstimatorKind::Tabular;
  est.name = std::move(name);
  TrainingReport rep;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    if (!used[i]) {
      ++rep.scenarios_skipped;
      continue;
    }
    ++rep.scenarios_used;
    for (const auto& s : per_scenario[i]) accumulate(est, s);
    rep.samples += per_scenario[i].size();
  }
  if (report) *report = rep;
  return est;
}

}  // namespace lspsel
