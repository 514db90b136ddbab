#include "lspsel/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace lspsel {

std::vector<double> expected_costs(std::span<const ActionTerms> actions) {
  const std::size_t n = actions.size();
  if (n == 0) return {};
  if (n > 20) throw Error(ErrorCode::InvalidArgument, "too many actions for exact evaluation");

  auto q_of = [&](std::size_t a, double rest) {
    const auto& t = actions[a];
    return t.d + t.props.p_s * t.props.r_s + (1.0 - t.props.p_s) * (t.props.r_e + rest);
  };

  // best[S] = min over a in S of Q(S, a); best[{}] = infeasible.
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<double> best(full + 1, kInfeasibleCost);
  for (std::size_t s = 1; s < full; ++s) {
    double m = kUnreachable;
    for (std::size_t a = 0; a < n; ++a) {
      if (s & (std::size_t{1} << a)) m = std::min(m, q_of(a, best[s & ~(std::size_t{1} << a)]));
    }
    best[s] = m;
  }
  std::vector<double> q(n);
  for (std::size_t a = 0; a < n; ++a) q[a] = q_of(a, best[full & ~(std::size_t{1} << a)]);
  return q;
}

std::vector<ActionEvaluation> evaluate_actions(const Belief& belief, std::span<const Frontier> frontiers,
                                               const PropertySource& properties) {
  const Cell pose_src[] = {belief.pose.cell()};
  const CostGrid known = cost_grid(belief.map, pose_src, UnknownRule::Blocked);
  const Cell goal_src[] = {belief.goal};
  const CostGrid optimistic = cost_grid(belief.map, goal_src, UnknownRule::Traversable);

  struct Candidate {
    const Frontier* frontier;
    double d;
    double rank;
  };
  std::vector<Candidate> candidates;
  for (const Frontier& f : frontiers) {
    double d = kUnreachable;
    for (const Cell& c : f.cells) d = std::min(d, known.at(c));
    const double to_goal = optimistic.at(f.centroid);
    if (d == kUnreachable || to_goal == kUnreachable) continue;
    candidates.push_back({&f, d, d + to_goal});
  }
  if (candidates.empty()) throw Error(ErrorCode::NoActions, "no reachable frontier");

  if (candidates.size() > kMaxExactFrontiers) {
    std::ranges::stable_sort(candidates, {}, &Candidate::rank);
    candidates.resize(kMaxExactFrontiers);
    std::ranges::sort(candidates, {}, [](const Candidate& c) { return c.frontier->centroid; });
  }

  std::vector<ActionEvaluation> out;
  std::vector<ActionTerms> terms;
  out.reserve(candidates.size());
  for (const Candidate& c : candidates) {
    const SubgoalProperties props = properties(belief, *c.frontier, optimistic);
    out.push_back({*c.frontier, c.d, props, 0.0});
    terms.push_back({c.d, props});
  }
  const auto q = expected_costs(terms);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].q = q[i];
  return out;
}

std::vector<ActionEvaluation> evaluate_actions(const Belief& belief, std::span<const Frontier> frontiers,
                                               const Estimator& estimator) {
  return evaluate_actions(belief, frontiers, [&](const Belief& b, const Frontier& f, const CostGrid& optimistic) {
    return estimate(estimator, b.map, f, optimistic);
  });
}

const ActionEvaluation& select_action(std::span<const ActionEvaluation> evaluations) {
  if (evaluations.empty()) throw Error(ErrorCode::NoActions, "nothing to select");
  const ActionEvaluation* best = &evaluations.front();
  for (const auto& e : evaluations.subspan(1)) {
    if (e.q < best->q || (e.q == best->q && e.frontier.centroid < best->frontier.centroid)) best = &e;
  }
  return *best;
}

std::optional<Offset> descent_move(const GridMap& map, Cell here, const CostGrid& toward) {
  const double current = toward.at(here);
  if (current == kUnreachable || current == 0.0) return std::nullopt;
  // first neighbour in kNeighbors8 order wins ties
  std::optional<Offset> best;
  double best_total = kUnreachable;
  for (const auto& o : kNeighbors8) {
    if (!can_move(map, here, o, UnknownRule::Blocked)) continue;
    const double next = toward.at({here.x + o.dx, here.y + o.dy});
    if (next >= current) continue;
    const double total = step_cost(o) + next;
    if (total < best_total - 1e-12) {
      best = o;
      best_total = total;
    }
  }
  return best;
}

namespace {

// Moves one cell down the gradient of `toward`. Returns the step cost.
double descend(Belief& b, const CostGrid& toward) {
  const Cell here = b.pose.cell();
  const auto best = descent_move(b.map, here, toward);
  if (!best) throw Error(ErrorCode::Unreachable, "no known-space move towards the target");
  const double cost = step_cost(*best);
  b.pose = Pose{here.x + best->dx, here.y + best->dy, std::atan2(best->dy, best->dx)};
  b.distance_traveled += cost;
  ++b.step_count;
  return cost;
}

}  // namespace

std::pair<Belief, double> step(const Belief& belief, const Frontier& chosen) {
  const CostGrid toward = cost_grid(belief.map, chosen.cells, UnknownRule::Blocked);
  Belief next = belief;
  const double cost = descend(next, toward);
  return {std::move(next), cost};
}

LoopOutcome run_planner_loop(GridMap& world, Cell start, Cell goal, const ScanParams& sensing, int step_cap,
                             const LoopHooks& hooks) {
  LoopOutcome out;
  Belief& b = out.belief;
  b.map = GridMap(world.width(), world.height());
  b.pose = Pose{start.x, start.y, 0.0};
  b.goal = goal;

  auto sense = [&] {
    Footprint fp = simulate_scan(world, b.pose, sensing);
    b.map = update_belief(b.map, world, fp);
    out.steps.push_back({b.pose, std::move(fp)});
    out.trajectory.push_back(b.pose);
  };
  sense();

  for (;;) {
    if (b.pose.cell() == goal) {
      out.end = LoopEnd::Reached;
      return out;
    }
    if (b.step_count >= step_cap) {
      out.end = LoopEnd::StepCap;
      return out;
    }

    if (b.map.is_free(goal)) {
      const Cell goal_src[] = {goal};
      const CostGrid to_goal = cost_grid(b.map, goal_src, UnknownRule::Blocked);
      if (to_goal.reachable(b.pose.cell())) {
        descend(b, to_goal);
        sense();
        continue;
      }
    }

    const auto frontiers = extract_frontiers(b.map);
    std::vector<ActionEvaluation> evaluations;
    try {
      evaluations = evaluate_actions(b, frontiers, hooks.properties);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoActions) throw;
      out.end = LoopEnd::Exhausted;
      return out;
    }
    const ActionEvaluation& chosen = select_action(evaluations);
    if (hooks.before_step && hooks.before_step(world, b, chosen)) continue;

    const CostGrid toward = cost_grid(b.map, chosen.frontier.cells, UnknownRule::Blocked);
    try {
      descend(b, toward);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Unreachable) throw;
      out.end = LoopEnd::Exhausted;
      return out;
    }
    sense();
  }
}

std::pair<TrialResult, TrialRecord> navigate_trial(const Scenario& scenario, const Estimator& estimator,
                                                   const ScanParams& sensing, int step_cap) {
  if (step_cap <= 0) step_cap = default_step_cap(scenario.true_map);
  GridMap world = scenario.true_map;
  LoopHooks hooks;
  hooks.properties = [&](const Belief& b, const Frontier& f, const CostGrid& optimistic) {
    return estimate(estimator, b.map, f, optimistic);
  };
  LoopOutcome loop = run_planner_loop(world, scenario.start, scenario.goal, sensing, step_cap, hooks);

  TrialResult result;
  result.cost = loop.belief.distance_traveled;
  result.trajectory = std::move(loop.trajectory);
  result.reached = loop.end == LoopEnd::Reached;
  result.scenario_id = scenario.id;
  result.policy = estimator.name;
  TrialRecord record{std::move(loop.steps), std::move(loop.belief.map), scenario.id, estimator.name, result.cost,
                     result.reached};
  return {std::move(result), std::move(record)};
}

}  // namespace lspsel
