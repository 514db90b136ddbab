#include "lspsel/gridmap.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <queue>
#include <string>

namespace lspsel {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidSource: return "InvalidSource";
    case ErrorCode::InvalidFrontier: return "InvalidFrontier";
    case ErrorCode::GenerationFailure: return "GenerationFailure";
    case ErrorCode::UnreachableGoal: return "UnreachableGoal";
    case ErrorCode::NoActions: return "NoActions";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::CorruptRecord: return "CorruptRecord";
    case ErrorCode::ReplayNonTermination: return "ReplayNonTermination";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::NoData: return "NoData";
    case ErrorCode::MissingReplay: return "MissingReplay";
    case ErrorCode::IncompleteMatrix: return "IncompleteMatrix";
    case ErrorCode::IncompleteCache: return "IncompleteCache";
    case ErrorCode::EmptyLogs: return "EmptyLogs";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

GridMap::GridMap(int width, int height, CellState fill)
    : width_(width),
      height_(height),
      cells_(static_cast<std::size_t>(std::max(width, 0)) * static_cast<std::size_t>(std::max(height, 0)),
             fill),
      features_(cells_.size(), 0) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::InvalidArgument, "grid dimensions must be positive");
  }
}

std::size_t GridMap::count(CellState s) const { return static_cast<std::size_t>(std::ranges::count(cells_, s)); }

bool Frontier::contains(Cell c) const { return std::ranges::binary_search(cells, c); }

void normalize(Footprint& cells) {
  std::ranges::sort(cells);
  auto dup = std::ranges::unique(cells);
  cells.erase(dup.begin(), dup.end());
}

Footprint simulate_scan(const GridMap& true_map, const Pose& pose, double range, int n_rays) {
  const Cell origin = pose.cell();
  if (!true_map.in_bounds(origin) || true_map.state(origin) != CellState::Free) {
    throw Error(ErrorCode::OutOfBounds, "scan pose must be a Free in-bounds cell");
  }
  if (n_rays < 4 || range < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "scan needs n_rays >= 4 and range >= 0");
  }

  std::vector<char> seen(true_map.size(), 0);
  seen[true_map.index(origin)] = 1;

  const double ox = origin.x + 0.5;
  const double oy = origin.y + 0.5;
  const double range_sq = range * range;

  for (int r = 0; r < n_rays; ++r) {
    const double angle = 2.0 * std::numbers::pi * r / n_rays;
    const double dx = std::cos(angle);
    const double dy = std::sin(angle);

    // Amanatides-Woo traversal: visits every cell the ray passes through.
    Cell c = origin;
    const int step_x = dx > 0 ? 1 : -1;
    const int step_y = dy > 0 ? 1 : -1;
    const double t_delta_x = dx != 0 ? std::abs(1.0 / dx) : kUnreachable;
    const double t_delta_y = dy != 0 ? std::abs(1.0 / dy) : kUnreachable;
    double t_max_x = dx != 0 ? 0.5 * t_delta_x : kUnreachable;
    double t_max_y = dy != 0 ? 0.5 * t_delta_y : kUnreachable;

    while (true) {
      if (t_max_x <= t_max_y) {
        c.x += step_x;
        t_max_x += t_delta_x;
      } else {
        c.y += step_y;
        t_max_y += t_delta_y;
      }
      if (!true_map.in_bounds(c)) break;
      const double ex = c.x + 0.5 - ox;
      const double ey = c.y + 0.5 - oy;
      if (ex * ex + ey * ey > range_sq) break;
      seen[true_map.index(c)] = 1;
      if (true_map.state(c) != CellState::Free) break;
    }
  }

  Footprint out;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(true_map.cell_at(i));
  }
  return out;  // index order is row-major already
}

GridMap update_belief(const GridMap& belief, const GridMap& true_map, std::span<const Cell> footprint) {
  if (belief.width() != true_map.width() || belief.height() != true_map.height()) {
    throw Error(ErrorCode::DimensionMismatch, "belief and true map differ in size");
  }
  GridMap out = belief;
  for (const Cell& c : footprint) {
    if (!true_map.in_bounds(c)) throw Error(ErrorCode::OutOfBounds, "footprint cell outside map");
    out.set(c, true_map.state(c), true_map.feature(c));
  }
  return out;
}

namespace {

bool is_boundary(const GridMap& m, Cell c) {
  if (m.state(c) != CellState::Free) return false;
  for (const auto& o : kNeighbors4) {
    const Cell n{c.x + o.dx, c.y + o.dy};
    if (m.in_bounds(n) && m.state(n) == CellState::Unknown) return true;
  }
  return false;
}

Cell pick_centroid(const std::vector<Cell>& cells) {
  double mx = 0.0;
  double my = 0.0;
  for (const Cell& c : cells) {
    mx += c.x;
    my += c.y;
  }
  mx /= static_cast<double>(cells.size());
  my /= static_cast<double>(cells.size());
  // cells are row-major sorted, so strict < keeps the first on ties
  Cell best = cells.front();
  double best_d = kUnreachable;
  for (const Cell& c : cells) {
    const double d = (c.x - mx) * (c.x - mx) + (c.y - my) * (c.y - my);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

}  // namespace

std::vector<Frontier> extract_frontiers(const GridMap& belief, std::size_t min_size) {
  std::vector<char> boundary(belief.size(), 0);
  for (std::size_t i = 0; i < belief.size(); ++i) {
    boundary[i] = is_boundary(belief, belief.cell_at(i)) ? 1 : 0;
  }

  std::vector<Frontier> out;
  std::vector<char> visited(belief.size(), 0);
  std::vector<Cell> stack;
  for (std::size_t i = 0; i < belief.size(); ++i) {
    if (!boundary[i] || visited[i]) continue;
    Frontier f;
    visited[i] = 1;
    stack.push_back(belief.cell_at(i));
    while (!stack.empty()) {
      const Cell c = stack.back();
      stack.pop_back();
      f.cells.push_back(c);
      for (const auto& o : kNeighbors8) {
        const Cell n{c.x + o.dx, c.y + o.dy};
        if (!belief.in_bounds(n)) continue;
        const std::size_t ni = belief.index(n);
        if (boundary[ni] && !visited[ni]) {
          visited[ni] = 1;
          stack.push_back(n);
        }
      }
    }
    if (f.cells.size() < min_size) continue;
    std::ranges::sort(f.cells);
    f.centroid = pick_centroid(f.cells);
    out.push_back(std::move(f));
  }
  std::ranges::sort(out, {}, &Frontier::centroid);
  return out;
}

bool traversable(const GridMap& map, Cell c, UnknownRule rule) {
  if (!map.in_bounds(c)) return false;
  switch (map.state(c)) {
    case CellState::Free: return true;
    case CellState::Occupied: return false;
    case CellState::Unknown: return rule == UnknownRule::Traversable;
  }
  return false;
}

bool can_move(const GridMap& map, Cell c, Offset o, UnknownRule rule) {
  if (!traversable(map, {c.x + o.dx, c.y + o.dy}, rule)) return false;
  if (o.dx != 0 && o.dy != 0) {
    return traversable(map, {c.x + o.dx, c.y}, rule) && traversable(map, {c.x, c.y + o.dy}, rule);
  }
  return true;
}

CostGrid cost_grid(const GridMap& map, std::span<const Cell> sources, UnknownRule rule) {
  if (sources.empty()) throw Error(ErrorCode::InvalidSource, "no source cells");
  CostGrid g{map.width(), map.height(), std::vector<double>(map.size(), kUnreachable)};

  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  for (const Cell& s : sources) {
    if (!traversable(map, s, rule)) {
      throw Error(ErrorCode::InvalidSource, "source cell is not traversable");
    }
    const std::size_t i = map.index(s);
    if (g.cost[i] != 0.0) {
      g.cost[i] = 0.0;
      open.emplace(0.0, i);
    }
  }

  while (!open.empty()) {
    const auto [d, i] = open.top();
    open.pop();
    if (d > g.cost[i]) continue;
    const Cell c = map.cell_at(i);
    for (const auto& o : kNeighbors8) {
      if (!can_move(map, c, o, rule)) continue;
      const std::size_t ni = map.index({c.x + o.dx, c.y + o.dy});
      const double nd = d + step_cost(o);
      if (nd < g.cost[ni]) {
        g.cost[ni] = nd;
        open.emplace(nd, ni);
      }
    }
  }
  return g;
}

double shortest_path_cost(const GridMap& map, Cell from, Cell to, UnknownRule rule) {
  if (!map.in_bounds(to)) throw Error(ErrorCode::OutOfBounds, "target outside map");
  if (from == to && traversable(map, from, rule)) return 0.0;
  const Cell src[] = {from};
  return cost_grid(map, src, rule).at(to);
}

GridMap mask_frontier(const GridMap& map, const Frontier& frontier) {
  GridMap out = map;
  for (const Cell& c : frontier.cells) {
    if (!map.is_free(c)) throw Error(ErrorCode::InvalidFrontier, "frontier cell is not Free");
    out.set(c, CellState::Occupied);
  }
  return out;
}

}  // namespace lspsel
