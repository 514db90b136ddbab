#pragma once

// Occupancy grids, simulated range sensing, frontier extraction and
// grid shortest paths. Everything here is a pure function of its inputs.

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "lspsel/error.hpp"

namespace lspsel {

enum class CellState : std::uint8_t { Unknown, Free, Occupied };

/// Grid coordinate. Ordering is row-major: by y, then by x.
struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend std::strong_ordering operator<=>(const Cell& a, const Cell& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

struct Pose {
  int x = 0;
  int y = 0;
  double heading = 0.0;

  Cell cell() const { return {x, y}; }
  friend bool operator==(const Pose&, const Pose&) = default;
};

/// Sorted (row-major), duplicate-free list of cells.
using Footprint = std::vector<Cell>;

class GridMap {
 public:
  GridMap() = default;
  GridMap(int width, int height, CellState fill = CellState::Unknown);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return cells_.size(); }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }
  Cell cell_at(std::size_t i) const {
    return {static_cast<int>(i % static_cast<std::size_t>(width_)),
            static_cast<int>(i / static_cast<std::size_t>(width_))};
  }

  CellState state(Cell c) const { return cells_[index(c)]; }
  int feature(Cell c) const { return features_[index(c)]; }
  bool is_free(Cell c) const { return in_bounds(c) && state(c) == CellState::Free; }
  bool is_known(Cell c) const { return state(c) != CellState::Unknown; }

  void set(Cell c, CellState s) { cells_[index(c)] = s; }
  void set(Cell c, CellState s, int feature) {
    cells_[index(c)] = s;
    features_[index(c)] = feature;
  }
  void set_feature(Cell c, int feature) { features_[index(c)] = feature; }

  std::span<const CellState> states() const { return cells_; }
  std::span<const int> features() const { return features_; }

  std::size_t count(CellState s) const;

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<CellState> cells_;
  std::vector<int> features_;
};

struct Frontier {
  std::vector<Cell> cells;  // row-major sorted
  Cell centroid;

  bool contains(Cell c) const;
  friend bool operator==(const Frontier&, const Frontier&) = default;
};

enum class UnknownRule { Blocked, Traversable };

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();
inline constexpr double kDiagonalStep = 1.4142135623730951;

struct CostGrid {
  int width = 0;
  int height = 0;
  std::vector<double> cost;  // kUnreachable where no path exists

  double at(Cell c) const {
    return cost[static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width) +
                static_cast<std::size_t>(c.x)];
  }
  bool reachable(Cell c) const { return at(c) != kUnreachable; }
};

struct ScanParams {
  double range = 20.0;
  int n_rays = 360;
};

/// Casts `n_rays` equal-angle rays from the pose cell centre. A ray stops at
/// (and includes) the first Occupied or Unknown cell; true maps contain no
/// Unknown so live sensing only stops on walls. Cells whose centre is farther
/// than `range` are excluded.
Footprint simulate_scan(const GridMap& true_map, const Pose& pose, double range, int n_rays);
inline Footprint simulate_scan(const GridMap& true_map, const Pose& pose, const ScanParams& p) {
  return simulate_scan(true_map, pose, p.range, p.n_rays);
}

GridMap update_belief(const GridMap& belief, const GridMap& true_map, std::span<const Cell> footprint);

std::vector<Frontier> extract_frontiers(const GridMap& belief, std::size_t min_size = 1);

bool traversable(const GridMap& map, Cell c, UnknownRule rule);

/// Dijkstra over 8-connected moves (axis 1, diagonal sqrt 2, no corner cutting).
CostGrid cost_grid(const GridMap& map, std::span<const Cell> sources, UnknownRule rule);

double shortest_path_cost(const GridMap& map, Cell from, Cell to, UnknownRule rule);

GridMap mask_frontier(const GridMap& map, const Frontier& frontier);

// Neighbour offsets in a fixed order: 4 axis moves followed by 4 diagonals.
struct Offset {
  int dx;
  int dy;
};
inline constexpr Offset kNeighbors8[8] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                                          {1, 1}, {-1, 1}, {1, -1}, {-1, -1}};
inline constexpr Offset kNeighbors4[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

/// Whether a move from `c` by `o` is legal under the traversal rule
/// (target traversable, and for diagonals both shared orthogonal cells too).
bool can_move(const GridMap& map, Cell c, Offset o, UnknownRule rule);

inline double step_cost(Offset o) { return (o.dx != 0 && o.dy != 0) ? kDiagonalStep : 1.0; }

void normalize(Footprint& cells);

}  // namespace lspsel
