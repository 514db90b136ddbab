#include "lspsel/envgen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "lspsel/rng.hpp"

namespace lspsel {

std::string_view to_string(EnvFamily f) {
  switch (f) {
    case EnvFamily::MazeGreen: return "maze_green";
    case EnvFamily::MazeGray: return "maze_gray";
    case EnvFamily::MazeRandom: return "maze_random";
    case EnvFamily::OfficeBase: return "office_base";
    case EnvFamily::OfficeDiff: return "office_diff";
  }
  return "unknown";
}

EnvFamily parse_family(std::string_view name) {
  for (EnvFamily f : {EnvFamily::MazeGreen, EnvFamily::MazeGray, EnvFamily::MazeRandom,
                      EnvFamily::OfficeBase, EnvFamily::OfficeDiff}) {
    if (to_string(f) == name) return f;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown environment family '" + std::string(name) + "'");
}

bool is_maze(EnvFamily f) {
  return f == EnvFamily::MazeGreen || f == EnvFamily::MazeGray || f == EnvFamily::MazeRandom;
}

std::string scenario_id(EnvFamily family, std::uint64_t seed) {
  return std::string(to_string(family)) + "-" + std::to_string(seed);
}

std::vector<Cell> free_path(const GridMap& map, Cell from, Cell to) {
  if (!map.is_free(from) || !map.is_free(to)) return {};
  std::vector<std::ptrdiff_t> parent(map.size(), -1);
  std::deque<Cell> queue{from};
  parent[map.index(from)] = static_cast<std::ptrdiff_t>(map.index(from));
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    if (c == to) break;
    for (const auto& o : kNeighbors4) {
      const Cell n{c.x + o.dx, c.y + o.dy};
      if (!map.is_free(n) || parent[map.index(n)] >= 0) continue;
      parent[map.index(n)] = static_cast<std::ptrdiff_t>(map.index(c));
      queue.push_back(n);
    }
  }
  if (parent[map.index(to)] < 0) return {};
  std::vector<Cell> path{to};
  while (path.back() != from) {
    path.push_back(map.cell_at(static_cast<std::size_t>(parent[map.index(path.back())])));
  }
  std::ranges::reverse(path);
  return path;
}

namespace {

constexpr int kMaxAttempts = 32;

void carve_perfect_maze(GridMap& m, Rng& rng) {
  const int nx = (m.width() - 1) / 2;
  const int ny = (m.height() - 1) / 2;
  auto node_cell = [](int i, int j) { return Cell{2 * i + 1, 2 * j + 1}; };

  std::vector<char> visited(static_cast<std::size_t>(nx * ny), 0);
  std::vector<std::pair<int, int>> stack;
  const int si = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(nx)));
  const int sj = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(ny)));
  visited[static_cast<std::size_t>(sj * nx + si)] = 1;
  m.set(node_cell(si, sj), CellState::Free);
  stack.emplace_back(si, sj);

  while (!stack.empty()) {
    const auto [i, j] = stack.back();
    std::pair<int, int> options[4];
    std::size_t n_options = 0;
    for (const auto& o : kNeighbors4) {
      const int ni = i + o.dx;
      const int nj = j + o.dy;
      if (ni < 0 || nj < 0 || ni >= nx || nj >= ny) continue;
      if (visited[static_cast<std::size_t>(nj * nx + ni)]) continue;
      options[n_options++] = {ni, nj};
    }
    if (n_options == 0) {
      stack.pop_back();
      continue;
    }
    const auto [ni, nj] = options[uniform_index(rng, n_options)];
    visited[static_cast<std::size_t>(nj * nx + ni)] = 1;
    const Cell a = node_cell(i, j);
    const Cell b = node_cell(ni, nj);
    m.set({(a.x + b.x) / 2, (a.y + b.y) / 2}, CellState::Free);
    m.set(b, CellState::Free);
    stack.emplace_back(ni, nj);
  }
}

std::vector<Cell> dead_ends(const GridMap& m) {
  std::vector<Cell> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Cell c = m.cell_at(i);
    if (!m.is_free(c)) continue;
    int degree = 0;
    for (const auto& o : kNeighbors4) degree += m.is_free({c.x + o.dx, c.y + o.dy}) ? 1 : 0;
    if (degree == 1) out.push_back(c);
  }
  return out;
}

double euclid(Cell a, Cell b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Uniform random corridor walk from a random cell, until `target_len`
// distinct cells are marked.
void mark_random_walk(GridMap& m, std::size_t target_len, Rng& rng) {
  std::vector<Cell> free;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.states()[i] == CellState::Free) free.push_back(m.cell_at(i));
  }
  target_len = std::min(target_len, free.size());
  Cell cur = free[uniform_index(rng, free.size())];
  std::size_t marked = 0;
  for (std::size_t guard = 0; marked < target_len && guard < 100 * free.size(); ++guard) {
    if (m.feature(cur) != kMarkerLabel) {
      m.set_feature(cur, kMarkerLabel);
      ++marked;
    }
    Cell options[4];
    std::size_t n = 0;
    for (const auto& o : kNeighbors4) {
      const Cell nb{cur.x + o.dx, cur.y + o.dy};
      if (m.is_free(nb)) options[n++] = nb;
    }
    cur = options[uniform_index(rng, n)];
  }
}

}  // namespace

Scenario generate_maze(EnvFamily family, const MazeParams& params, std::uint64_t seed) {
  if (!is_maze(family)) throw Error(ErrorCode::InvalidArgument, "not a maze family");
  if (params.width < 7 || params.height < 7 || params.width % 2 == 0 || params.height % 2 == 0) {
    throw Error(ErrorCode::GenerationFailure, "maze size must be odd and at least 7x7");
  }
  Rng rng(seed);
  const double min_sep = 0.5 * std::hypot(params.width, params.height);

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    GridMap m(params.width, params.height, CellState::Occupied);
    carve_perfect_maze(m, rng);

    const auto ends = dead_ends(m);
    std::vector<std::pair<Cell, Cell>> pairs;
    for (std::size_t i = 0; i < ends.size(); ++i) {
      for (std::size_t j = i + 1; j < ends.size(); ++j) {
        if (euclid(ends[i], ends[j]) >= min_sep) pairs.emplace_back(ends[i], ends[j]);
      }
    }
    if (pairs.empty()) continue;
    auto [start, goal] = pairs[uniform_index(rng, pairs.size())];
    if (uniform_index(rng, 2) == 1) std::swap(start, goal);

    const auto path = free_path(m, start, goal);
    switch (family) {
      case EnvFamily::MazeGreen:
        for (const Cell& c : path) m.set_feature(c, kMarkerLabel);
        break;
      case EnvFamily::MazeGray:
        for (std::size_t i = 0; i < m.size(); ++i) {
          if (m.states()[i] == CellState::Free) m.set_feature(m.cell_at(i), kMarkerLabel);
        }
        for (const Cell& c : path) m.set_feature(c, 0);
        break;
      default:
        mark_random_walk(m, path.size(), rng);
        break;
    }
    return Scenario{std::move(m), start, goal, family, seed, scenario_id(family, seed)};
  }
  throw Error(ErrorCode::GenerationFailure, "no dead-end pair with enough separation");
}

namespace {

struct Rect {
  int x0, y0, x1, y1;  // inclusive
  int w() const { return x1 - x0 + 1; }
  int h() const { return y1 - y0 + 1; }
};

// Start offsets of `count` bands of width `band` across [0, extent), the
// outer two hugging the border wall.
std::vector<int> hallway_offsets(int extent, int count, int band, Rng& rng) {
  std::vector<int> out{1};
  const int last = extent - 1 - band;
  for (int i = 1; i + 1 < count; ++i) {
    const int nominal = 1 + (last - 1) * i / (count - 1);
    const int jitter = static_cast<int>(uniform_index(rng, 5)) - 2;
    out.push_back(nominal + jitter);
  }
  out.push_back(last);
  return out;
}

// Splits [lo, hi] into pieces of at least `min_len` separated by one wall cell.
std::vector<std::pair<int, int>> split_span(int lo, int hi, int min_len, Rng& rng) {
  const int len = hi - lo + 1;
  const int max_pieces = std::min(3, (len + 1) / (min_len + 1));
  const int pieces = 1 + static_cast<int>(uniform_index(rng, static_cast<std::size_t>(std::max(max_pieces, 1))));
  std::vector<std::pair<int, int>> out;
  int cursor = lo;
  for (int p = 0; p < pieces; ++p) {
    const int remaining_pieces = pieces - p - 1;
    const int reserve = remaining_pieces * (min_len + 1);
    const int max_len = hi - cursor + 1 - reserve;
    int piece = max_len;
    if (remaining_pieces > 0) {
      const int nominal = (hi - cursor + 1 - remaining_pieces) / (remaining_pieces + 1);
      piece = std::clamp(nominal + static_cast<int>(uniform_index(rng, 3)) - 1, min_len, max_len);
    }
    out.emplace_back(cursor, cursor + piece - 1);
    cursor += piece + 1;
  }
  return out;
}

bool room_connected(const GridMap& m, const Rect& room) {
  Cell seed{-1, -1};
  std::size_t free_count = 0;
  for (int y = room.y0; y <= room.y1; ++y) {
    for (int x = room.x0; x <= room.x1; ++x) {
      if (m.is_free({x, y})) {
        ++free_count;
        if (seed.x < 0) seed = {x, y};
      }
    }
  }
  if (free_count == 0) return false;
  std::vector<char> seen(m.size(), 0);
  std::vector<Cell> stack{seed};
  seen[m.index(seed)] = 1;
  std::size_t reached = 0;
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    ++reached;
    for (const auto& o : kNeighbors4) {
      const Cell n{c.x + o.dx, c.y + o.dy};
      if (n.x < room.x0 || n.x > room.x1 || n.y < room.y0 || n.y > room.y1) continue;
      if (!m.is_free(n) || seen[m.index(n)]) continue;
      seen[m.index(n)] = 1;
      stack.push_back(n);
    }
  }
  return reached == free_count;
}

}  // namespace

Scenario generate_office(EnvFamily family, const OfficeParams& p, std::uint64_t seed) {
  if (is_maze(family)) throw Error(ErrorCode::InvalidArgument, "not an office family");
  if (p.vertical_hallways < 2 || p.horizontal_hallways < 2 ||
      (p.vertical_hallways - 1) * (p.horizontal_hallways - 1) < 2 || p.hallway_width < 1 ||
      p.min_room_span < 2) {
    throw Error(ErrorCode::GenerationFailure, "office needs at least two hallway loops");
  }
  Rng rng(seed);

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    GridMap m(p.width, p.height, CellState::Occupied);
    const auto xs = hallway_offsets(p.width, p.vertical_hallways, p.hallway_width, rng);
    const auto ys = hallway_offsets(p.height, p.horizontal_hallways, p.hallway_width, rng);
    const int hw = p.hallway_width;

    std::vector<char> hallway(m.size(), 0);
    auto carve_hall = [&](Cell c) {
      m.set(c, CellState::Free);
      hallway[m.index(c)] = 1;
    };
    for (int x0 : xs) {
      for (int y = ys.front(); y < ys.back() + hw; ++y) {
        for (int x = x0; x < x0 + hw; ++x) carve_hall({x, y});
      }
    }
    for (int y0 : ys) {
      for (int x = xs.front(); x < xs.back() + hw; ++x) {
        for (int y = y0; y < y0 + hw; ++y) carve_hall({x, y});
      }
    }

    std::vector<Rect> rooms;
    bool ok = true;
    for (std::size_t bi = 0; bi + 1 < xs.size() && ok; ++bi) {
      for (std::size_t bj = 0; bj + 1 < ys.size() && ok; ++bj) {
        const Rect block{xs[bi] + hw + 1, ys[bj] + hw + 1, xs[bi + 1] - 2, ys[bj + 1] - 2};
        if (block.w() < p.min_room_span || block.h() < p.min_room_span) {
          ok = false;
          break;
        }
        if (block.w() >= block.h()) {
          for (auto [a, b] : split_span(block.x0, block.x1, p.min_room_span, rng)) {
            rooms.push_back({a, block.y0, b, block.y1});
          }
        } else {
          for (auto [a, b] : split_span(block.y0, block.y1, p.min_room_span, rng)) {
            rooms.push_back({block.x0, a, block.x1, b});
          }
        }
      }
    }
    if (!ok || rooms.size() < 4) continue;

    std::vector<Cell> doors;
    for (const Rect& r : rooms) {
      for (int y = r.y0; y <= r.y1; ++y) {
        for (int x = r.x0; x <= r.x1; ++x) m.set({x, y}, CellState::Free, kRoomLabel);
      }
      // Door candidates: wall cells between the room and a hallway.
      std::vector<Cell> candidates;
      auto consider = [&](Cell wall, Cell outside) {
        if (m.in_bounds(outside) && hallway[m.index(outside)]) candidates.push_back(wall);
      };
      for (int x = r.x0 + 1; x < r.x1; ++x) {
        consider({x, r.y0 - 1}, {x, r.y0 - 2});
        consider({x, r.y1 + 1}, {x, r.y1 + 2});
      }
      for (int y = r.y0 + 1; y < r.y1; ++y) {
        consider({r.x0 - 1, y}, {r.x0 - 2, y});
        consider({r.x1 + 1, y}, {r.x1 + 2, y});
      }
      if (candidates.empty()) {
        ok = false;
        break;
      }
      const Cell door = candidates[uniform_index(rng, candidates.size())];
      m.set(door, CellState::Free, kRoomLabel);
      doors.push_back(door);
    }
    if (!ok) continue;

    for (std::size_t ri = 0; ri < rooms.size(); ++ri) {
      const Rect& r = rooms[ri];
      std::vector<Cell> cells;
      for (int y = r.y0; y <= r.y1; ++y) {
        for (int x = r.x0; x <= r.x1; ++x) {
          const Cell c{x, y};
          if (std::abs(c.x - doors[ri].x) + std::abs(c.y - doors[ri].y) <= 2) continue;
          cells.push_back(c);
        }
      }
      shuffle(std::span<Cell>(cells), rng);
      const auto target = static_cast<std::size_t>(std::lround(p.clutter_fraction * r.w() * r.h()));
      std::size_t placed = 0;
      for (const Cell& c : cells) {
        if (placed >= target) break;
        m.set(c, CellState::Occupied, 0);
        if (room_connected(m, r)) {
          ++placed;
        } else {
          m.set(c, CellState::Free, kRoomLabel);
        }
      }
    }

    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!hallway[i]) continue;
      const Cell c = m.cell_at(i);
      bool by_wall = false;
      for (const auto& o : kNeighbors8) {
        const Cell n{c.x + o.dx, c.y + o.dy};
        if (m.in_bounds(n) && m.state(n) == CellState::Occupied) by_wall = true;
      }
      m.set_feature(c, by_wall ? kHallwayLabel : 0);
    }
    if (family == EnvFamily::OfficeDiff) {
      for (std::size_t i = 0; i < m.size(); ++i) {
        const Cell c = m.cell_at(i);
        if (m.feature(c) == kHallwayLabel) {
          m.set_feature(c, kRoomLabel);
        } else if (m.feature(c) == kRoomLabel) {
          m.set_feature(c, kHallwayLabel);
        }
      }
    }

    auto pick_in = [&](const Rect& r) {
      std::vector<Cell> free;
      for (int y = r.y0; y <= r.y1; ++y) {
        for (int x = r.x0; x <= r.x1; ++x) {
          if (m.is_free({x, y})) free.push_back({x, y});
        }
      }
      return free[uniform_index(rng, free.size())];
    };
    const std::size_t a = uniform_index(rng, rooms.size());
    std::size_t b = uniform_index(rng, rooms.size() - 1);
    if (b >= a) ++b;
    const Cell start = pick_in(rooms[a]);
    const Cell goal = pick_in(rooms[b]);
    if (free_path(m, start, goal).empty()) continue;
    return Scenario{std::move(m), start, goal, family, seed, scenario_id(family, seed)};
  }
  throw Error(ErrorCode::GenerationFailure, "office layout did not fit the requested size");
}

Scenario generate_scenario(EnvFamily family, std::uint64_t seed) {
  if (is_maze(family)) return generate_maze(family, MazeParams{}, seed);
  return generate_office(family, OfficeParams{}, seed);
}

}  // namespace lspsel
