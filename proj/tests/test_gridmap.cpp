#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lspsel/gridmap.hpp"
#include "test_util.hpp"

using namespace lspsel;
using lspsel::test::from_ascii;

namespace {

bool contains(const Footprint& f, Cell c) { return std::ranges::binary_search(f, c); }

// Exhaustive relaxation (Bellman-Ford) with its own move legality rules.
std::vector<double> brute_force_costs(const GridMap& m, Cell src, UnknownRule rule) {
  auto ok = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= m.width() || y >= m.height()) return false;
    const auto s = m.state({x, y});
    return s == CellState::Free || (s == CellState::Unknown && rule == UnknownRule::Traversable);
  };
  std::vector<double> d(m.size(), kUnreachable);
  d[m.index(src)] = 0.0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < m.height(); ++y) {
      for (int x = 0; x < m.width(); ++x) {
        if (!ok(x, y)) continue;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            if (!ok(x + dx, y + dy)) continue;
            if (dx != 0 && dy != 0 && (!ok(x + dx, y) || !ok(x, y + dy))) continue;
            const double w = (dx != 0 && dy != 0) ? std::sqrt(2.0) : 1.0;
            const double cand = d[m.index({x + dx, y + dy})] + w;
            if (cand < d[m.index({x, y})] - 1e-12) {
              d[m.index({x, y})] = cand;
              changed = true;
            }
          }
        }
      }
    }
  }
  return d;
}

}  // namespace

TEST_CASE("simulate_scan: zero range sees only the pose cell") {
  const GridMap m(5, 5, CellState::Free);
  const auto f = simulate_scan(m, Pose{2, 2, 0.0}, 0.0, 360);
  REQUIRE(f.size() == 1);
  CHECK(f[0] == Cell{2, 2});
}

TEST_CASE("simulate_scan: open 7x7 map is fully visible") {
  const GridMap m(7, 7, CellState::Free);
  CHECK(simulate_scan(m, Pose{3, 3, 0.0}, 10.0, 360).size() == 49);
}

TEST_CASE("simulate_scan: wall column blocks everything behind it") {
  const GridMap m = from_ascii({
      "..#..",
      "..#..",
      "..#..",
      "..#..",
      "..#..",
  });
  const auto f = simulate_scan(m, Pose{0, 2, 0.0}, 10.0, 360);
  for (int y = 0; y < 5; ++y) CHECK(contains(f, {2, y}));
  for (const Cell& c : f) CHECK(c.x < 3);
}

TEST_CASE("simulate_scan: invalid pose") {
  const GridMap m = from_ascii({"#.", ".."});
  CHECK_THROWS_AS(simulate_scan(m, Pose{0, 0, 0.0}, 5.0, 360), Error);
  CHECK_THROWS_AS(simulate_scan(m, Pose{5, 0, 0.0}, 5.0, 360), Error);
}

TEST_CASE("simulate_scan: footprint grows monotonically with range") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    GridMap m = test::random_map(rng, 12, 12, 0.25, 0.0);
    const Cell p{static_cast<int>(rng() % 12), static_cast<int>(rng() % 12)};
    m.set(p, CellState::Free);
    const double r1 = static_cast<double>(rng() % 8);
    const double r2 = r1 + static_cast<double>(rng() % 8);
    const auto a = simulate_scan(m, Pose{p.x, p.y, 0.0}, r1, 90);
    const auto b = simulate_scan(m, Pose{p.x, p.y, 0.0}, r2, 90);
    CHECK(std::ranges::includes(b, a));
  }
}

TEST_CASE("update_belief") {
  GridMap truth(3, 2, CellState::Free);
  truth.set({0, 0}, CellState::Free, 1);
  truth.set({2, 1}, CellState::Occupied);
  const GridMap empty(3, 2);

  SUBCASE("empty footprint is the identity") { CHECK(update_belief(empty, truth, {}) == empty); }
  SUBCASE("full footprint reveals the true map") {
    Footprint all;
    for (std::size_t i = 0; i < truth.size(); ++i) all.push_back(truth.cell_at(i));
    CHECK(update_belief(empty, truth, all) == truth);
  }
  SUBCASE("single cell") {
    const Cell one[] = {{0, 0}};
    const GridMap b = update_belief(empty, truth, one);
    CHECK(b.count(CellState::Unknown) == 5);
    CHECK(b.state({0, 0}) == CellState::Free);
    CHECK(b.feature({0, 0}) == 1);
  }
  SUBCASE("dimension mismatch") { CHECK_THROWS_AS(update_belief(GridMap(2, 2), truth, {}), Error); }
}

TEST_CASE("update_belief: repeated scans stay consistent with the truth") {
  std::mt19937_64 rng(11);
  GridMap truth = test::random_map(rng, 15, 15, 0.2, 0.0);
  GridMap belief(15, 15);
  for (int i = 0; i < 30; ++i) {
    const Cell p{static_cast<int>(rng() % 15), static_cast<int>(rng() % 15)};
    if (truth.state(p) != CellState::Free) continue;
    belief = update_belief(belief, truth, simulate_scan(truth, Pose{p.x, p.y, 0.0}, 6.0, 120));
  }
  for (std::size_t i = 0; i < belief.size(); ++i) {
    const Cell c = belief.cell_at(i);
    if (!belief.is_known(c)) continue;
    CHECK(belief.state(c) == truth.state(c));
    CHECK(belief.feature(c) == truth.feature(c));
  }
}

TEST_CASE("extract_frontiers") {
  SUBCASE("fully known map has none") { CHECK(extract_frontiers(GridMap(4, 4, CellState::Free)).empty()); }
  SUBCASE("single free cell surrounded by unknown") {
    GridMap m(3, 3);
    m.set({1, 1}, CellState::Free);
    const auto fs = extract_frontiers(m);
    REQUIRE(fs.size() == 1);
    CHECK(fs[0].cells == std::vector<Cell>{{1, 1}});
    CHECK(fs[0].centroid == Cell{1, 1});
  }
  SUBCASE("corridor") {
    const auto fs = extract_frontiers(from_ascii({"..???"}));
    REQUIRE(fs.size() == 1);
    CHECK(fs[0].cells == std::vector<Cell>{{1, 0}});
  }
  SUBCASE("minimum size drops small components") {
    const GridMap m = from_ascii({
        "..?#....",
        "...#..??",
    });
    CHECK(extract_frontiers(m, 1).size() == 2);
    const auto big = extract_frontiers(m, 3);
    REQUIRE(big.size() == 1);
    CHECK(big[0].cells.size() == 3);
  }
  SUBCASE("centroid tie breaks row-major") {
    // two-cell frontier: both cells equidistant from the mean
    const auto fs = extract_frontiers(from_ascii({"..", "??"}));
    REQUIRE(fs.size() == 1);
    CHECK(fs[0].centroid == Cell{0, 0});
  }
}

TEST_CASE("extract_frontiers: partition property on random maps") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const GridMap m = test::random_map(rng, 10, 8, 0.2, 0.4);
    const auto fs = extract_frontiers(m);
    std::vector<Cell> all;
    for (const auto& f : fs) {
      CHECK(f.contains(f.centroid));
      for (const Cell& c : f.cells) {
        CHECK(m.state(c) == CellState::Free);
        all.push_back(c);
      }
    }
    const std::size_t n = all.size();
    normalize(all);
    CHECK(all.size() == n);  // pairwise disjoint

    std::vector<Cell> expected;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const Cell c = m.cell_at(i);
      if (m.state(c) != CellState::Free) continue;
      for (const auto& o : kNeighbors4) {
        const Cell nb{c.x + o.dx, c.y + o.dy};
        if (m.in_bounds(nb) && m.state(nb) == CellState::Unknown) {
          expected.push_back(c);
          break;
        }
      }
    }
    CHECK(all == expected);
    CHECK(std::ranges::is_sorted(fs, {}, &Frontier::centroid));
  }
}

TEST_CASE("cost_grid examples") {
  SUBCASE("corridor") {
    const Cell src[] = {{0, 0}};
    CHECK(cost_grid(GridMap(5, 1, CellState::Free), src, UnknownRule::Blocked).at({4, 0}) == doctest::Approx(4.0));
  }
  SUBCASE("diagonal") {
    const Cell src[] = {{0, 0}};
    CHECK(cost_grid(GridMap(3, 3, CellState::Free), src, UnknownRule::Blocked).at({1, 1}) ==
          doctest::Approx(1.41421));
  }
  SUBCASE("wall disconnects") {
    const GridMap m = from_ascii({".#.", ".#.", ".#."});
    const Cell src[] = {{0, 0}, {0, 2}};
    CHECK_FALSE(cost_grid(m, src, UnknownRule::Blocked).reachable({2, 1}));
  }
  SUBCASE("no corner cutting") {
    const GridMap m = from_ascii({".#", ".."});
    const Cell src[] = {{0, 0}};
    CHECK(cost_grid(m, src, UnknownRule::Blocked).at({1, 1}) == doctest::Approx(2.0));
  }
  SUBCASE("unknown rule") {
    const GridMap m = from_ascii({".?."});
    const Cell src[] = {{0, 0}};
    CHECK_FALSE(cost_grid(m, src, UnknownRule::Blocked).reachable({2, 0}));
    CHECK(cost_grid(m, src, UnknownRule::Traversable).at({2, 0}) == 2.0);
  }
  SUBCASE("invalid source") {
    const GridMap m = from_ascii({"#."});
    const Cell src[] = {{0, 0}};
    CHECK_THROWS_AS(cost_grid(m, src, UnknownRule::Blocked), Error);
    CHECK_THROWS_AS(cost_grid(m, std::span<const Cell>{}, UnknownRule::Blocked), Error);
  }
}

TEST_CASE("shortest_path_cost examples") {
  const GridMap m = from_ascii({"...", "?##"});
  CHECK(shortest_path_cost(m, {1, 0}, {1, 0}, UnknownRule::Blocked) == 0.0);
  CHECK(shortest_path_cost(m, {0, 0}, {2, 0}, UnknownRule::Blocked) == 2.0);
  CHECK(shortest_path_cost(m, {2, 0}, {0, 1}, UnknownRule::Blocked) == kUnreachable);
}

TEST_CASE("cost_grid matches exhaustive relaxation and is symmetric") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 60; ++trial) {
    const int w = 2 + static_cast<int>(rng() % 5);
    const int h = 2 + static_cast<int>(rng() % 5);
    const GridMap m = test::random_map(rng, w, h, 0.25, 0.2);
    const UnknownRule rule = (trial % 2) ? UnknownRule::Traversable : UnknownRule::Blocked;
    std::vector<Cell> trav;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (traversable(m, m.cell_at(i), rule)) trav.push_back(m.cell_at(i));
    }
    if (trav.empty()) continue;
    const Cell src = trav[rng() % trav.size()];
    const Cell one[] = {src};
    const CostGrid g = cost_grid(m, one, rule);
    const auto oracle = brute_force_costs(m, src, rule);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (oracle[i] == kUnreachable) {
        CHECK(g.cost[i] == kUnreachable);
      } else {
        CHECK(g.cost[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
      }
    }
    const Cell other = trav[rng() % trav.size()];
    const double ab = shortest_path_cost(m, src, other, rule);
    const double ba = shortest_path_cost(m, other, src, rule);
    CHECK(test::rel_close(ab, ba, 1e-12));
  }
}

TEST_CASE("mask_frontier") {
  const GridMap m = from_ascii({
      "..????",
      "...#??",
      "?.....",
      "?.#..?",
      "......",
      "...???",
  });
  const auto fs = extract_frontiers(m);
  REQUIRE(fs.size() >= 2);

  SUBCASE("masked frontier disappears") {
    const GridMap masked = mask_frontier(m, fs[0]);
    const auto after = extract_frontiers(masked);
    CHECK(std::ranges::find(after, fs[0]) == after.end());
    std::size_t changed = 0;
    for (std::size_t i = 0; i < m.size(); ++i) changed += m.states()[i] != masked.states()[i];
    CHECK(changed == fs[0].cells.size());
  }
  SUBCASE("masking every frontier leaves none") {
    GridMap all = m;
    for (const auto& f : fs) all = mask_frontier(all, f);
    CHECK(extract_frontiers(all).empty());
  }
  SUBCASE("single-cell frontier changes exactly one cell") {
    GridMap one(3, 3);
    one.set({1, 1}, CellState::Free);
    const GridMap masked = mask_frontier(one, extract_frontiers(one).front());
    CHECK(masked.count(CellState::Occupied) == 1);
    CHECK(masked.count(CellState::Unknown) == 8);
  }
  SUBCASE("non-free member is rejected") {
    Frontier bogus{{{3, 1}}, {3, 1}};
    CHECK_THROWS_AS(mask_frontier(m, bogus), Error);
  }
}
