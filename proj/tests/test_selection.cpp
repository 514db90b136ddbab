#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lspsel/selection.hpp"
#include "test_util.hpp"

using namespace lspsel;
using lspsel::test::rel_close;

namespace {

PolicyStats stats(std::string name, long n, double mean, long n_rep = 0, double lb = 0.0) {
  return PolicyStats{std::move(name), n, mean, n_rep, lb};
}

ReplayOutcome outcome(std::string policy, double opt, double sc) {
  ReplayOutcome o;
  o.policy = std::move(policy);
  o.c_lb_opt = opt;
  o.c_lb_sc = sc;
  return o;
}

SelectorConfig config(SelectorMode mode, double c = 100.0) {
  SelectorConfig cfg;
  cfg.mode = mode;
  cfg.c = c;
  return cfg;
}

}  // namespace

TEST_CASE("ucb_score") {
  CHECK(ucb_score(stats("a", 0, 0.0), 3, 100.0) == -std::numeric_limits<double>::infinity());
  CHECK(ucb_score(stats("a", 5, 150.0), 10, 100.0) == doctest::Approx(82.139).epsilon(1e-5));
  CHECK(ucb_score(stats("a", 5, 150.0), 10, 0.0) == 150.0);
  CHECK(ucb_score(stats("a", 1, 42.0), 1, 100.0) == 42.0);  // ln 1 = 0
  CHECK_THROWS_AS(ucb_score(stats("a", 1, 42.0), 0, 100.0), Error);
}

TEST_CASE("select_ucb") {
  const PolicyStats two[] = {stats("p1", 5, 150.0), stats("p2", 5, 200.0)};
  CHECK(select_ucb(two, 10, config(SelectorMode::Ucb)) == 0);

  const PolicyStats unplayed[] = {stats("p1", 5, 10.0), stats("p2", 0, 0.0), stats("p3", 0, 0.0)};
  CHECK(select_ucb(unplayed, 6, config(SelectorMode::Ucb)) == 1);

  const PolicyStats equal[] = {stats("p1", 3, 50.0), stats("p2", 3, 50.0)};
  CHECK(select_ucb(equal, 7, config(SelectorMode::Ucb)) == 0);
}

TEST_CASE("combined_mean_bound") {
  CHECK(combined_mean_bound(stats("a", 0, 0.0, 3, 120.0)) == 120.0);
  CHECK(combined_mean_bound(stats("a", 2, 150.0, 3, 120.0)) == doctest::Approx(132.0));
  CHECK(combined_mean_bound(stats("a", 4, 77.0, 0, 0.0)) == 77.0);
  CHECK_THROWS_AS(combined_mean_bound(stats("a", 0, 0.0)), Error);
}

TEST_CASE("select_constrained") {
  const auto cfg = config(SelectorMode::Constrained);
  const PolicyStats ruled_out[] = {stats("p1", 5, 150.0), stats("p2", 0, 0.0, 5, 170.0)};
  CHECK(constrained_score(ruled_out[0], 10, 100.0) == 150.0);
  CHECK(constrained_score(ruled_out[1], 10, 100.0) == 170.0);
  CHECK(select_constrained(ruled_out, 10, cfg) == 0);

  const PolicyStats promising[] = {stats("p1", 5, 150.0), stats("p2", 0, 0.0, 5, 140.0)};
  CHECK(select_constrained(promising, 10, cfg) == 1);

  const PolicyStats single[] = {stats("p1", 1, 10.0)};
  CHECK(select_constrained(single, 2, cfg) == 0);

  const PolicyStats empty_arm[] = {stats("p1", 1, 10.0), stats("p2", 0, 0.0)};
  CHECK_THROWS_AS(select_constrained(empty_arm, 2, cfg), Error);

  CHECK(select_policy(promising, 10, cfg) == 1);
  CHECK(select_policy(promising, 10, config(SelectorMode::Ucb)) == 1);  // unplayed arm
}

TEST_CASE("update_after_trial") {
  const PolicyStats fresh[] = {stats("a", 0, 0.0), stats("b", 0, 0.0), stats("c", 0, 0.0)};
  BoundConfig sc;
  const ReplayOutcome first[] = {outcome("b", 80.0, 90.0), outcome("c", 100.0, 130.0)};
  const auto s1 = update_after_trial(fresh, 0, 100.0, first, sc);
  CHECK(s1[0] == stats("a", 1, 100.0));
  CHECK(s1[1] == stats("b", 0, 0.0, 1, 90.0));
  CHECK(s1[2] == stats("c", 0, 0.0, 1, 130.0));

  // Running average, outcomes matched by name regardless of order.
  const ReplayOutcome second[] = {outcome("c", 1.0, 1.0), outcome("b", 150.0, 150.0)};
  const auto s2 = update_after_trial(s1, 0, 50.0, second, sc);
  CHECK(s2[0].mean_cost == 75.0);
  CHECK(s2[1].mean_replay_lb == 120.0);

  // Weighted bound folds in p_short * opt + (1 - p_short) * sc.
  const auto s3 = update_after_trial(fresh, 0, 100.0, first, BoundConfig{BoundKind::Weighted, 0.5});
  CHECK(s3[1].mean_replay_lb == 85.0);
  CHECK(s3[2].mean_replay_lb == 115.0);
  const auto s4 = update_after_trial(fresh, 0, 100.0, first, BoundConfig{BoundKind::Optimistic, 0.5});
  CHECK(s4[2].mean_replay_lb == 100.0);

  const PolicyStats solo[] = {stats("a", 2, 10.0)};
  const auto s5 = update_after_trial(solo, 0, 40.0, {}, sc);
  CHECK(s5[0] == stats("a", 3, 20.0));

  const ReplayOutcome partial[] = {outcome("b", 1.0, 2.0)};
  CHECK_THROWS_AS(update_after_trial(fresh, 0, 1.0, partial, sc), Error);
}

TEST_CASE("update_after_trial: bookkeeping exactness") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(10.0, 500.0);
  std::vector<PolicyStats> s{stats("a", 0, 0.0), stats("b", 0, 0.0)};
  std::vector<double> sum(2, 0.0), sum_lb(2, 0.0);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t dep = rng() % 2;
    const double cost = u(rng);
    const double lb = u(rng);
    const ReplayOutcome other[] = {outcome(dep == 0 ? "b" : "a", lb, lb)};
    s = update_after_trial(s, dep, cost, other, BoundConfig{});
    sum[dep] += cost;
    sum_lb[1 - dep] += lb;
  }
  for (std::size_t p = 0; p < 2; ++p) {
    CHECK(rel_close(s[p].mean_cost * static_cast<double>(s[p].n_deployed), sum[p], 1e-9));
    CHECK(rel_close(s[p].mean_replay_lb * static_cast<double>(s[p].n_replayed), sum_lb[p], 1e-9));
  }
}

TEST_CASE("selection: scale equivariance and constraint dominance") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(1.0, 300.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng() % 4;
    std::vector<PolicyStats> s, scaled;
    const double lambda = 0.1 + u(rng) / 30.0;
    for (std::size_t p = 0; p < n; ++p) {
      const long nd = static_cast<long>(rng() % 4);
      const long nr = 1 + static_cast<long>(rng() % 6);
      s.push_back(stats("p" + std::to_string(p), nd, nd ? u(rng) : 0.0, nr, u(rng)));
      auto t = s.back();
      t.mean_cost *= lambda;
      t.mean_replay_lb *= lambda;
      scaled.push_back(t);
    }
    const long k = 2 + static_cast<long>(rng() % 50);
    for (auto mode : {SelectorMode::Ucb, SelectorMode::Constrained}) {
      auto cfg = config(mode);
      auto cfg_scaled = config(mode, 100.0 * lambda);
      CHECK(select_policy(s, k, cfg) == select_policy(scaled, k, cfg_scaled));
    }
    for (const auto& p : s) CHECK(constrained_score(p, k, 100.0) >= ucb_score(p, k, 100.0));
  }
}

TEST_CASE("cumulative_regret") {
  const std::vector<std::vector<double>> cost{{10.0, 20.0, 30.0, 40.0}, {20.0, 30.0, 40.0, 50.0}};
  const std::size_t scen[] = {0, 1, 2, 3};

  const std::size_t best[] = {0, 0, 0, 0};
  CHECK(cumulative_regret(best, scen, cost) == std::vector<double>{0, 0, 0, 0});

  const std::size_t worse[] = {1, 1, 1, 1};
  CHECK(cumulative_regret(worse, scen, cost) == std::vector<double>{10, 20, 30, 40});

  const std::vector<std::vector<double>> jump{{5.0, 5.0, 5.0, 5.0}, {5.0, 5.0, 55.0, 5.0}};
  const std::size_t one_bad[] = {0, 0, 1, 0};
  CHECK(cumulative_regret(one_bad, scen, jump) == std::vector<double>{0, 0, 50, 50});

  // Baseline is chosen over the logged scenarios only.
  const std::vector<std::vector<double>> mixed{{1.0, 100.0}, {50.0, 2.0}};
  const std::size_t only_second[] = {1};
  const std::size_t picked[] = {1};
  CHECK(cumulative_regret(picked, only_second, mixed) == std::vector<double>{0});

  const std::size_t out_of_range[] = {0, 7};
  CHECK_THROWS_AS(cumulative_regret(best, out_of_range, cost), Error);
  auto holes = cost;
  holes[1][2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(cumulative_regret(best, scen, holes), Error);
}

TEST_CASE("parse and print selector modes") {
  CHECK(parse_selector_mode("ucb") == SelectorMode::Ucb);
  CHECK(parse_selector_mode(to_string(SelectorMode::Constrained)) == SelectorMode::Constrained);
  CHECK_THROWS_AS(parse_selector_mode("greedy"), Error);
}
