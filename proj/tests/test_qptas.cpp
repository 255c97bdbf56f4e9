#include <cmath>
#include <map>

#include "doctest.h"
#include "fairsched/bounds.hpp"
#include "fairsched/dayinv.hpp"
#include "fairsched/exact.hpp"
#include "fairsched/qptas.hpp"
#include "support.hpp"

using namespace fairsched;

namespace {

std::vector<std::size_t> iota_order(std::size_t n) {
  std::vector<std::size_t> o(n);
  for (std::size_t j = 0; j < n; ++j) o[j] = j;
  return o;
}

// Pins for the large clients read off an assignment.
Pins pins_from(const Assignment& a, const ConfigurationSet& configs,
               const std::vector<std::size_t>& large) {
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t k = 0; k < configs.configs.size(); ++k) index.emplace(configs.configs[k], k);
  Pins pins;
  for (std::size_t j : large) {
    std::vector<std::size_t> c;
    for (const auto& day : a.batch_of) c.push_back(day[j]);
    pins.clients.push_back(j);
    pins.config.push_back(index.at(c));
  }
  return pins;
}

}  // namespace

TEST_CASE("day reduction plan") {
  const auto plan = plan_day_reduction(4, 10000, 0.5);
  CHECK(plan.applied);
  CHECK(plan.days == 50);
  CHECK(plan.days == static_cast<std::size_t>(std::ceil(6 * std::log(8.0) / 0.25)));
  CHECK(plan.reps == 200);
  CHECK(plan.tail_days == 0);

  const auto small = plan_day_reduction(4, 10, 0.5);
  CHECK_FALSE(small.applied);
  CHECK(small.days == 10);
  CHECK(small.reps == 1);
  CHECK(small.tail_days == 0);

  const auto tail = plan_day_reduction(4, 10'023, 0.5);
  CHECK(tail.reps == 200);
  CHECK(tail.tail_days == 23);
}

TEST_CASE("reduction keeps the row") {
  const auto inst = Instance::day_invariant({3, 1, 2, 5}, 10'000);
  const auto [reduced, plan] = reduce_days(inst, 0.5);
  CHECK(reduced.days() == 50);
  CHECK(reduced.is_day_invariant());
  for (std::size_t j = 0; j < 4; ++j) CHECK(reduced.time(0, j) == inst.time(0, j));
  CHECK_THROWS_AS(reduce_days(Instance::from_matrix({{1, 2}, {2, 1}}), 0.5), InputError);
}

TEST_CASE("expansion stays within the replication bound") {
  std::mt19937_64 rng(8);
  const auto inst = Instance::day_invariant({3, 1, 2, 5}, 10'037);
  const auto [reduced, plan] = reduce_days(inst, 0.5);
  CHECK(plan.tail_days == 37);
  for (int t = 0; t < 20; ++t) {
    const auto small = testing_support::random_schedule(rng, 4, plan.days);
    const auto full = expand_schedule(small, plan);
    CHECK(full.days() == inst.days());
    CHECK(objective(inst, full) <= replication_bound(inst, small, plan));
    CHECK(replication_bound(inst, small, plan) ==
          200 * objective(reduced, small) + 37 * inst.total());
  }
}

TEST_CASE("client split") {
  const auto even = Instance::day_invariant(std::vector<Time>(1000, 1), 2);
  const auto s = classify_clients(even, 0.5, 3);
  CHECK(s.lambda == doctest::Approx(std::pow(0.5, 6) * 1000 / (6 * std::log(12.0))));
  CHECK(s.lambda > 1.0);
  CHECK(s.large.empty());
  CHECK(s.small.size() == 1000);
  const auto fine = classify_clients(even, 0.1, 3);
  CHECK(fine.large.size() == 1000);

  std::vector<Time> skew(50, 1);
  skew[7] = 100000;
  const auto k = classify_clients(Instance::day_invariant(skew, 2), 0.3, 5);
  CHECK(k.large == std::vector<std::size_t>{7});

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = testing_support::random_instance(seed, 1 + seed % 8, 1 + seed % 3, true);
    for (double eps : {0.25, 0.5, 1.0}) {
      const auto grid = CapacityGrid::day_invariant(eps, inst.total());
      const auto split = classify_clients(inst, eps, grid.beta());
      CHECK(split.large.size() + split.small.size() == inst.clients());
      CHECK(static_cast<double>(split.large.size()) <=
            large_client_bound(inst.days(), eps, grid.beta()));
    }
  }
}

TEST_CASE("valid configurations") {
  Batching b{{{1, 1, 1}, {1, 1, 1}}};
  const auto six = enumerate_valid_configurations(b, 4.0 / 15.5, 0.5);
  CHECK(six.configs.size() == 6);
  const auto all = enumerate_valid_configurations(b, 100.0, 0.5);
  CHECK(all.configs.size() == 9);
  Batching one{{{2}, {3}}};
  CHECK(enumerate_valid_configurations(one, 5.0, 0.0).configs.size() == 1);
  CHECK(enumerate_valid_configurations(one, 4.9, 0.0).configs.empty());
}

TEST_CASE("config LP is feasible with structure-lemma pins") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const std::size_t n = 2 + seed % 7;
    const auto inst = testing_support::random_instance(seed + 11, n, 2, true);
    const auto s = two_day_inversion(inst, iota_order(n));
    const double eps = 0.5;
    const auto grid = CapacityGrid::day_invariant(eps, inst.total());
    const auto [batching, witness] = batching_from_schedule(inst, s, grid);
    const auto configs =
        enumerate_valid_configurations(batching, static_cast<double>(objective(inst, s)), eps);
    REQUIRE_FALSE(configs.truncated);
    const auto split = classify_clients(inst, eps, grid.beta());
    const auto lp = solve_config_lp(batching, configs, pins_from(witness, configs, split.large), inst);
    REQUIRE(lp.status == LpStatus::kOptimal);
    for (std::size_t j = 0; j < n; ++j) {
      double total = 0;
      for (double w : lp.weight[j]) total += w;
      CHECK(total == doctest::Approx(1.0));
    }
    const auto r = randomized_round(lp, configs, inst, batching, eps, seed, 64);
    CHECK(r.accepted);
    const Time k = objective(inst, assignment_to_schedule(batching, r.assignment, inst));
    const auto kab = objective_KAB(batching, r.assignment);
    CHECK(kab <= (1 + 29 * eps) * static_cast<double>(objective(inst, s)) * (1 + 1e-12));
    const auto report = feasibility_report(batching, r.assignment, inst);
    if (report.stretch_load > 0) {
      CHECK(Rational(k) <= Rational(report.stretch_load,
                                    static_cast<Time>(report.stretch_capacity)) *
                               Rational(static_cast<Time>(kab)));
    }
  }
}

TEST_CASE("config LP with every client pinned is integral") {
  const auto inst = Instance::day_invariant({2, 3, 4}, 2);
  const auto opt = brute_force_optimum(inst);
  const auto grid = CapacityGrid::day_invariant(0.5, inst.total());
  const auto [batching, witness] = batching_from_schedule(inst, opt.schedule, grid);
  const auto configs = enumerate_valid_configurations(batching, static_cast<double>(opt.optimum), 0.5);
  const auto lp = solve_config_lp(batching, configs, pins_from(witness, configs, {0, 1, 2}), inst);
  REQUIRE(lp.status == LpStatus::kOptimal);
  for (const auto& row : lp.weight)
    for (double w : row) CHECK((w == doctest::Approx(0.0) || w == doctest::Approx(1.0)));
  const auto r = randomized_round(lp, configs, inst, batching, 0.5, 1);
  CHECK(r.accepted);
  CHECK(r.tries == 1);
  CHECK(r.assignment == witness);
}

TEST_CASE("config LP infeasible when capacity is short") {
  const auto inst = Instance::day_invariant({5, 5}, 2);
  Batching b{{{1, 1, 1}, {1, 1, 1}}};
  const auto configs = enumerate_valid_configurations(b, 100.0, 0.5);
  CHECK(solve_config_lp(b, configs, Pins{}, inst).status == LpStatus::kInfeasible);
  CHECK_THROWS_AS(randomized_round(ConfigLpSolution{}, configs, inst, b, 0.5, 0), InputError);
}

TEST_CASE("sampling frequencies") {
  ConfigurationSet configs;
  configs.configs = {{0}, {1}};
  configs.cost = {1, 2};
  ConfigLpSolution lp;
  lp.status = LpStatus::kOptimal;
  lp.weight = {{0.5, 0.5}};
  const int draws = 10000;
  int second = 0;
  for (int s = 0; s < draws; ++s)
    second += sample_assignment(lp, configs, 1, 12345, static_cast<std::uint64_t>(s)).batch_of[0][0] == 1;
  const double sigma = std::sqrt(draws * 0.25);
  CHECK(std::abs(second - draws / 2) <= 3 * sigma);
  CHECK(sample_assignment(lp, configs, 1, 7, 3) == sample_assignment(lp, configs, 1, 7, 3));
}

TEST_CASE("uniform_unit range") {
  CHECK(uniform_unit(0) == 0.0);
  CHECK(uniform_unit(~std::uint64_t{0}) < 1.0);
  CHECK(uniform_unit(std::uint64_t{1} << 63) == 0.5);
}

TEST_CASE("single-try acceptance rate") {
  std::size_t accepted = 0, trials = 0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const std::size_t n = 3 + seed % 6;
    const auto inst = testing_support::random_instance(seed + 11, n, 2, true);
    const auto s = two_day_inversion(inst, iota_order(n));
    const auto grid = CapacityGrid::day_invariant(0.5, inst.total());
    const auto [batching, witness] = batching_from_schedule(inst, s, grid);
    const auto configs =
        enumerate_valid_configurations(batching, static_cast<double>(objective(inst, s)), 0.5);
    const auto split = classify_clients(inst, 0.5, grid.beta());
    const auto lp = solve_config_lp(batching, configs, pins_from(witness, configs, split.large), inst);
    REQUIRE(lp.status == LpStatus::kOptimal);
    for (std::uint64_t t = 0; t < 20; ++t) {
      ++trials;
      accepted += randomized_round(lp, configs, inst, batching, 0.5, seed * 1000 + t, 1).accepted;
    }
  }
  CHECK(trials >= 400);
  CHECK(static_cast<double>(accepted) >= 0.35 * static_cast<double>(trials));
}

TEST_CASE("internal eps") {
  for (double eps : {0.1, 0.5, 1.0}) {
    const double e = qptas_internal_eps(eps);
    CHECK(e > 0);
    CHECK((1 + 26 * e) * (1 + 2 * e) * (1 + 29 * e) * (1 + e) <= 1 + eps);
    const double f = e * (1 + 1e-6);
    CHECK((1 + 26 * f) * (1 + 2 * f) * (1 + 29 * f) * (1 + f) > 1 + eps);
  }
}

TEST_CASE("qptas with oracle schedule") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto inst = testing_support::random_instance(seed + 500, 2 + seed % 4, 2, true);
    const auto opt = brute_force_optimum(inst);
    QptasOptions o;
    o.eps = 0.5;
    o.internal_eps = true;
    o.seed = seed;
    o.oracle_schedule = opt.schedule;
    const auto r = qptas_solve(inst, o);
    CHECK_FALSE(r.certified);
    CHECK(r.k >= opt.optimum);
    CHECK(r.k == objective(inst, r.schedule));
    CHECK(static_cast<double>(r.k) <= 1.5 * 2 * 15.5 * static_cast<double>(opt.optimum));
    if (!r.fallback) {
      CHECK(static_cast<double>(r.k) <= r.stretch * r.k_ab * (1 + 1e-12));
    }
  }
}

TEST_CASE("qptas single client is exact") {
  const auto inst = Instance::day_invariant({6}, 5);
  QptasOptions o;
  o.seed = 1;
  const auto r = qptas_solve(inst, o);
  CHECK(r.k == 30);
  CHECK(r.certified);
}

TEST_CASE("qptas is deterministic per seed") {
  const auto inst = testing_support::random_instance(4, 5, 3, true);
  QptasOptions o;
  o.eps = 0.5;
  o.internal_eps = true;
  o.seed = 99;
  const auto a = qptas_solve(inst, o);
  const auto b = qptas_solve(inst, o);
  CHECK(a.schedule == b.schedule);
  CHECK(a.rounding_tries == b.rounding_tries);
  CHECK(a.k >= brute_force_optimum(inst).optimum);
}

TEST_CASE("qptas on a long horizon") {
  const auto inst = Instance::day_invariant({3, 1, 4, 2}, 10'000);
  QptasOptions o;
  o.eps = 0.5;
  o.internal_eps = true;
  o.seed = 5;
  o.max_configurations = 20'000;
  o.max_pin_guesses = 200;
  const auto r = qptas_solve(inst, o);
  CHECK(r.reduction.applied);
  CHECK(r.reduction.days == 50);
  CHECK(r.reduction.reps == 200);
  CHECK(r.k <= r.replication_bound);
  CHECK(r.k == objective(inst, r.schedule));
  CHECK(Rational(r.k) >= enhanced_lower_bound(inst));
}

TEST_CASE("qptas rejects day-dependent input") {
  CHECK_THROWS_AS(qptas_solve(Instance::from_matrix({{1, 2}, {2, 1}})), InputError);
}
