#include <sstream>

#include "doctest.h"
#include "fairsched/approx2.hpp"
#include "fairsched/simplex.hpp"
#include "support.hpp"

using namespace fairsched;

TEST_CASE("lp: single bound") {
  LinearProgram lp;
  const auto x = lp.add_variable("x", 0.0, kInfinity, 1.0);
  lp.add_row({{{x, 1.0}}, RowSense::kGreaterEqual, 3.0, "r"});
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.x[x] == doctest::Approx(3.0));
  CHECK(sol.value == doctest::Approx(3.0));
}

TEST_CASE("lp: sum of two lower-bounded variables") {
  LinearProgram lp;
  const auto k = lp.add_variable("K", 0.0, kInfinity, 1.0);
  const auto x1 = lp.add_variable("x1");
  const auto x2 = lp.add_variable("x2");
  lp.add_row({{{k, 1.0}, {x1, -1.0}, {x2, -1.0}}, RowSense::kGreaterEqual, 0.0, "sum"});
  lp.add_row({{{x1, 1.0}}, RowSense::kGreaterEqual, 1.0, "a"});
  lp.add_row({{{x2, 1.0}}, RowSense::kGreaterEqual, 2.0, "b"});
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.value == doctest::Approx(3.0));
  CHECK(lp.max_violation(sol.x) < 1e-9);
}

TEST_CASE("lp: infeasible and unbounded are reported") {
  LinearProgram a;
  const auto x = a.add_variable("x", 0.0, kInfinity, 1.0);
  a.add_row({{{x, 1.0}}, RowSense::kLessEqual, 1.0, "hi"});
  a.add_row({{{x, 1.0}}, RowSense::kGreaterEqual, 2.0, "lo"});
  CHECK(solve_lp(a).status == LpStatus::kInfeasible);
  CHECK(solve_lp_exact(a).status == LpStatus::kInfeasible);

  LinearProgram b;
  const auto y = b.add_variable("y", 0.0, kInfinity, -1.0);
  b.add_row({{{y, 1.0}}, RowSense::kGreaterEqual, 1.0, "lo"});
  CHECK(solve_lp(b).status == LpStatus::kUnbounded);
}

TEST_CASE("lp: equality rows, upper bounds and free variables") {
  LinearProgram lp;
  const auto x = lp.add_variable("x", -kInfinity, kInfinity, 1.0);
  const auto y = lp.add_variable("y", 1.0, 4.0, -2.0);
  lp.add_row({{{x, 1.0}, {y, 1.0}}, RowSense::kEqual, 2.0, "eq"});
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.x[y] == doctest::Approx(4.0));
  CHECK(sol.x[x] == doctest::Approx(-2.0));
  CHECK(sol.value == doctest::Approx(-10.0));
}

TEST_CASE("lp: rejects undeclared variables and non-finite data") {
  LinearProgram lp;
  lp.add_variable("x");
  CHECK_THROWS_AS(lp.add_row({{{3, 1.0}}, RowSense::kLessEqual, 1.0, "bad"}), std::invalid_argument);
  CHECK_THROWS_AS(lp.add_row({{{0, kInfinity}}, RowSense::kLessEqual, 1.0, "bad"}),
                  std::invalid_argument);
}

TEST_CASE("lp: full relaxation goldens in exact arithmetic") {
  using testing_support::full_relaxation;
  CHECK(solve_lp_exact(full_relaxation(Instance::day_invariant({1, 2}, 2))).value == "3");
  CHECK(solve_lp_exact(full_relaxation(Instance::from_matrix({{1, 2}, {2, 1}}))).value == "5/2");
  CHECK(solve_lp_exact(full_relaxation(Instance::from_matrix({{1, 2}}))).value == "3/2");
  CHECK(solve_lp_exact(full_relaxation(Instance::from_matrix({{1}}))).value == "1/2");
  const auto six = Instance::from_matrix({{3, 7, 1, 9, 4, 6}, {8, 2, 5, 5, 1, 7}});
  const auto exact = solve_lp_exact(full_relaxation(six));
  CHECK(exact.value == "2339/104");
  CHECK(solve_lp(full_relaxation(six)).value == doctest::Approx(22.490384615384617).epsilon(1e-9));
}

TEST_CASE("cutting plane: no cuts means a plain solve") {
  LinearProgram lp;
  const auto x = lp.add_variable("x", 0.0, kInfinity, 1.0);
  lp.add_row({{{x, 1.0}}, RowSense::kGreaterEqual, 3.0, "r"});
  const auto cp = cutting_plane_solve(lp, [](std::span<const double>) { return std::vector<LpRow>{}; }, 5);
  CHECK(cp.solution.status == LpStatus::kOptimal);
  CHECK(cp.solution.value == doctest::Approx(solve_lp(lp).value));
  CHECK(cp.rounds == 1);
  CHECK(cp.cuts_added == 0);
}

TEST_CASE("cutting plane: round limit reports iteration-limit with the last iterate") {
  LinearProgram lp;
  const auto x = lp.add_variable("x", 0.0, kInfinity, 1.0);
  lp.add_row({{{x, 1.0}}, RowSense::kGreaterEqual, 0.0, "r"});
  double level = 0.0;
  const auto cp = cutting_plane_solve(
      lp,
      [&](std::span<const double>) {
        level += 1.0;
        return std::vector<LpRow>{{{{x, 1.0}}, RowSense::kGreaterEqual, level, "c"}};
      },
      3);
  CHECK(cp.solution.status == LpStatus::kIterationLimit);
  CHECK(cp.solution.x.size() == 1);
}

TEST_CASE("cutting plane: matches the materialized LP and is monotone") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 2 + seed % 7;
    const std::size_t m = 1 + seed % 3;
    const auto inst = testing_support::random_instance(seed, n, m, seed % 4 == 0);
    const auto rel = solve_relaxation(inst);
    REQUIRE(rel.status == LpStatus::kOptimal);
    const auto full = solve_lp(testing_support::full_relaxation(inst));
    REQUIRE(full.status == LpStatus::kOptimal);
    CHECK(std::abs(rel.k_lp - full.value) <= 1e-7 * std::max(1.0, full.value));
    for (std::size_t r = 1; r < rel.value_history.size(); ++r) {
      CHECK(rel.value_history[r] >= rel.value_history[r - 1] - 1e-9);
    }
  }
}

TEST_CASE("cplex writer") {
  LinearProgram lp;
  const auto x = lp.add_variable("x", 0.0, kInfinity, 1.0);
  const auto y = lp.add_variable("y", -kInfinity, kInfinity, 0.0);
  lp.add_row({{{x, 1.0}, {y, -2.0}}, RowSense::kGreaterEqual, 3.0, "c1"});
  std::ostringstream out;
  write_cplex_lp(lp, out);
  const auto text = out.str();
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("c1: 1 x - 2 y >= 3") != std::string::npos);
  CHECK(text.find("y free") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}
