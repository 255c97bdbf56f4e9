#pragma once

// LP-based 2-approximation for day-dependent instances. The relaxation has
// a fractional completion time x[i][j] per job and the makespan-like
// variable K; for every day and every client subset S it requires
//   sum_{j in S} p[i][j] x[i][j] >= P_i(S)^2 / 2.
// Only the singleton rows are materialized up front; the rest are found by
// sorting x per day and checking prefix sets.

#include <cstddef>
#include <optional>
#include <vector>

#include "fairsched/instance.hpp"
#include "fairsched/simplex.hpp"

namespace fairsched {

using FractionalTimes = std::vector<std::vector<double>>;  // [day][client]

/// Variable layout of the relaxation: x[i][j] at i*n + j, K last.
struct RelaxationLayout {
  std::size_t clients = 0;
  std::size_t days = 0;
  std::size_t x(std::size_t day, std::size_t client) const { return day * clients + client; }
  std::size_t k() const { return days * clients; }
};

/// min K s.t. sum_i x[i][j] <= K for each client, plus the n*m singleton
/// subset rows p x >= p^2 / 2.
LinearProgram build_relaxation_core(const Instance& instance);

struct SubsetCut {
  std::size_t day = 0;
  std::vector<std::size_t> clients;
  /// (P(S)^2/2 - sum p x) divided by p_max^2.
  double violation = 0.0;
};

/// Separation tolerance on the normalized violation.
inline constexpr double kSeparationTolerance = 1e-7;

/// The subset row for `cut`, in the layout of build_relaxation_core.
LpRow subset_row(const Instance& instance, std::size_t day,
                 const std::vector<std::size_t>& clients);

/// Normalized violation of the subset row at x (positive = violated).
double subset_violation(const Instance& instance, const FractionalTimes& x, std::size_t day,
                        const std::vector<std::size_t>& clients);

/// Most violated prefix set of each day (ordering clients by x, ties by
/// index); days without a violation beyond `tolerance` are skipped.
std::vector<SubsetCut> separate_prefix_sets(const Instance& instance, const FractionalTimes& x,
                                            double tolerance = kSeparationTolerance);

/// The single most violated prefix cut over all days, if any.
std::optional<SubsetCut> separation_direct(const Instance& instance, const FractionalTimes& x,
                                           double tolerance = kSeparationTolerance);

struct RelaxationSolution {
  LpStatus status = LpStatus::kIterationLimit;
  double k_lp = 0.0;
  FractionalTimes x;
  std::size_t rounds = 0;
  std::size_t cuts = 0;
  std::vector<double> value_history;
  LinearProgram lp;  // final row set
};

/// Cutting-plane solve of the relaxation; max_rounds == 0 means 10*n*m.
RelaxationSolution solve_relaxation(const Instance& instance, std::size_t max_rounds = 0);

/// Per day, clients by non-decreasing x (quantized to 1e-9 of p_max), ties
/// by ascending index.
Schedule round_lp_solution(const Instance& instance, const FractionalTimes& x);

struct Approx2Result {
  Schedule schedule;
  Time k = 0;
  double k_lp = 0.0;
  /// False when the cutting-plane loop did not converge; k_lp is then not a
  /// proven lower bound.
  bool certified = false;
  RelaxationSolution relaxation;
};

Approx2Result approx2_solve(const Instance& instance, std::size_t max_rounds = 0);

}  // namespace fairsched
