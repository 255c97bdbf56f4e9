#pragma once

// Dense linear programming: a two-phase tableau simplex with Bland's rule and
// a cutting-plane driver that grows the row set through a separation
// callback.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace fairsched {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

struct LpTerm {
  std::size_t var = 0;
  double coef = 0.0;
};

struct LpRow {
  std::vector<LpTerm> terms;
  RowSense sense = RowSense::kGreaterEqual;
  double rhs = 0.0;
  std::string name;
};

struct LpVariable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  double cost = 0.0;
};

/// minimize cost . x  subject to rows and per-variable bounds.
class LinearProgram {
 public:
  std::size_t add_variable(std::string name, double lower = 0.0,
                           double upper = kInfinity, double cost = 0.0);
  /// Throws std::invalid_argument on unknown variables or non-finite data.
  std::size_t add_row(LpRow row);

  const std::vector<LpVariable>& variables() const noexcept { return vars_; }
  const std::vector<LpRow>& rows() const noexcept { return rows_; }
  std::size_t num_variables() const noexcept { return vars_.size(); }
  std::size_t num_rows() const noexcept { return rows_.size(); }

  double objective_value(std::span<const double> x) const;
  /// Largest violation over rows and bounds, each relative to
  /// 1 + |rhs| (or 1 + |bound|).
  double max_violation(std::span<const double> x) const;

 private:
  std::vector<LpVariable> vars_;
  std::vector<LpRow> rows_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(LpStatus status) noexcept;

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  std::size_t max_iterations = 200'000;
  /// Relative feasibility and pivot tolerance of the floating-point mode.
  double tolerance = 1e-9;
};

/// Floating-point two-phase simplex, Bland's rule throughout.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

/// Same algorithm over exact rationals; every double coefficient is
/// converted exactly. Meant for small golden instances.
struct ExactLpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  std::string value;            // "p" or "p/q"
  std::vector<std::string> x;   // same format
  double approx_value = 0.0;
  std::vector<double> approx_x;
};
ExactLpSolution solve_lp_exact(const LinearProgram& lp,
                               std::size_t max_iterations = 200'000);

/// Returns rows violated by x; empty when x satisfies the whole family.
using Separator = std::function<std::vector<LpRow>(std::span<const double> x)>;

struct CuttingPlaneResult {
  LpSolution solution;
  std::size_t rounds = 0;
  std::size_t cuts_added = 0;
  /// Objective after each solve; non-decreasing for a minimization.
  std::vector<double> value_history;
  LinearProgram lp;  // core rows plus every generated cut
};

/// Solve, separate, add the returned rows, repeat until the separator is
/// satisfied. Status kIterationLimit (with the last iterate) once
/// `max_rounds` re-solves have been spent.
CuttingPlaneResult cutting_plane_solve(LinearProgram core, const Separator& separate,
                                       std::size_t max_rounds,
                                       const SimplexOptions& options = {});

/// CPLEX LP text format dump.
void write_cplex_lp(const LinearProgram& lp, std::ostream& out);

}  // namespace fairsched
