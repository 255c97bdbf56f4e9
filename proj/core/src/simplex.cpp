#include "fairsched/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "dense_simplex.hpp"

namespace fairsched {

namespace {

struct DoubleTraits {
  double tol = 1e-9;
  double from_double(double v) { return v; }
  bool negative(double v) { return v < -tol; }
  bool positive(double v) { return v > tol; }
  bool positive_rel(double v, double scale) { return v > tol * scale; }
  bool usable_pivot(double v) { return std::abs(v) > tol; }
  bool less(double a, double b) { return a < b - tol * (1.0 + std::abs(b)); }
  double abs(double v) { return std::abs(v); }
};

using ExactScalar = boost::multiprecision::cpp_rational;

struct ExactTraits {
  ExactScalar from_double(double v) { return ExactScalar(v); }
  bool negative(const ExactScalar& v) { return v < 0; }
  bool positive(const ExactScalar& v) { return v > 0; }
  bool positive_rel(const ExactScalar& v, const ExactScalar&) { return v > 0; }
  bool usable_pivot(const ExactScalar& v) { return v != 0; }
  bool less(const ExactScalar& a, const ExactScalar& b) { return a < b; }
  ExactScalar abs(const ExactScalar& v) { return boost::multiprecision::abs(v); }
};

std::string exact_str(const ExactScalar& v) {
  const auto num = boost::multiprecision::numerator(v);
  const auto den = boost::multiprecision::denominator(v);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double row_activity(const LpRow& row, std::span<const double> x) {
  double sum = 0.0;
  for (const auto& t : row.terms) sum += t.coef * x[t.var];
  return sum;
}

}  // namespace

std::size_t LinearProgram::add_variable(std::string name, double lower, double upper,
                                        double cost) {
  if (std::isnan(lower) || std::isnan(upper) || !std::isfinite(cost) || lower > upper) {
    throw std::invalid_argument("bad bounds or cost for variable " + name);
  }
  vars_.push_back({std::move(name), lower, upper, cost});
  return vars_.size() - 1;
}

std::size_t LinearProgram::add_row(LpRow row) {
  if (!std::isfinite(row.rhs)) throw std::invalid_argument("non-finite rhs in row " + row.name);
  for (const auto& t : row.terms) {
    if (t.var >= vars_.size()) {
      throw std::invalid_argument("row " + row.name + " references an undeclared variable");
    }
    if (!std::isfinite(t.coef)) {
      throw std::invalid_argument("non-finite coefficient in row " + row.name);
    }
  }
  rows_.push_back(std::move(row));
  return rows_.size() - 1;
}

double LinearProgram::objective_value(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < vars_.size(); ++k) sum += vars_[k].cost * x[k];
  return sum;
}

double LinearProgram::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (const auto& row : rows_) {
    const double act = row_activity(row, x);
    double v = 0.0;
    switch (row.sense) {
      case RowSense::kLessEqual: v = act - row.rhs; break;
      case RowSense::kGreaterEqual: v = row.rhs - act; break;
      case RowSense::kEqual: v = std::abs(act - row.rhs); break;
    }
    worst = std::max(worst, v / (1.0 + std::abs(row.rhs)));
  }
  for (std::size_t k = 0; k < vars_.size(); ++k) {
    if (std::isfinite(vars_[k].lower)) {
      worst = std::max(worst, (vars_[k].lower - x[k]) / (1.0 + std::abs(vars_[k].lower)));
    }
    if (std::isfinite(vars_[k].upper)) {
      worst = std::max(worst, (x[k] - vars_[k].upper) / (1.0 + std::abs(vars_[k].upper)));
    }
  }
  return worst;
}

const char* to_string(LpStatus status) noexcept {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration-limit";
  }
  return "unknown";
}

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  detail::DenseSimplex<double, DoubleTraits> solver(lp, options.max_iterations,
                                                    DoubleTraits{options.tolerance});
  auto result = solver.solve();
  LpSolution out;
  out.status = result.status;
  out.iterations = result.iterations;
  out.x = std::move(result.x);
  out.value = result.value;
  return out;
}

ExactLpSolution solve_lp_exact(const LinearProgram& lp, std::size_t max_iterations) {
  detail::DenseSimplex<ExactScalar, ExactTraits> solver(lp, max_iterations);
  auto result = solver.solve();
  ExactLpSolution out;
  out.status = result.status;
  if (!result.x.empty()) {
    out.value = exact_str(result.value);
    out.approx_value = result.value.convert_to<double>();
    for (const auto& v : result.x) {
      out.x.push_back(exact_str(v));
      out.approx_x.push_back(v.convert_to<double>());
    }
  }
  return out;
}

CuttingPlaneResult cutting_plane_solve(LinearProgram core, const Separator& separate,
                                       std::size_t max_rounds,
                                       const SimplexOptions& options) {
  CuttingPlaneResult result;
  result.lp = std::move(core);
  for (std::size_t round = 0; round < std::max<std::size_t>(max_rounds, 1); ++round) {
    result.solution = solve_lp(result.lp, options);
    ++result.rounds;
    if (result.solution.status != LpStatus::kOptimal) return result;
    result.value_history.push_back(result.solution.value);
    auto cuts = separate(result.solution.x);
    if (cuts.empty()) return result;
    for (auto& cut : cuts) {
      result.lp.add_row(std::move(cut));
      ++result.cuts_added;
    }
  }
  result.solution.status = LpStatus::kIterationLimit;
  return result;
}

void write_cplex_lp(const LinearProgram& lp, std::ostream& out) {
  const auto& vars = lp.variables();
  auto name = [&](std::size_t k) {
    return vars[k].name.empty() ? "v" + std::to_string(k) : vars[k].name;
  };
  auto term = [&](double coef, const std::string& var, bool first) {
    if (coef < 0) {
      out << (first ? "- " : " - ");
    } else if (!first) {
      out << " + ";
    }
    out << std::abs(coef) << ' ' << var;
  };
  out.precision(17);
  out << "\\ generated by fairsched\nMinimize\n obj:";
  bool first = true;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (vars[k].cost == 0.0) continue;
    if (first) out << ' ';
    term(vars[k].cost, name(k), first);
    first = false;
  }
  if (first) out << " 0 " << (vars.empty() ? "dummy" : name(0));
  out << "\nSubject To\n";
  for (std::size_t r = 0; r < lp.num_rows(); ++r) {
    const auto& row = lp.rows()[r];
    out << ' ' << (row.name.empty() ? "r" + std::to_string(r) : row.name) << ':';
    bool f = true;
    for (const auto& t : row.terms) {
      if (f) out << ' ';
      term(t.coef, name(t.var), f);
      f = false;
    }
    if (f) out << " 0 " << name(0);
    switch (row.sense) {
      case RowSense::kLessEqual: out << " <= "; break;
      case RowSense::kGreaterEqual: out << " >= "; break;
      case RowSense::kEqual: out << " = "; break;
    }
    out << row.rhs << '\n';
  }
  out << "Bounds\n";
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const auto& v = vars[k];
    if (!std::isfinite(v.lower) && !std::isfinite(v.upper)) {
      out << ' ' << name(k) << " free\n";
    } else if (!std::isfinite(v.lower)) {
      out << " -inf <= " << name(k) << " <= " << v.upper << '\n';
    } else if (!std::isfinite(v.upper)) {
      if (v.lower != 0.0) out << ' ' << name(k) << " >= " << v.lower << '\n';
    } else {
      out << ' ' << v.lower << " <= " << name(k) << " <= " << v.upper << '\n';
    }
  }
  out << "End\n";
}

}  // namespace fairsched
