#pragma once

// Tableau simplex shared by the floating-point and exact-rational modes.
// Scalar supplies the arithmetic; Traits supplies the sign tests (with a
// tolerance for double, exact for rationals) and conversion from double.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "fairsched/simplex.hpp"

namespace fairsched::detail {

enum class ColumnKind { kStructural, kSlack, kArtificial };

// x_k = offset + sign * y_col, or x_k = y_col - y_col2 for a free variable.
struct VariableMap {
  std::size_t col = 0;
  std::optional<std::size_t> col2;
  double offset = 0.0;
  double sign = 1.0;
};

template <class Scalar, class Traits>
class DenseSimplex {
 public:
  struct Result {
    LpStatus status = LpStatus::kIterationLimit;
    std::vector<Scalar> x;
    Scalar value{};
    std::size_t iterations = 0;
  };

  DenseSimplex(const LinearProgram& lp, std::size_t max_iterations, Traits traits = {})
      : lp_(lp), max_iterations_(max_iterations), traits_(traits) {}

  Result solve() {
    build();
    Result result;
    if (!run_phase_one()) {
      result.status = status_;
      result.iterations = iterations_;
      return result;
    }
    drive_out_artificials();
    run_phase_two();
    result.status = status_;
    result.iterations = iterations_;
    if (status_ == LpStatus::kOptimal || status_ == LpStatus::kIterationLimit) {
      result.x = extract();
      result.value = Scalar(0);
      for (std::size_t k = 0; k < lp_.num_variables(); ++k) {
        result.value += traits_.from_double(lp_.variables()[k].cost) * result.x[k];
      }
    }
    return result;
  }

 private:
  Scalar& at(std::size_t r, std::size_t c) { return tab_[r * (cols_ + 1) + c]; }
  Scalar& rhs(std::size_t r) { return tab_[r * (cols_ + 1) + cols_]; }

  void build() {
    const auto& vars = lp_.variables();
    std::size_t structural = 0;
    maps_.resize(vars.size());
    struct BoundRow {
      std::size_t col;
      double bound;
    };
    std::vector<BoundRow> bound_rows;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      const auto& v = vars[k];
      auto& map = maps_[k];
      if (std::isfinite(v.lower)) {
        map = {structural++, std::nullopt, v.lower, 1.0};
        if (std::isfinite(v.upper)) bound_rows.push_back({map.col, v.upper - v.lower});
      } else if (std::isfinite(v.upper)) {
        map = {structural++, std::nullopt, v.upper, -1.0};
      } else {
        map.col = structural++;
        map.col2 = structural++;
      }
    }
    structural_ = structural;

    struct StdRow {
      std::vector<Scalar> coef;
      RowSense sense;
      Scalar rhs;
    };
    std::vector<StdRow> rows;
    rows.reserve(lp_.num_rows() + bound_rows.size());
    for (const auto& row : lp_.rows()) {
      StdRow out{std::vector<Scalar>(structural, Scalar(0)), row.sense,
                 traits_.from_double(row.rhs)};
      for (const auto& term : row.terms) {
        const auto& map = maps_[term.var];
        const Scalar a = traits_.from_double(term.coef);
        if (map.col2) {
          out.coef[map.col] += a;
          out.coef[*map.col2] -= a;
        } else {
          out.coef[map.col] += a * traits_.from_double(map.sign);
          out.rhs -= a * traits_.from_double(map.offset);
        }
      }
      rows.push_back(std::move(out));
    }
    for (const auto& br : bound_rows) {
      StdRow out{std::vector<Scalar>(structural, Scalar(0)), RowSense::kLessEqual,
                 traits_.from_double(br.bound)};
      out.coef[br.col] = Scalar(1);
      rows.push_back(std::move(out));
    }
    for (auto& row : rows) {
      if (row.rhs < Scalar(0)) {
        for (auto& c : row.coef) c = -c;
        row.rhs = -row.rhs;
        if (row.sense == RowSense::kLessEqual) {
          row.sense = RowSense::kGreaterEqual;
        } else if (row.sense == RowSense::kGreaterEqual) {
          row.sense = RowSense::kLessEqual;
        }
      }
    }

    std::size_t slacks = 0;
    std::size_t artificials = 0;
    for (const auto& row : rows) {
      if (row.sense != RowSense::kEqual) ++slacks;
      if (row.sense != RowSense::kLessEqual) ++artificials;
    }
    rows_ = rows.size();
    cols_ = structural + slacks + artificials;
    kind_.assign(cols_, ColumnKind::kStructural);
    for (std::size_t c = structural; c < structural + slacks; ++c) kind_[c] = ColumnKind::kSlack;
    for (std::size_t c = structural + slacks; c < cols_; ++c) kind_[c] = ColumnKind::kArtificial;
    tab_.assign(rows_ * (cols_ + 1), Scalar(0));
    basis_.assign(rows_, 0);

    std::size_t next_slack = structural;
    std::size_t next_art = structural + slacks;
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < structural; ++c) at(r, c) = rows[r].coef[c];
      rhs(r) = rows[r].rhs;
      switch (rows[r].sense) {
        case RowSense::kLessEqual:
          at(r, next_slack) = Scalar(1);
          basis_[r] = next_slack++;
          break;
        case RowSense::kGreaterEqual:
          at(r, next_slack++) = Scalar(-1);
          at(r, next_art) = Scalar(1);
          basis_[r] = next_art++;
          break;
        case RowSense::kEqual:
          at(r, next_art) = Scalar(1);
          basis_[r] = next_art++;
          break;
      }
    }
  }

  void pivot(std::size_t pr, std::size_t pc) {
    const std::size_t width = cols_ + 1;
    Scalar* prow = &tab_[pr * width];
    const Scalar inv = Scalar(1) / prow[pc];
    for (std::size_t c = 0; c < width; ++c) prow[c] *= inv;
    prow[pc] = Scalar(1);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      Scalar* row = &tab_[r * width];
      const Scalar f = row[pc];
      if (f == Scalar(0)) continue;
      for (std::size_t c = 0; c < width; ++c) {
        if (prow[c] != Scalar(0)) row[c] -= f * prow[c];
      }
      row[pc] = Scalar(0);
    }
    const Scalar f = obj_[pc];
    if (f != Scalar(0)) {
      for (std::size_t c = 0; c < width; ++c) {
        if (prow[c] != Scalar(0)) obj_[c] -= f * prow[c];
      }
      obj_[pc] = Scalar(0);
    }
    basis_[pr] = pc;
    ++iterations_;
  }

  // Bland's rule: lowest-index improving column enters, lowest-index basic
  // variable leaves among ratio-test ties. Returns false when stopped early.
  bool iterate(bool allow_artificial) {
    while (true) {
      if (iterations_ >= max_iterations_) {
        status_ = LpStatus::kIterationLimit;
        return false;
      }
      std::optional<std::size_t> entering;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (!allow_artificial && kind_[c] == ColumnKind::kArtificial) continue;
        if (traits_.negative(obj_[c])) {
          entering = c;
          break;
        }
      }
      if (!entering) return true;
      std::optional<std::size_t> leaving;
      Scalar best{};
      for (std::size_t r = 0; r < rows_; ++r) {
        const Scalar a = at(r, *entering);
        if (!traits_.positive(a)) continue;
        const Scalar ratio = rhs(r) / a;
        if (!leaving || traits_.less(ratio, best) ||
            (!traits_.less(best, ratio) && basis_[r] < basis_[*leaving])) {
          if (!leaving || traits_.less(ratio, best)) best = ratio;
          leaving = r;
        }
      }
      if (!leaving) {
        status_ = LpStatus::kUnbounded;
        return false;
      }
      pivot(*leaving, *entering);
    }
  }

  bool run_phase_one() {
    obj_.assign(cols_ + 1, Scalar(0));
    bool any_artificial = false;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (kind_[basis_[r]] != ColumnKind::kArtificial) continue;
      any_artificial = true;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (kind_[c] != ColumnKind::kArtificial) obj_[c] -= at(r, c);
      }
      obj_[cols_] -= rhs(r);
    }
    if (!any_artificial) return true;
    if (!iterate(true)) {
      // Phase one is bounded below by zero, so only the iteration cap stops it.
      return false;
    }
    Scalar scale(1);
    for (std::size_t r = 0; r < rows_; ++r) scale += traits_.abs(rhs(r));
    const Scalar infeasibility = -obj_[cols_];
    if (traits_.positive_rel(infeasibility, scale)) {
      status_ = LpStatus::kInfeasible;
      return false;
    }
    return true;
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < rows_;) {
      if (kind_[basis_[r]] != ColumnKind::kArtificial) {
        ++r;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (kind_[c] != ColumnKind::kArtificial && traits_.usable_pivot(at(r, c))) {
          col = c;
          break;
        }
      }
      if (col) {
        pivot(r, *col);
        ++r;
      } else {
        remove_row(r);
      }
    }
  }

  void remove_row(std::size_t r) {
    const std::size_t width = cols_ + 1;
    tab_.erase(tab_.begin() + static_cast<std::ptrdiff_t>(r * width),
               tab_.begin() + static_cast<std::ptrdiff_t>((r + 1) * width));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --rows_;
  }

  void run_phase_two() {
    obj_.assign(cols_ + 1, Scalar(0));
    std::vector<Scalar> cost(cols_, Scalar(0));
    const auto& vars = lp_.variables();
    for (std::size_t k = 0; k < vars.size(); ++k) {
      const auto& map = maps_[k];
      const Scalar c = traits_.from_double(vars[k].cost);
      if (map.col2) {
        cost[map.col] += c;
        cost[*map.col2] -= c;
      } else {
        cost[map.col] += c * traits_.from_double(map.sign);
      }
    }
    for (std::size_t c = 0; c < cols_; ++c) obj_[c] = cost[c];
    for (std::size_t r = 0; r < rows_; ++r) {
      const Scalar cb = cost[basis_[r]];
      if (cb == Scalar(0)) continue;
      for (std::size_t c = 0; c <= cols_; ++c) obj_[c] -= cb * at(r, c);
    }
    if (iterate(false)) status_ = LpStatus::kOptimal;
  }

  std::vector<Scalar> extract() {
    std::vector<Scalar> y(cols_, Scalar(0));
    for (std::size_t r = 0; r < rows_; ++r) y[basis_[r]] = rhs(r);
    std::vector<Scalar> x(maps_.size(), Scalar(0));
    for (std::size_t k = 0; k < maps_.size(); ++k) {
      const auto& map = maps_[k];
      if (map.col2) {
        x[k] = y[map.col] - y[*map.col2];
      } else {
        x[k] = traits_.from_double(map.offset) + traits_.from_double(map.sign) * y[map.col];
      }
    }
    return x;
  }

  const LinearProgram& lp_;
  std::size_t max_iterations_;
  Traits traits_;
  std::size_t iterations_ = 0;
  LpStatus status_ = LpStatus::kIterationLimit;
  std::vector<VariableMap> maps_;
  std::size_t structural_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<ColumnKind> kind_;
  std::vector<Scalar> tab_;
  std::vector<Scalar> obj_;
  std::vector<std::size_t> basis_;
};

}  // namespace fairsched::detail
