#include "fairsched/approx2.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fairsched {

namespace {

double max_time_all_days(const Instance& instance) {
  Time pmax = 0;
  for (std::size_t i = 0; i < (instance.is_day_invariant() ? 1 : instance.days()); ++i) {
    pmax = std::max(pmax, instance.day_max(i));
  }
  return static_cast<double>(pmax);
}

FractionalTimes unpack(const Instance& instance, std::span<const double> values) {
  const RelaxationLayout layout{instance.clients(), instance.days()};
  FractionalTimes x(instance.days(), std::vector<double>(instance.clients()));
  for (std::size_t i = 0; i < instance.days(); ++i)
    for (std::size_t j = 0; j < instance.clients(); ++j) x[i][j] = values[layout.x(i, j)];
  return x;
}

std::vector<std::size_t> order_by_value(const std::vector<double>& values, double quantum) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<long long> key(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) key[j] = std::llround(values[j] / quantum);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  return order;
}

}  // namespace

LinearProgram build_relaxation_core(const Instance& instance) {
  const std::size_t n = instance.clients();
  const std::size_t m = instance.days();
  LinearProgram lp;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      lp.add_variable("x_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
  const std::size_t k = lp.add_variable("K", 0.0, kInfinity, 1.0);
  const RelaxationLayout layout{n, m};
  for (std::size_t j = 0; j < n; ++j) {
    LpRow row;
    row.name = "total_" + std::to_string(j + 1);
    row.sense = RowSense::kLessEqual;
    for (std::size_t i = 0; i < m; ++i) row.terms.push_back({layout.x(i, j), 1.0});
    row.terms.push_back({k, -1.0});
    lp.add_row(std::move(row));
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) lp.add_row(subset_row(instance, i, {j}));
  return lp;
}

LpRow subset_row(const Instance& instance, std::size_t day,
                 const std::vector<std::size_t>& clients) {
  const RelaxationLayout layout{instance.clients(), instance.days()};
  LpRow row;
  row.sense = RowSense::kGreaterEqual;
  row.name = "s" + std::to_string(day + 1);
  double total = 0.0;
  for (std::size_t j : clients) {
    const auto p = static_cast<double>(instance.time(day, j));
    row.terms.push_back({layout.x(day, j), p});
    total += p;
    row.name += "_" + std::to_string(j + 1);
  }
  row.rhs = 0.5 * total * total;
  return row;
}

double subset_violation(const Instance& instance, const FractionalTimes& x, std::size_t day,
                        const std::vector<std::size_t>& clients) {
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t j : clients) {
    const auto p = static_cast<double>(instance.time(day, j));
    total += p;
    weighted += p * x[day][j];
  }
  const double pmax = max_time_all_days(instance);
  return (0.5 * total * total - weighted) / (pmax * pmax);
}

std::vector<SubsetCut> separate_prefix_sets(const Instance& instance, const FractionalTimes& x,
                                            double tolerance) {
  const double pmax = max_time_all_days(instance);
  std::vector<SubsetCut> cuts;
  for (std::size_t i = 0; i < instance.days(); ++i) {
    std::vector<std::size_t> order(instance.clients());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[i][a] < x[i][b]; });
    double total = 0.0;
    double weighted = 0.0;
    double worst = tolerance;
    std::size_t worst_len = 0;
    for (std::size_t l = 0; l < order.size(); ++l) {
      const auto p = static_cast<double>(instance.time(i, order[l]));
      total += p;
      weighted += p * x[i][order[l]];
      const double violation = (0.5 * total * total - weighted) / (pmax * pmax);
      if (violation > worst) {
        worst = violation;
        worst_len = l + 1;
      }
    }
    if (worst_len > 0) {
      SubsetCut cut;
      cut.day = i;
      cut.clients.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(worst_len));
      std::sort(cut.clients.begin(), cut.clients.end());
      cut.violation = worst;
      cuts.push_back(std::move(cut));
    }
  }
  return cuts;
}

std::optional<SubsetCut> separation_direct(const Instance& instance, const FractionalTimes& x,
                                           double tolerance) {
  auto cuts = separate_prefix_sets(instance, x, tolerance);
  if (cuts.empty()) return std::nullopt;
  return *std::max_element(cuts.begin(), cuts.end(), [](const auto& a, const auto& b) {
    return a.violation < b.violation;
  });
}

RelaxationSolution solve_relaxation(const Instance& instance, std::size_t max_rounds) {
  if (max_rounds == 0) max_rounds = 10 * instance.clients() * instance.days();
  Separator separate = [&](std::span<const double> values) {
    std::vector<LpRow> rows;
    for (const auto& cut : separate_prefix_sets(instance, unpack(instance, values))) {
      rows.push_back(subset_row(instance, cut.day, cut.clients));
    }
    return rows;
  };
  auto cp = cutting_plane_solve(build_relaxation_core(instance), separate, max_rounds);
  RelaxationSolution out;
  out.status = cp.solution.status;
  out.rounds = cp.rounds;
  out.cuts = cp.cuts_added;
  out.value_history = std::move(cp.value_history);
  if (!cp.solution.x.empty()) {
    out.k_lp = cp.solution.value;
    out.x = unpack(instance, cp.solution.x);
  }
  out.lp = std::move(cp.lp);
  return out;
}

Schedule round_lp_solution(const Instance& instance, const FractionalTimes& x) {
  const double quantum = 1e-9 * max_time_all_days(instance);
  std::vector<std::vector<std::size_t>> orders;
  orders.reserve(instance.days());
  for (std::size_t i = 0; i < instance.days(); ++i) orders.push_back(order_by_value(x[i], quantum));
  return Schedule(std::move(orders));
}

Approx2Result approx2_solve(const Instance& instance, std::size_t max_rounds) {
  Approx2Result result;
  result.relaxation = solve_relaxation(instance, max_rounds);
  const auto& rel = result.relaxation;
  if (rel.x.empty()) {
    // No iterate at all; fall back to SPT on every day.
    std::vector<std::vector<std::size_t>> orders;
    for (std::size_t i = 0; i < instance.days(); ++i) orders.push_back(spt_order(instance, i));
    result.schedule = Schedule(std::move(orders));
  } else {
    result.schedule = round_lp_solution(instance, rel.x);
  }
  result.k = objective(instance, result.schedule);
  result.k_lp = rel.k_lp;
  result.certified = rel.status == LpStatus::kOptimal;
  return result;
}

}  // namespace fairsched
