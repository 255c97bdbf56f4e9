#include "fairsched/dayinv.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "fairsched/bounds.hpp"
#include "fairsched/ptas.hpp"

namespace fairsched {

Schedule two_day_inversion(const Instance& instance, std::span<const std::size_t> order) {
  if (!instance.is_day_invariant()) {
    throw InputError("two-day inversion needs a day-invariant instance");
  }
  std::vector<std::size_t> forward(order.begin(), order.end());
  std::vector<char> seen(instance.clients(), 0);
  if (forward.size() != instance.clients()) throw InputError("order has the wrong length");
  for (std::size_t c : forward) {
    if (c >= instance.clients() || seen[c]) throw InputError("order is not a permutation");
    seen[c] = 1;
  }
  std::vector<std::size_t> backward(forward.rbegin(), forward.rend());
  std::vector<std::vector<std::size_t>> orders;
  orders.reserve(instance.days());
  for (std::size_t i = 0; i < instance.days(); ++i) orders.push_back(i % 2 == 0 ? forward : backward);
  return Schedule(std::move(orders));
}

Time inversion_upper_formula(const Instance& instance) {
  const auto half = static_cast<Time>(instance.days() / 2);
  return half * (instance.total() + instance.max_time()) + instance.total();
}

DayInvResult dayinv_approx(const Instance& instance, double eps) {
  return dayinv_approx(instance, eps, PtasOptions{});
}

DayInvResult dayinv_approx(const Instance& instance, double eps, PtasOptions scheme) {
  if (!instance.is_day_invariant()) {
    throw InputError("dayinv needs a day-invariant instance");
  }
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  DayInvResult result;
  auto& cert = result.certificate;
  if (static_cast<double>(instance.days()) * eps < 1.0) {
    scheme.eps = eps;
    auto ptas = ptas_solve(instance, scheme);
    result.schedule = std::move(ptas.schedule);
    result.certified = ptas.certified;
    cert.used_ptas = true;
    cert.guarantee = 1.0 + eps;
  } else {
    std::vector<std::size_t> order(instance.clients());
    std::iota(order.begin(), order.end(), std::size_t{0});
    result.schedule = two_day_inversion(instance, order);
    cert.guarantee = kInversionRatio + 2.0 * eps;
  }
  cert.k = objective(instance, result.schedule);
  cert.upper_formula = inversion_upper_formula(instance);
  cert.lb = enhanced_lower_bound(instance);
  cert.ratio_vs_lb = Rational(cert.k) / cert.lb;
  return result;
}

}  // namespace fairsched
