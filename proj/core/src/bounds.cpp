#include "fairsched/bounds.hpp"

#include <algorithm>

namespace fairsched {

Rational enhanced_lower_bound(const Instance& instance) {
  if (!instance.is_day_invariant()) {
    throw InputError("the enhanced lower bound needs a day-invariant instance");
  }
  const auto m = static_cast<std::int64_t>(instance.days());
  const Time total = instance.total();
  const Time pmax = instance.max_time();
  // m (P^2 + p_max^2) / (2P)
  return Rational(m) * (Rational(total) * Rational(total) + Rational(pmax) * Rational(pmax)) /
         Rational(2 * total);
}

std::vector<NamedBound> trivial_lower_bounds(const Instance& instance) {
  std::vector<NamedBound> bounds;
  Time client_work = 0;
  for (std::size_t j = 0; j < instance.clients(); ++j) {
    client_work = std::max(client_work, instance.client_total(j));
  }
  bounds.push_back({"client-work", client_work, true});

  if (instance.all_unit()) {
    const auto n = static_cast<Time>(instance.clients());
    const auto m = static_cast<Time>(instance.days());
    bounds.push_back({"unit-time", ((n + 1) * m + 1) / 2, true});
  }

  if (!instance.is_day_invariant()) {
    Time sum = 0;
    for (std::size_t i = 0; i < instance.days(); ++i) sum += instance.day_max(i);
    bounds.push_back({"per-day-max-sum", sum, false});
  }
  return bounds;
}

Time best_closed_form_bound(const Instance& instance) {
  Time best = 0;
  for (const auto& b : trivial_lower_bounds(instance)) {
    if (b.certified) best = std::max(best, b.value);
  }
  if (instance.is_day_invariant()) {
    best = std::max(best, enhanced_lower_bound(instance).ceil());
  }
  return best;
}

}  // namespace fairsched
