#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairsched/instance.hpp"
#include "fairsched/rational.hpp"

namespace fairsched {

/// (m/2) * (P + p_max^2 / P) for a day-invariant instance, exact.
/// Throws InputError for day-dependent instances.
Rational enhanced_lower_bound(const Instance& instance);

struct NamedBound {
  std::string name;
  Time value = 0;
  /// False for bounds that are reported but not proven to hold.
  bool certified = true;
};

/// Closed-form bounds:
///  - "client-work": max_j sum_i p[i][j] (equals m * p_max when day-invariant)
///  - "unit-time": ceil((n+1)m/2), only when every processing time is 1
///  - "per-day-max-sum": sum_i max_j p[i][j], day-dependent only and
///    flagged uncertified; it can exceed the optimum.
std::vector<NamedBound> trivial_lower_bounds(const Instance& instance);

/// Largest certified closed-form bound, including the ceiling of the
/// enhanced bound for day-invariant instances.
Time best_closed_form_bound(const Instance& instance);

}  // namespace fairsched
