#pragma once

// Day-invariant constant-factor algorithm: alternate a fixed client order
// with its reverse on successive days, so each client's two-day completion
// sum is P + p_j.

#include <cstddef>
#include <span>

#include "fairsched/instance.hpp"
#include "fairsched/ptas.hpp"
#include "fairsched/rational.hpp"

namespace fairsched {

/// (1 + sqrt 2) / 2, the asymptotic ratio of the inversion schedule.
inline constexpr double kInversionRatio = 1.2071067811865475244;

/// Odd days (first, third, ...) use `order`, even days its reverse.
/// Throws InputError for day-dependent instances or a bad order.
Schedule two_day_inversion(const Instance& instance, std::span<const std::size_t> order);

/// floor(m/2) * (P + p_max) + P
Time inversion_upper_formula(const Instance& instance);

struct InversionCertificate {
  Time k = 0;
  Time upper_formula = 0;
  Rational lb;
  Rational ratio_vs_lb;
  /// True when m < 1/eps and the approximation scheme produced the schedule.
  bool used_ptas = false;
  /// 1 + eps on the scheme branch, (1 + sqrt 2)/2 + 2 eps otherwise.
  double guarantee = 0.0;
};

struct DayInvResult {
  Schedule schedule;
  InversionCertificate certificate;
  bool certified = true;
};

DayInvResult dayinv_approx(const Instance& instance, double eps);
/// Same, with the scheme's options for the m < 1/eps branch (eps is
/// overwritten).
DayInvResult dayinv_approx(const Instance& instance, double eps, PtasOptions scheme);

}  // namespace fairsched
