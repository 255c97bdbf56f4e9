#pragma once

#include <chrono>
#include <cstddef>
#include <optional>

#include "fairsched/instance.hpp"

namespace fairsched {

struct ExactLimits {
  std::size_t max_nodes = 200'000'000;
  std::chrono::milliseconds time_budget{std::chrono::minutes(5)};
};

struct ExactResult {
  Time optimum = 0;
  Schedule schedule;
  std::size_t nodes_explored = 0;
  /// False when a limit stopped the search; `optimum` is then only the best
  /// incumbent.
  bool certified = false;
};

/// Depth-first branch and bound over days, building each day's order one
/// position at a time. Pruning uses per-client remaining work and an
/// averaging bound; identical clients and identical consecutive days
/// (after the first) are enumerated once. Among optimal schedules the first
/// in lexicographic order of the search is returned.
///
/// `warm_start`, when given, seeds the incumbent value. Without it the
/// two-day inversion (day-invariant) or the LP 2-approximation is used.
ExactResult brute_force_optimum(const Instance& instance, const ExactLimits& limits = {},
                                const std::optional<Schedule>& warm_start = std::nullopt);

}  // namespace fairsched
