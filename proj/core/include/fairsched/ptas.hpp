#pragma once

// Day-dependent approximation scheme: guess K~ from the 2-approximation,
// try good batchings, and for each run a feasibility DP over clients that
// picks one configuration (batch index per day) per client.

#include <chrono>
#include <cstddef>
#include <optional>
#include <vector>

#include "fairsched/batching.hpp"
#include "fairsched/instance.hpp"

namespace fairsched {

/// Values (1+eps)^t * k_hat / 2 inside [k_hat / 2, (1+eps) k_hat].
std::vector<double> ktilde_candidates(double k_hat, double eps);

/// Candidates around the 2-approximation's objective.
std::vector<double> estimate_Ktilde(const Instance& instance, double eps);

struct DpLimits {
  std::size_t max_configurations = 1'000'000;
  std::size_t max_states = 10'000'000;
};

struct DpResult {
  std::optional<Assignment> assignment;
  /// A cap stopped the search; "no assignment" is then inconclusive.
  bool aborted = false;
  std::size_t configurations = 0;
  std::size_t states = 0;
  /// Load quantum Delta / n.
  double quantum = 0.0;
  /// Largest K(c) allowed.
  double threshold = 0.0;
};

/// Searches for an assignment into `batching` where every client uses a
/// configuration with K(c) <= (1 + 45 eps) K~ and every batch's rounded-down
/// load fits its capacity. Processing times are rounded down to multiples of
/// Delta / n (Delta = eps^3 K~ / m^2) and loads are kept as integer counts
/// of that quantum, so the true overflow of any batch is at most Delta.
/// Depth-first over clients with a memo of dead (client, load vector)
/// states.
DpResult dp_assign(const Instance& instance, const Batching& batching, double eps,
                   double k_tilde, const DpLimits& limits = {});

struct PtasOptions {
  double eps = 0.5;
  /// Use eps directly instead of eps / 135.
  bool internal_eps = false;
  DpLimits dp;
  /// Batchings taken from the enumerator per K~ candidate, after the
  /// structure-lemma batchings of the heuristic schedules.
  std::size_t enumerated_batchings = 64;
  std::chrono::milliseconds time_budget{std::chrono::minutes(5)};
  /// When set, only the structure-lemma batchings of this schedule are
  /// tried (for every K~ candidate the schedule fits under).
  std::optional<Schedule> oracle_schedule;
};

struct PtasResult {
  Schedule schedule;
  Time k = 0;
  /// True when no cap, truncation or budget cut the search short.
  bool certified = false;
  double eps_internal = 0.0;
  std::optional<double> k_tilde;  // candidate that produced the schedule
  std::size_t batchings_tried = 0;
  std::size_t dp_successes = 0;
  /// True when the 2-approximation (or SPT for one day) is returned.
  bool fallback = false;
};

PtasResult ptas_solve(const Instance& instance, const PtasOptions& options = {});

}  // namespace fairsched
