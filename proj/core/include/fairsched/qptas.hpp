#pragma once

// Day-invariant approximation scheme built on a configuration LP: shrink the
// horizon to D days, pick a refined good batching, pin the large clients,
// solve the LP and round it by sampling one configuration per small client.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fairsched/batching.hpp"
#include "fairsched/instance.hpp"
#include "fairsched/simplex.hpp"

namespace fairsched {

struct DayReduction {
  std::size_t days = 0;  // D
  std::size_t reps = 1;
  std::size_t tail_days = 0;
  /// False for the identity reduction (D = m).
  bool applied = false;
};

/// D = ceil(6 ln(2n) / eps^2) when m >= ln(n) / eps^3 and D < m; otherwise
/// the identity reduction.
DayReduction plan_day_reduction(std::size_t clients, std::size_t days, double eps);

/// The D-day instance and its plan. Requires a day-invariant instance.
std::pair<Instance, DayReduction> reduce_days(const Instance& instance, double eps);

/// Repeats a D-day schedule `reps` times and fills the tail with the
/// identity order.
Schedule expand_schedule(const Schedule& reduced, const DayReduction& plan);

/// reps * K(reduced) + tail_days * P
Time replication_bound(const Instance& instance, const Schedule& reduced,
                       const DayReduction& plan);

struct ClientSplit {
  std::vector<std::size_t> large;
  std::vector<std::size_t> small;
  double lambda = 0.0;
};

/// Lambda = eps^6 P / (6 ln(2 m beta)); clients with p_j >= Lambda are large.
ClientSplit classify_clients(const Instance& instance, double eps, std::size_t beta);

/// ceil(6 ln(2 m beta) / eps^6)
double large_client_bound(std::size_t days, double eps, std::size_t beta);

/// Configurations with K(c) <= (1 + 29 eps) K~, sorted by K(c) then lex.
ConfigurationSet enumerate_valid_configurations(const Batching& batching, double k_tilde,
                                                double eps, std::size_t cap = 100'000);

/// Pinned configuration (index into the set) per large client.
struct Pins {
  std::vector<std::size_t> clients;
  std::vector<std::size_t> config;
};

struct ConfigLpSolution {
  LpStatus status = LpStatus::kInfeasible;
  /// weight[j][k] for configuration k of client j (pinned clients carry a
  /// single 1).
  std::vector<std::vector<double>> weight;
};

/// Feasibility LP: each client picks a convex combination of
/// configurations, batch loads stay within capacity, large clients are
/// pinned.
ConfigLpSolution solve_config_lp(const Batching& batching, const ConfigurationSet& configs,
                                 const Pins& pins, const Instance& instance);

/// The LP itself, for dumping. Variable k of client j is named x_j_k.
LinearProgram build_config_lp(const Batching& batching, const ConfigurationSet& configs,
                              const Pins& pins, const Instance& instance);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
double uniform_unit(std::uint64_t bits);

/// One rounding attempt drawn from a generator seeded with (seed, attempt).
Assignment sample_assignment(const ConfigLpSolution& lp, const ConfigurationSet& configs,
                             std::size_t days, std::uint64_t seed, std::uint64_t attempt);

struct RoundingOutcome {
  Assignment assignment;
  bool accepted = false;
  std::size_t tries = 0;
  double stretch = 0.0;
};

/// Samples until the assignment is (1 + 2 eps)-stretched or max_tries runs
/// out; the last sample is returned either way.
RoundingOutcome randomized_round(const ConfigLpSolution& lp, const ConfigurationSet& configs,
                                 const Instance& instance, const Batching& batching, double eps,
                                 std::uint64_t seed, std::size_t max_tries = 64);

struct QptasOptions {
  double eps = 0.5;
  bool internal_eps = false;
  std::uint64_t seed = 0;
  std::size_t max_tries = 64;
  std::size_t max_configurations = 100'000;
  std::size_t max_pin_guesses = 10'000;
  std::chrono::milliseconds time_budget{std::chrono::minutes(5)};
  /// Schedule on the reduced horizon whose structure-lemma batching and
  /// assignment (as pins) are used instead of the heuristic seeds.
  std::optional<Schedule> oracle_schedule;
};

struct QptasResult {
  Schedule schedule;
  Time k = 0;
  bool certified = false;
  double eps_internal = 0.0;
  DayReduction reduction;
  /// reps * K(reduced) + tail * P for the reduced schedule that was expanded.
  Time replication_bound = 0;
  std::optional<double> k_tilde;
  std::size_t lp_solves = 0;
  std::size_t lp_feasible = 0;
  std::size_t rounding_tries = 0;
  /// Observed stretch and K(A,B) of the winning assignment (on D days).
  double stretch = 0.0;
  double k_ab = 0.0;
  bool fallback = false;
};

/// Largest eps' with (1+26e)(1+2e)(1+29e)(1+e) <= 1 + eps.
double qptas_internal_eps(double eps);

QptasResult qptas_solve(const Instance& instance, const QptasOptions& options = {});

}  // namespace fairsched
