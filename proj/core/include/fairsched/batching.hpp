#pragma once

// Batchings: per day, a sequence of beta capacities. A job assigned to
// batch b is charged the batch end E[i][b] (prefix sum of capacities), and
// K(A,B) = max_j sum_i E[i][A_i(j)].

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairsched/instance.hpp"

namespace fairsched {

struct Batching {
  std::vector<std::vector<double>> capacity;  // [day][batch]

  std::size_t days() const noexcept { return capacity.size(); }
  std::size_t beta() const noexcept { return capacity.empty() ? 0 : capacity.front().size(); }
  /// Prefix sums of the capacities, per day.
  std::vector<std::vector<double>> ends() const;
  friend bool operator==(const Batching&, const Batching&) = default;
};

struct Assignment {
  std::vector<std::vector<std::size_t>> batch_of;  // [day][client]
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

enum class GridVariant { kDayDependent, kDayInvariant };

/// base * (1+eps)^t for t = 0..chi.
struct CapacityGrid {
  double eps = 0.0;
  double base = 0.0;
  std::size_t chi = 0;
  std::vector<double> values;

  /// base = eps^3 K~ / m^2, chi minimal with base (1+eps)^chi >= K~.
  static CapacityGrid day_dependent(double eps, std::size_t days, double k_tilde);
  /// base = eps^3 P, chi minimal with eps^3 (1+eps)^chi >= 1.
  static CapacityGrid day_invariant(double eps, Time total);

  std::size_t size() const noexcept { return values.size(); }
  std::size_t beta() const noexcept { return 2 * chi + 1; }
  double max() const noexcept { return values.back(); }
};

/// Smallest grid value >= v. Throws std::domain_error when v exceeds the
/// largest grid value.
double round_up_to_grid(double v, const CapacityGrid& grid);

double objective_KAB(const Batching& batching, const Assignment& assignment);

struct FeasibilityReport {
  /// max over batches of (load - capacity)^+
  double max_additive_overflow = 0.0;
  /// max over batches of load / capacity (0 when every batch is empty)
  double max_stretch = 0.0;
  /// Load and capacity of the batch attaining max_stretch, so callers can
  /// redo the ratio exactly.
  Time stretch_load = 0;
  double stretch_capacity = 0.0;
  std::vector<std::vector<Time>> loads;  // [day][batch]
};

FeasibilityReport feasibility_report(const Batching& batching, const Assignment& assignment,
                                     const Instance& instance);

/// Per day: batches in index order, jobs inside a batch by client index.
Schedule assignment_to_schedule(const Batching& batching, const Assignment& assignment,
                                const Instance& instance);

/// Checks dimensions and batch indices; throws InputError.
void validate_assignment(const Batching& batching, const Assignment& assignment,
                         const Instance& instance);

/// Structure-lemma construction from a schedule. With grid points
/// g_t = base (1+eps)^t and a job's start S = C - p:
///   batch 1       jobs with C <= g_0
///   batch 2t      the job with S < g_{t-1} < C <= g_t, if any
///   batch 2t+1    jobs with S >= g_{t-1} and g_{t-1} < C <= g_t
/// Capacities are the loads rounded up to the grid (empty batches get the
/// base). Batch numbers above are 1-based; the returned indices are 0-based.
/// Throws std::domain_error when a completion time exceeds the grid.
std::pair<Batching, Assignment> batching_from_schedule(const Instance& instance,
                                                       const Schedule& schedule,
                                                       const CapacityGrid& grid);

/// Grid of the given variant: day-dependent uses K~ and m, day-invariant P.
CapacityGrid make_grid(const Instance& instance, double eps, double k_tilde,
                       GridVariant variant);

/// Lexicographic stream of all batchings with beta = 2 chi + 1 batches per
/// day and grid-valued capacities, stopping after `limit` items.
class GoodBatchingEnumerator {
 public:
  GoodBatchingEnumerator(const CapacityGrid& grid, std::size_t days, std::size_t limit);

  std::optional<Batching> next();
  /// True once the limit stopped the stream before it was exhausted.
  bool truncated() const noexcept { return truncated_; }
  std::size_t produced() const noexcept { return produced_; }
  /// |grid|^(beta * m) as a double (may be inf).
  double total() const noexcept;

 private:
  const CapacityGrid grid_;
  std::size_t days_;
  std::size_t limit_;
  std::vector<std::size_t> digits_;
  std::size_t produced_ = 0;
  bool started_ = false;
  bool exhausted_ = false;
  bool truncated_ = false;
};

/// Configurations: one batch index per day, with cost K(c) = sum_i E[i][c_i].
struct ConfigurationSet {
  std::vector<std::vector<std::size_t>> configs;
  std::vector<double> cost;
  /// True when the cap stopped the enumeration.
  bool truncated = false;
};

/// Every c with K(c) <= threshold, sorted by cost and then
/// lexicographically. Depth-first with prefix-sum pruning; stops once more
/// than `cap` configurations are found.
ConfigurationSet enumerate_configurations(const Batching& batching, double threshold,
                                          std::size_t cap);

std::string to_json(const Batching& batching, const Assignment& assignment);

}  // namespace fairsched
