#pragma once

// Instance and schedule model for the fair repetitive scheduling problem:
// n clients each submit one job per day over m days; every day is sequenced
// independently and the objective is the largest per-client sum of
// completion times.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairsched {

using Time = std::int64_t;

inline constexpr std::size_t kMaxClients = 10'000;
inline constexpr std::size_t kMaxDays = 1'000'000;

/// Malformed input: bad dimensions, non-positive times, inconsistent flags.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable problem instance. Day-invariant instances keep a single row of
/// processing times that is logically replicated over all days.
class Instance {
 public:
  /// Builds from an m x n matrix (row i = day i). The day-invariant flag is
  /// derived from the data and identical rows are stored once.
  static Instance from_matrix(std::vector<std::vector<Time>> p);

  /// Day-invariant instance: client j takes `times[j]` on each of `days`.
  static Instance day_invariant(std::vector<Time> times, std::size_t days);

  std::size_t clients() const noexcept { return n_; }
  std::size_t days() const noexcept { return m_; }
  bool is_day_invariant() const noexcept { return rows_.size() == 1; }

  Time time(std::size_t day, std::size_t client) const noexcept {
    return rows_[rows_.size() == 1 ? 0 : day][client];
  }
  std::span<const Time> day_times(std::size_t day) const noexcept {
    return rows_[rows_.size() == 1 ? 0 : day];
  }

  /// Total processing time of one day.
  Time day_total(std::size_t day) const noexcept {
    return totals_[totals_.size() == 1 ? 0 : day];
  }
  Time day_max(std::size_t day) const noexcept {
    return maxima_[maxima_.size() == 1 ? 0 : day];
  }
  /// P and p_max; meaningful for day-invariant instances (day 0 otherwise).
  Time total() const noexcept { return totals_[0]; }
  Time max_time() const noexcept { return maxima_[0]; }

  /// Sum over all days of one client's own processing times.
  Time client_total(std::size_t client) const noexcept;

  bool all_unit() const noexcept;

  /// Materialized m x n matrix (replicates day-invariant rows).
  std::vector<std::vector<Time>> matrix() const;

  /// Same client data restricted or replicated to `days` days; requires a
  /// day-invariant instance.
  Instance with_days(std::size_t days) const;

  /// Every processing time multiplied by `factor`.
  Instance scaled(Time factor) const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  Instance(std::size_t n, std::size_t m, std::vector<std::vector<Time>> rows);

  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::vector<Time>> rows_;
  std::vector<Time> totals_;
  std::vector<Time> maxima_;
};

/// One processing order per day; orders[i][k] is the client in position k
/// on day i (all indices 0-based).
class Schedule {
 public:
  Schedule() = default;
  explicit Schedule(std::vector<std::vector<std::size_t>> orders);

  /// Identity order on every day.
  static Schedule identity(std::size_t clients, std::size_t days);

  std::size_t days() const noexcept { return orders_.size(); }
  std::size_t clients() const noexcept {
    return orders_.empty() ? 0 : orders_.front().size();
  }
  std::span<const std::size_t> order(std::size_t day) const noexcept {
    return orders_[day];
  }
  const std::vector<std::vector<std::size_t>>& orders() const noexcept {
    return orders_;
  }

  /// Position of each client on `day` (inverse permutation).
  std::vector<std::size_t> positions(std::size_t day) const;

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  std::vector<std::vector<std::size_t>> orders_;
};

struct Evaluation {
  std::vector<std::vector<Time>> completion;  // [day][client]
  std::vector<Time> per_client_total;
  Time objective = 0;
  std::size_t argmax_client = 0;
};

/// Throws InputError naming the offending day when the schedule does not
/// contain exactly one permutation of [n] per day.
void validate_schedule(const Instance& instance, const Schedule& schedule);

Evaluation evaluate_schedule(const Instance& instance,
                             const Schedule& schedule);

/// Per-client totals only; skips the completion matrix.
std::vector<Time> client_totals(const Instance& instance,
                                const Schedule& schedule);

Time objective(const Instance& instance, const Schedule& schedule);

/// Shortest-processing-time-first order of one day, ties by client index.
std::vector<std::size_t> spt_order(const Instance& instance, std::size_t day);

}  // namespace fairsched
