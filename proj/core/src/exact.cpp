#include "fairsched/exact.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "fairsched/approx2.hpp"
#include "fairsched/bounds.hpp"
#include "fairsched/dayinv.hpp"

namespace fairsched {

namespace {

class BranchAndBound {
 public:
  BranchAndBound(const Instance& instance, const ExactLimits& limits)
      : inst_(instance),
        limits_(limits),
        n_(instance.clients()),
        m_(instance.days()),
        acc_(n_, 0),
        today_(n_, 0),
        placed_(n_, 0),
        orders_(m_, std::vector<std::size_t>(n_, 0)) {
    // Remaining own work from day d on, per client.
    remaining_.assign(m_ + 1, std::vector<Time>(n_, 0));
    for (std::size_t d = m_; d-- > 0;) {
      for (std::size_t j = 0; j < n_; ++j) {
        remaining_[d][j] = remaining_[d + 1][j] + inst_.time(d, j);
      }
    }
    // Sum of SPT completion times of whole days from d on.
    spt_suffix_.assign(m_ + 1, 0);
    spt_.resize(m_);
    for (std::size_t d = m_; d-- > 0;) {
      spt_[d] = spt_order(inst_, d);
      Time clock = 0;
      Time sum = 0;
      for (std::size_t j : spt_[d]) {
        clock += inst_.time(d, j);
        sum += clock;
      }
      spt_suffix_[d] = spt_suffix_[d + 1] + sum;
    }
    // Clients with identical processing times on every day.
    class_prev_.assign(n_, kNone);
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t k = j; k-- > 0;) {
        bool same = true;
        for (std::size_t d = 0; d < m_ && same; ++d) same = inst_.time(d, j) == inst_.time(d, k);
        if (same) {
          class_prev_[j] = k;
          break;
        }
      }
    }
    same_as_prev_day_.assign(m_, 0);
    for (std::size_t d = 2; d < m_; ++d) {
      auto a = inst_.day_times(d);
      auto b = inst_.day_times(d - 1);
      same_as_prev_day_[d] = std::equal(a.begin(), a.end(), b.begin(), b.end());
    }
    target_ = best_closed_form_bound(inst_);
    start_ = std::chrono::steady_clock::now();
  }

  ExactResult run(Time incumbent_value, const Schedule& incumbent) {
    best_value_ = incumbent_value + 1;
    best_orders_ = incumbent.orders();
    fallback_value_ = incumbent_value;
    // Start one above the incumbent so the first schedule of the optimal
    // value in search order is the one recorded.
    place(0, 0, 0, false);
    ExactResult result;
    result.nodes_explored = nodes_;
    result.certified = !aborted_;
    if (best_value_ <= fallback_value_) {
      result.optimum = best_value_;
      result.schedule = Schedule(best_orders_);
    } else {
      result.optimum = fallback_value_;
      result.schedule = incumbent;
    }
    return result;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  bool out_of_budget() {
    if (nodes_ >= limits_.max_nodes) return true;
    if ((nodes_ & 0xFFF) == 0 &&
        std::chrono::steady_clock::now() - start_ > limits_.time_budget) {
      return true;
    }
    return false;
  }

  // Lower bound on the objective of any completion of the current node on
  // day `d` with the clock at `clock`.
  Time lower_bound(std::size_t d, Time clock) const {
    Time worst = 0;
    Time committed = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      const Time now = placed_[j] ? today_[j] : clock + inst_.time(d, j);
      worst = std::max(worst, acc_[j] + now + remaining_[d + 1][j]);
      committed += acc_[j] + (placed_[j] ? today_[j] : 0);
    }
    // Unplaced jobs of day d in SPT order starting at the clock.
    Time t = clock;
    Time rest = 0;
    for (std::size_t j : spt_[d]) {
      if (placed_[j]) continue;
      t += inst_.time(d, j);
      rest += t;
    }
    const Time total = committed + rest + spt_suffix_[d + 1];
    const auto n = static_cast<Time>(n_);
    return std::max(worst, (total + n - 1) / n);
  }

  void place(std::size_t d, std::size_t pos, Time clock, bool tied) {
    if (done_) return;
    if (pos == n_) {
      for (std::size_t j = 0; j < n_; ++j) {
        acc_[j] += today_[j];
        placed_[j] = 0;
      }
      if (d + 1 == m_) {
        const Time value = *std::max_element(acc_.begin(), acc_.end());
        if (value < best_value_) {
          best_value_ = value;
          best_orders_ = orders_;
          if (best_value_ <= target_) done_ = true;
        }
      } else {
        place(d + 1, 0, 0, same_as_prev_day_[d + 1] != 0);
      }
      for (std::size_t j = 0; j < n_; ++j) {
        placed_[j] = 1;
        acc_[j] -= today_[j];
      }
      return;
    }
    const std::size_t floor_client = tied ? orders_[d - 1][pos] : 0;
    for (std::size_t c = floor_client; c < n_; ++c) {
      if (placed_[c]) continue;
      if (d == 0 && class_prev_[c] != kNone && !placed_[class_prev_[c]]) continue;
      ++nodes_;
      if (out_of_budget()) {
        aborted_ = true;
        done_ = true;
        return;
      }
      const Time saved = today_[c];
      placed_[c] = 1;
      today_[c] = clock + inst_.time(d, c);
      orders_[d][pos] = c;
      if (lower_bound(d, today_[c]) < best_value_) {
        place(d, pos + 1, today_[c], tied && c == floor_client);
      }
      placed_[c] = 0;
      today_[c] = saved;
      if (done_) return;
    }
  }

  const Instance& inst_;
  ExactLimits limits_;
  std::size_t n_;
  std::size_t m_;
  std::vector<Time> acc_;
  std::vector<Time> today_;
  std::vector<char> placed_;
  std::vector<std::vector<std::size_t>> orders_;
  std::vector<std::vector<Time>> remaining_;
  std::vector<Time> spt_suffix_;
  std::vector<std::vector<std::size_t>> spt_;
  std::vector<std::size_t> class_prev_;
  std::vector<char> same_as_prev_day_;
  Time target_ = 0;
  Time best_value_ = 0;
  Time fallback_value_ = 0;
  std::vector<std::vector<std::size_t>> best_orders_;
  std::size_t nodes_ = 0;
  bool aborted_ = false;
  bool done_ = false;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

ExactResult brute_force_optimum(const Instance& instance, const ExactLimits& limits,
                                const std::optional<Schedule>& warm_start) {
  Schedule incumbent;
  if (warm_start) {
    incumbent = *warm_start;
  } else if (instance.is_day_invariant()) {
    incumbent = two_day_inversion(instance, Schedule::identity(instance.clients(), 1).order(0));
  } else {
    incumbent = approx2_solve(instance).schedule;
  }
  const Time value = objective(instance, incumbent);
  BranchAndBound search(instance, limits);
  return search.run(value, incumbent);
}

}  // namespace fairsched
