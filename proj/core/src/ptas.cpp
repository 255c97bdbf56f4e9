#include "fairsched/ptas.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "fairsched/approx2.hpp"
#include "fairsched/dayinv.hpp"

namespace fairsched {

namespace {

struct LoadHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

class ConfigDp {
 public:
  ConfigDp(const Instance& instance, const Batching& batching, const ConfigurationSet& configs,
           double quantum, const DpLimits& limits)
      : n_(instance.clients()),
        m_(instance.days()),
        beta_(batching.beta()),
        configs_(configs.configs),
        limits_(limits),
        dead_(instance.clients()),
        choice_(instance.clients(), 0),
        load_(m_ * beta_, 0) {
    units_.resize(m_ * beta_);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t b = 0; b < beta_; ++b)
        units_[i * beta_ + b] =
            static_cast<std::int64_t>(std::floor(batching.capacity[i][b] / quantum + 1e-9));
    down_.assign(n_, std::vector<std::int64_t>(m_, 0));
    rest_.assign(n_ + 1, std::vector<std::int64_t>(m_, 0));
    for (std::size_t j = n_; j-- > 0;) {
      for (std::size_t i = 0; i < m_; ++i) {
        down_[j][i] = static_cast<std::int64_t>(
            std::floor(static_cast<double>(instance.time(i, j)) / quantum));
        rest_[j][i] = rest_[j + 1][i] + down_[j][i];
      }
    }
    free_.assign(m_, 0);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t b = 0; b < beta_; ++b) free_[i] += units_[i * beta_ + b];
  }

  bool run() { return place(0); }
  bool aborted() const noexcept { return aborted_; }
  std::size_t states() const noexcept { return states_; }
  const std::vector<std::size_t>& choice() const noexcept { return choice_; }

 private:
  bool place(std::size_t j) {
    if (j == n_) return true;
    if (aborted_) return false;
    for (std::size_t i = 0; i < m_; ++i)
      if (rest_[j][i] > free_[i]) return false;
    if (dead_[j].contains(load_)) return false;
    if (++states_ > limits_.max_states) {
      aborted_ = true;
      return false;
    }
    for (std::size_t k = 0; k < configs_.size(); ++k) {
      const auto& c = configs_[k];
      bool fits = true;
      for (std::size_t i = 0; i < m_ && fits; ++i) {
        const std::size_t slot = i * beta_ + c[i];
        fits = load_[slot] + down_[j][i] <= units_[slot];
      }
      if (!fits) continue;
      for (std::size_t i = 0; i < m_; ++i) {
        load_[i * beta_ + c[i]] += down_[j][i];
        free_[i] -= down_[j][i];
      }
      const bool ok = place(j + 1);
      for (std::size_t i = 0; i < m_; ++i) {
        load_[i * beta_ + c[i]] -= down_[j][i];
        free_[i] += down_[j][i];
      }
      if (ok) {
        choice_[j] = k;
        return true;
      }
      if (aborted_) return false;
    }
    dead_[j].insert(load_);
    return false;
  }

  std::size_t n_;
  std::size_t m_;
  std::size_t beta_;
  const std::vector<std::vector<std::size_t>>& configs_;
  DpLimits limits_;
  std::vector<std::unordered_set<std::vector<std::int64_t>, LoadHash>> dead_;
  std::vector<std::size_t> choice_;
  std::vector<std::int64_t> load_;
  std::vector<std::int64_t> units_;
  std::vector<std::vector<std::int64_t>> down_;
  std::vector<std::vector<std::int64_t>> rest_;
  std::vector<std::int64_t> free_;
  std::size_t states_ = 0;
  bool aborted_ = false;
};

Time longest_day(const Instance& instance) {
  Time worst = 0;
  for (std::size_t i = 0; i < instance.days(); ++i) worst = std::max(worst, instance.day_total(i));
  return worst;
}

}  // namespace

std::vector<double> ktilde_candidates(double k_hat, double eps) {
  if (!(eps > 0.0) || !(k_hat > 0.0)) throw InputError("K~ candidates need eps > 0, K^ > 0");
  std::vector<double> out;
  const double top = (1.0 + eps) * k_hat * (1.0 + 1e-12);
  for (double v = k_hat / 2.0; v <= top; v *= 1.0 + eps) out.push_back(v);
  return out;
}

std::vector<double> estimate_Ktilde(const Instance& instance, double eps) {
  return ktilde_candidates(static_cast<double>(approx2_solve(instance).k), eps);
}

DpResult dp_assign(const Instance& instance, const Batching& batching, double eps,
                   double k_tilde, const DpLimits& limits) {
  if (batching.days() != instance.days()) {
    throw InputError("batching day count does not match the instance");
  }
  DpResult result;
  const auto m = static_cast<double>(instance.days());
  const double delta = eps * eps * eps * k_tilde / (m * m);
  result.quantum = delta / static_cast<double>(instance.clients());
  result.threshold = (1.0 + 45.0 * eps) * k_tilde;
  for (std::size_t i = 0; i < instance.days(); ++i) {
    std::int64_t need = 0;
    std::int64_t room = 0;
    for (std::size_t j = 0; j < instance.clients(); ++j)
      need += static_cast<std::int64_t>(
          std::floor(static_cast<double>(instance.time(i, j)) / result.quantum));
    for (double c : batching.capacity[i])
      room += static_cast<std::int64_t>(std::floor(c / result.quantum + 1e-9));
    if (need > room) return result;
  }
  const auto configs =
      enumerate_configurations(batching, result.threshold, limits.max_configurations);
  result.configurations = configs.configs.size();
  if (configs.truncated) {
    result.aborted = true;
    return result;
  }
  ConfigDp dp(instance, batching, configs, result.quantum, limits);
  const bool ok = dp.run();
  result.states = dp.states();
  result.aborted = dp.aborted();
  if (ok) {
    Assignment assignment;
    assignment.batch_of.assign(instance.days(), std::vector<std::size_t>(instance.clients()));
    for (std::size_t j = 0; j < instance.clients(); ++j) {
      const auto& c = configs.configs[dp.choice()[j]];
      for (std::size_t i = 0; i < instance.days(); ++i) assignment.batch_of[i][j] = c[i];
    }
    result.assignment = std::move(assignment);
  }
  return result;
}

PtasResult ptas_solve(const Instance& instance, const PtasOptions& options) {
  if (!(options.eps > 0.0)) throw InputError("eps must be positive");
  PtasResult result;
  result.eps_internal = options.internal_eps ? options.eps : options.eps / 135.0;
  const double eps = result.eps_internal;
  if (instance.days() == 1) {
    result.schedule = Schedule({spt_order(instance, 0)});
    result.k = objective(instance, result.schedule);
    result.certified = true;
    result.fallback = true;
    return result;
  }
  const auto start = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    return std::chrono::steady_clock::now() - start > options.time_budget;
  };

  const auto approx = approx2_solve(instance);
  result.schedule = approx.schedule;
  result.k = approx.k;
  result.fallback = true;
  bool complete = approx.certified;

  std::vector<Schedule> seeds;
  if (options.oracle_schedule) {
    validate_schedule(instance, *options.oracle_schedule);
    seeds.push_back(*options.oracle_schedule);
  } else {
    seeds.push_back(approx.schedule);
    if (instance.is_day_invariant()) {
      std::vector<std::size_t> order(instance.clients());
      std::iota(order.begin(), order.end(), std::size_t{0});
      seeds.push_back(two_day_inversion(instance, order));
    }
  }
  // Completion times of a day never exceed its total.
  const auto seed_reach = static_cast<double>(longest_day(instance));

  auto try_batching = [&](const Batching& batching, double k_tilde) {
    ++result.batchings_tried;
    const auto dp = dp_assign(instance, batching, eps, k_tilde, options.dp);
    if (dp.aborted) complete = false;
    if (!dp.assignment) return;
    ++result.dp_successes;
    auto schedule = assignment_to_schedule(batching, *dp.assignment, instance);
    const Time k = objective(instance, schedule);
    if (k < result.k) {
      result.k = k;
      result.schedule = std::move(schedule);
      result.k_tilde = k_tilde;
      result.fallback = false;
    }
  };

  for (double k_tilde : ktilde_candidates(static_cast<double>(approx.k), eps)) {
    if (out_of_time()) {
      complete = false;
      break;
    }
    CapacityGrid grid;
    try {
      grid = CapacityGrid::day_dependent(eps, instance.days(), k_tilde);
    } catch (const InputError&) {
      complete = false;
      continue;
    }
    for (const auto& seed : seeds) {
      if (options.oracle_schedule && static_cast<double>(objective(instance, seed)) > k_tilde) {
        continue;
      }
      if (seed_reach > grid.max()) continue;
      try_batching(batching_from_schedule(instance, seed, grid).first, k_tilde);
    }
    if (options.oracle_schedule) continue;
    GoodBatchingEnumerator stream(grid, instance.days(), options.enumerated_batchings);
    while (auto batching = stream.next()) {
      if (out_of_time()) break;
      try_batching(*batching, k_tilde);
    }
    if (stream.truncated() || out_of_time()) complete = false;
  }
  result.certified = complete && !options.oracle_schedule;
  return result;
}

}  // namespace fairsched
