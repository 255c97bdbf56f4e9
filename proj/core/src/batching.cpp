#include "fairsched/batching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace fairsched {

namespace {

constexpr std::size_t kMaxGridSize = 1'000'000;

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("eps must be positive and finite");
}

}  // namespace

std::vector<std::vector<double>> Batching::ends() const {
  std::vector<std::vector<double>> out(capacity.size());
  for (std::size_t i = 0; i < capacity.size(); ++i) {
    out[i].resize(capacity[i].size());
    double sum = 0.0;
    for (std::size_t b = 0; b < capacity[i].size(); ++b) {
      sum += capacity[i][b];
      out[i][b] = sum;
    }
  }
  return out;
}

CapacityGrid CapacityGrid::day_dependent(double eps, std::size_t days, double k_tilde) {
  check_eps(eps);
  if (days == 0 || !(k_tilde > 0.0)) throw InputError("grid needs m >= 1 and K~ > 0");
  CapacityGrid grid;
  grid.eps = eps;
  const auto m = static_cast<double>(days);
  grid.base = eps * eps * eps * k_tilde / (m * m);
  grid.values.push_back(grid.base);
  while (grid.values.back() < k_tilde) {
    if (grid.values.size() >= kMaxGridSize) throw InputError("capacity grid too large");
    grid.values.push_back(grid.base * std::pow(1.0 + eps, static_cast<double>(grid.values.size())));
  }
  grid.chi = grid.values.size() - 1;
  return grid;
}

CapacityGrid CapacityGrid::day_invariant(double eps, Time total) {
  check_eps(eps);
  if (total <= 0) throw InputError("grid needs P > 0");
  CapacityGrid grid;
  grid.eps = eps;
  const double cube = eps * eps * eps;
  const auto p = static_cast<double>(total);
  grid.base = cube * p;
  std::size_t t = 0;
  while (cube * std::pow(1.0 + eps, static_cast<double>(t)) < 1.0) {
    if (++t >= kMaxGridSize) throw InputError("capacity grid too large");
  }
  grid.chi = t;
  for (std::size_t k = 0; k <= t; ++k) {
    grid.values.push_back(p * (cube * std::pow(1.0 + eps, static_cast<double>(k))));
  }
  return grid;
}

double round_up_to_grid(double v, const CapacityGrid& grid) {
  if (v > grid.max()) throw std::domain_error("value exceeds the capacity grid");
  return *std::lower_bound(grid.values.begin(), grid.values.end(), v);
}

double objective_KAB(const Batching& batching, const Assignment& assignment) {
  const auto ends = batching.ends();
  const std::size_t n = assignment.batch_of.empty() ? 0 : assignment.batch_of.front().size();
  double best = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < ends.size(); ++i) sum += ends[i][assignment.batch_of[i][j]];
    best = std::max(best, sum);
  }
  return best;
}

void validate_assignment(const Batching& batching, const Assignment& assignment,
                         const Instance& instance) {
  if (batching.days() != instance.days() || assignment.batch_of.size() != instance.days()) {
    throw InputError("batching/assignment day count does not match the instance");
  }
  for (std::size_t i = 0; i < instance.days(); ++i) {
    if (batching.capacity[i].size() != batching.beta()) {
      throw InputError("day " + std::to_string(i + 1) + " has a different batch count");
    }
    if (assignment.batch_of[i].size() != instance.clients()) {
      throw InputError("day " + std::to_string(i + 1) + " assigns the wrong number of clients");
    }
    for (std::size_t b : assignment.batch_of[i]) {
      if (b >= batching.beta()) {
        throw InputError("day " + std::to_string(i + 1) + " uses a batch index out of range");
      }
    }
  }
}

FeasibilityReport feasibility_report(const Batching& batching, const Assignment& assignment,
                                     const Instance& instance) {
  validate_assignment(batching, assignment, instance);
  FeasibilityReport report;
  report.loads.assign(instance.days(), std::vector<Time>(batching.beta(), 0));
  for (std::size_t i = 0; i < instance.days(); ++i) {
    for (std::size_t j = 0; j < instance.clients(); ++j) {
      report.loads[i][assignment.batch_of[i][j]] += instance.time(i, j);
    }
    for (std::size_t b = 0; b < batching.beta(); ++b) {
      const Time load = report.loads[i][b];
      const double cap = batching.capacity[i][b];
      const auto fload = static_cast<double>(load);
      report.max_additive_overflow = std::max(report.max_additive_overflow, fload - cap);
      if (load == 0) continue;
      const double stretch =
          cap > 0.0 ? fload / cap : std::numeric_limits<double>::infinity();
      if (stretch > report.max_stretch) {
        report.max_stretch = stretch;
        report.stretch_load = load;
        report.stretch_capacity = cap;
      }
    }
  }
  return report;
}

Schedule assignment_to_schedule(const Batching& batching, const Assignment& assignment,
                                const Instance& instance) {
  validate_assignment(batching, assignment, instance);
  std::vector<std::vector<std::size_t>> orders(instance.days());
  for (std::size_t i = 0; i < instance.days(); ++i) {
    std::vector<std::vector<std::size_t>> buckets(batching.beta());
    for (std::size_t j = 0; j < instance.clients(); ++j) {
      buckets[assignment.batch_of[i][j]].push_back(j);
    }
    orders[i].reserve(instance.clients());
    for (const auto& bucket : buckets) orders[i].insert(orders[i].end(), bucket.begin(), bucket.end());
  }
  return Schedule(std::move(orders));
}

std::pair<Batching, Assignment> batching_from_schedule(const Instance& instance,
                                                       const Schedule& schedule,
                                                       const CapacityGrid& grid) {
  validate_schedule(instance, schedule);
  const std::size_t beta = grid.beta();
  const auto& g = grid.values;
  Batching batching;
  Assignment assignment;
  batching.capacity.assign(instance.days(), std::vector<double>(beta, 0.0));
  assignment.batch_of.assign(instance.days(), std::vector<std::size_t>(instance.clients(), 0));
  for (std::size_t i = 0; i < instance.days(); ++i) {
    std::vector<Time> load(beta, 0);
    Time clock = 0;
    for (std::size_t j : schedule.order(i)) {
      const Time start = clock;
      clock += instance.time(i, j);
      const auto c = static_cast<double>(clock);
      std::size_t b = 0;
      if (c > g[0]) {
        const auto it = std::lower_bound(g.begin(), g.end(), c);
        if (it == g.end()) {
          throw std::domain_error("completion time " + std::to_string(clock) +
                                  " exceeds the capacity grid on day " +
                                  std::to_string(i + 1));
        }
        const auto t = static_cast<std::size_t>(it - g.begin());
        b = static_cast<double>(start) < g[t - 1] ? 2 * t - 1 : 2 * t;
      }
      assignment.batch_of[i][j] = b;
      load[b] += instance.time(i, j);
    }
    for (std::size_t b = 0; b < beta; ++b) {
      batching.capacity[i][b] = round_up_to_grid(static_cast<double>(load[b]), grid);
    }
  }
  return {std::move(batching), std::move(assignment)};
}

CapacityGrid make_grid(const Instance& instance, double eps, double k_tilde,
                       GridVariant variant) {
  if (variant == GridVariant::kDayInvariant) {
    if (!instance.is_day_invariant()) {
      throw InputError("the refined grid needs a day-invariant instance");
    }
    return CapacityGrid::day_invariant(eps, instance.total());
  }
  return CapacityGrid::day_dependent(eps, instance.days(), k_tilde);
}

GoodBatchingEnumerator::GoodBatchingEnumerator(const CapacityGrid& grid, std::size_t days,
                                               std::size_t limit)
    : grid_(grid), days_(days), limit_(limit), digits_(days * grid.beta(), 0) {}

double GoodBatchingEnumerator::total() const noexcept {
  return std::pow(static_cast<double>(grid_.size()), static_cast<double>(digits_.size()));
}

std::optional<Batching> GoodBatchingEnumerator::next() {
  if (exhausted_ || truncated_) return std::nullopt;
  if (started_) {
    // Odometer step, last digit fastest.
    std::size_t k = digits_.size();
    while (k > 0) {
      --k;
      if (++digits_[k] < grid_.size()) break;
      digits_[k] = 0;
      if (k == 0) {
        exhausted_ = true;
        return std::nullopt;
      }
    }
  }
  started_ = true;
  if (produced_ >= limit_) {
    truncated_ = true;
    return std::nullopt;
  }
  ++produced_;
  const std::size_t beta = grid_.beta();
  Batching out;
  out.capacity.assign(days_, std::vector<double>(beta));
  for (std::size_t i = 0; i < days_; ++i)
    for (std::size_t b = 0; b < beta; ++b) out.capacity[i][b] = grid_.values[digits_[i * beta + b]];
  return out;
}

ConfigurationSet enumerate_configurations(const Batching& batching, double threshold,
                                          std::size_t cap) {
  ConfigurationSet out;
  const auto ends = batching.ends();
  const std::size_t m = ends.size();
  const std::size_t beta = batching.beta();
  const double limit = threshold * (1.0 + 1e-12);
  // Cheapest possible completion of the remaining days.
  std::vector<double> floor_rest(m + 1, 0.0);
  for (std::size_t i = m; i-- > 0;) floor_rest[i] = floor_rest[i + 1] + ends[i][0];
  if (m == 0) return out;
  // Count first, with the last day resolved by binary search, so a hopeless
  // cap is detected without materializing anything.
  std::size_t count = 0;
  auto counter = [&](auto&& self, std::size_t day, double partial) -> void {
    if (count > cap) return;
    if (day + 1 == m) {
      const auto& last = ends[day];
      count += static_cast<std::size_t>(
          std::upper_bound(last.begin(), last.end(), limit - partial) - last.begin());
      return;
    }
    for (std::size_t b = 0; b < beta; ++b) {
      const double next = partial + ends[day][b];
      if (next + floor_rest[day + 1] > limit) break;
      self(self, day + 1, next);
      if (count > cap) return;
    }
  };
  counter(counter, 0, 0.0);
  if (count > cap) {
    out.truncated = true;
    return out;
  }
  std::vector<std::size_t> current(m, 0);
  auto dfs = [&](auto&& self, std::size_t day, double partial) -> void {
    if (out.truncated) return;
    if (day == m) {
      if (out.configs.size() >= cap) {
        out.truncated = true;
        return;
      }
      out.configs.push_back(current);
      out.cost.push_back(partial);
      return;
    }
    for (std::size_t b = 0; b < beta; ++b) {
      const double next = partial + ends[day][b];
      if (next + floor_rest[day + 1] > limit) break;
      current[day] = b;
      self(self, day + 1, next);
      if (out.truncated) return;
    }
  };
  dfs(dfs, 0, 0.0);
  std::vector<std::size_t> idx(out.configs.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return out.cost[a] < out.cost[b]; });
  ConfigurationSet sorted;
  sorted.truncated = out.truncated;
  for (std::size_t k : idx) {
    sorted.configs.push_back(std::move(out.configs[k]));
    sorted.cost.push_back(out.cost[k]);
  }
  return sorted;
}

std::string to_json(const Batching& batching, const Assignment& assignment) {
  nlohmann::ordered_json doc;
  doc["beta"] = batching.beta();
  doc["capacity"] = batching.capacity;
  auto one_based = assignment.batch_of;
  for (auto& day : one_based)
    for (auto& b : day) ++b;
  doc["batch_of"] = one_based;
  return doc.dump();
}

}  // namespace fairsched
