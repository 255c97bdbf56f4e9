#include "fairsched/instance.hpp"

#include <algorithm>
#include <numeric>

namespace fairsched {

namespace {

void check_row(const std::vector<Time>& row, std::size_t n, std::size_t day) {
  if (row.size() != n) {
    throw InputError("day " + std::to_string(day + 1) + " has " +
                     std::to_string(row.size()) + " processing times, expected " +
                     std::to_string(n));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (row[j] < 1) {
      throw InputError("processing time of client " + std::to_string(j + 1) +
                       " on day " + std::to_string(day + 1) +
                       " must be a positive integer");
    }
  }
}

}  // namespace

Instance::Instance(std::size_t n, std::size_t m,
                   std::vector<std::vector<Time>> rows)
    : n_(n), m_(m), rows_(std::move(rows)) {
  if (n_ == 0 || m_ == 0) throw InputError("instance needs n >= 1 and m >= 1");
  if (n_ > kMaxClients) throw InputError("too many clients");
  if (m_ > kMaxDays) throw InputError("too many days");
  totals_.reserve(rows_.size());
  maxima_.reserve(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    check_row(rows_[i], n_, i);
    totals_.push_back(std::accumulate(rows_[i].begin(), rows_[i].end(), Time{0}));
    maxima_.push_back(*std::max_element(rows_[i].begin(), rows_[i].end()));
  }
}

Instance Instance::from_matrix(std::vector<std::vector<Time>> p) {
  if (p.empty()) throw InputError("instance needs at least one day");
  const std::size_t m = p.size();
  const std::size_t n = p.front().size();
  for (std::size_t i = 0; i < m; ++i) check_row(p[i], n, i);
  const bool invariant =
      std::all_of(p.begin(), p.end(), [&](const auto& r) { return r == p.front(); });
  if (invariant) p.resize(1);
  return Instance(n, m, std::move(p));
}

Instance Instance::day_invariant(std::vector<Time> times, std::size_t days) {
  const std::size_t n = times.size();
  std::vector<std::vector<Time>> rows;
  rows.push_back(std::move(times));
  return Instance(n, days, std::move(rows));
}

Time Instance::client_total(std::size_t client) const noexcept {
  if (is_day_invariant()) return static_cast<Time>(m_) * rows_[0][client];
  Time sum = 0;
  for (const auto& row : rows_) sum += row[client];
  return sum;
}

bool Instance::all_unit() const noexcept {
  return std::all_of(maxima_.begin(), maxima_.end(), [](Time t) { return t == 1; });
}

std::vector<std::vector<Time>> Instance::matrix() const {
  std::vector<std::vector<Time>> out(m_);
  for (std::size_t i = 0; i < m_; ++i) {
    auto row = day_times(i);
    out[i].assign(row.begin(), row.end());
  }
  return out;
}

Instance Instance::with_days(std::size_t days) const {
  if (!is_day_invariant()) {
    throw InputError("changing the day count requires a day-invariant instance");
  }
  return day_invariant(rows_[0], days);
}

Instance Instance::scaled(Time factor) const {
  if (factor < 1) throw InputError("scale factor must be positive");
  auto rows = rows_;
  for (auto& row : rows)
    for (auto& t : row) t *= factor;
  return Instance(n_, m_, std::move(rows));
}

Schedule::Schedule(std::vector<std::vector<std::size_t>> orders)
    : orders_(std::move(orders)) {}

Schedule Schedule::identity(std::size_t clients, std::size_t days) {
  std::vector<std::size_t> order(clients);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return Schedule(std::vector<std::vector<std::size_t>>(days, order));
}

std::vector<std::size_t> Schedule::positions(std::size_t day) const {
  const auto& order = orders_[day];
  std::vector<std::size_t> pos(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
  return pos;
}

void validate_schedule(const Instance& instance, const Schedule& schedule) {
  const std::size_t n = instance.clients();
  if (schedule.days() != instance.days()) {
    throw InputError("schedule has " + std::to_string(schedule.days()) +
                     " days, instance has " + std::to_string(instance.days()));
  }
  std::vector<char> seen(n);
  for (std::size_t i = 0; i < schedule.days(); ++i) {
    auto order = schedule.order(i);
    if (order.size() != n) {
      throw InputError("day " + std::to_string(i + 1) + " orders " +
                       std::to_string(order.size()) + " clients, expected " +
                       std::to_string(n));
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t client : order) {
      if (client >= n || seen[client]) {
        throw InputError("day " + std::to_string(i + 1) +
                         " is not a permutation of the clients");
      }
      seen[client] = 1;
    }
  }
}

Evaluation evaluate_schedule(const Instance& instance, const Schedule& schedule) {
  validate_schedule(instance, schedule);
  const std::size_t n = instance.clients();
  Evaluation ev;
  ev.completion.assign(instance.days(), std::vector<Time>(n, 0));
  ev.per_client_total.assign(n, 0);
  for (std::size_t i = 0; i < instance.days(); ++i) {
    Time clock = 0;
    for (std::size_t client : schedule.order(i)) {
      clock += instance.time(i, client);
      ev.completion[i][client] = clock;
      ev.per_client_total[client] += clock;
    }
  }
  auto it = std::max_element(ev.per_client_total.begin(), ev.per_client_total.end());
  ev.objective = *it;
  ev.argmax_client = static_cast<std::size_t>(it - ev.per_client_total.begin());
  return ev;
}

std::vector<Time> client_totals(const Instance& instance, const Schedule& schedule) {
  validate_schedule(instance, schedule);
  std::vector<Time> totals(instance.clients(), 0);
  for (std::size_t i = 0; i < instance.days(); ++i) {
    Time clock = 0;
    for (std::size_t client : schedule.order(i)) {
      clock += instance.time(i, client);
      totals[client] += clock;
    }
  }
  return totals;
}

Time objective(const Instance& instance, const Schedule& schedule) {
  auto totals = client_totals(instance, schedule);
  return *std::max_element(totals.begin(), totals.end());
}

std::vector<std::size_t> spt_order(const Instance& instance, std::size_t day) {
  std::vector<std::size_t> order(instance.clients());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto row = instance.day_times(day);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
  return order;
}

}  // namespace fairsched
