#include "fairsched/qptas.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "fairsched/approx2.hpp"
#include "fairsched/bounds.hpp"
#include "fairsched/dayinv.hpp"

namespace fairsched {

namespace {

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

std::vector<std::size_t> config_of(const Assignment& a, std::size_t client) {
  std::vector<std::size_t> c(a.batch_of.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.batch_of[i][client];
  return c;
}

// Odometer over pin guesses: large clients (by descending p) times
// configurations in cost order.
class PinGuesses {
 public:
  PinGuesses(std::vector<std::size_t> clients, std::size_t configs)
      : clients_(std::move(clients)), configs_(configs), digits_(clients_.size(), 0) {}

  std::optional<Pins> next() {
    if (done_ || configs_ == 0) return std::nullopt;
    Pins pins{clients_, digits_};
    std::size_t k = digits_.size();
    done_ = true;
    while (k-- > 0) {
      if (++digits_[k] < configs_) {
        done_ = false;
        break;
      }
      digits_[k] = 0;
    }
    return pins;
  }

 private:
  std::vector<std::size_t> clients_;
  std::size_t configs_;
  std::vector<std::size_t> digits_;
  bool done_ = false;
};

}  // namespace

DayReduction plan_day_reduction(std::size_t clients, std::size_t days, double eps) {
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  DayReduction plan;
  plan.days = days;
  const auto n = static_cast<double>(clients);
  const double threshold = std::log(n) / (eps * eps * eps);
  const double d = std::ceil(6.0 * std::log(2.0 * n) / (eps * eps));
  if (static_cast<double>(days) >= threshold && d < static_cast<double>(days)) {
    plan.days = static_cast<std::size_t>(d);
    plan.reps = days / plan.days;
    plan.tail_days = days - plan.reps * plan.days;
    plan.applied = true;
  }
  return plan;
}

std::pair<Instance, DayReduction> reduce_days(const Instance& instance, double eps) {
  if (!instance.is_day_invariant()) throw InputError("day reduction needs a day-invariant instance");
  auto plan = plan_day_reduction(instance.clients(), instance.days(), eps);
  return {instance.with_days(plan.days), plan};
}

Schedule expand_schedule(const Schedule& reduced, const DayReduction& plan) {
  if (reduced.days() != plan.days) throw InputError("reduced schedule has the wrong day count");
  std::vector<std::vector<std::size_t>> orders;
  orders.reserve(plan.reps * plan.days + plan.tail_days);
  for (std::size_t r = 0; r < plan.reps; ++r)
    for (const auto& day : reduced.orders()) orders.push_back(day);
  for (std::size_t t = 0; t < plan.tail_days; ++t) orders.push_back(identity_order(reduced.clients()));
  return Schedule(std::move(orders));
}

Time replication_bound(const Instance& instance, const Schedule& reduced,
                       const DayReduction& plan) {
  const Time k = objective(instance.with_days(plan.days), reduced);
  return static_cast<Time>(plan.reps) * k + static_cast<Time>(plan.tail_days) * instance.total();
}

double large_client_bound(std::size_t days, double eps, std::size_t beta) {
  const double mb = static_cast<double>(days) * static_cast<double>(beta);
  return std::ceil(6.0 * std::log(2.0 * mb) / std::pow(eps, 6));
}

ClientSplit classify_clients(const Instance& instance, double eps, std::size_t beta) {
  if (!instance.is_day_invariant()) throw InputError("client split needs a day-invariant instance");
  if (beta == 0) throw InputError("beta must be positive");
  ClientSplit split;
  const double mb = static_cast<double>(instance.days()) * static_cast<double>(beta);
  split.lambda = std::pow(eps, 6) * static_cast<double>(instance.total()) / (6.0 * std::log(2.0 * mb));
  for (std::size_t j = 0; j < instance.clients(); ++j) {
    (static_cast<double>(instance.time(0, j)) >= split.lambda ? split.large : split.small)
        .push_back(j);
  }
  return split;
}

ConfigurationSet enumerate_valid_configurations(const Batching& batching, double k_tilde,
                                                double eps, std::size_t cap) {
  return enumerate_configurations(batching, (1.0 + 29.0 * eps) * k_tilde, cap);
}

LinearProgram build_config_lp(const Batching& batching, const ConfigurationSet& configs,
                              const Pins& pins, const Instance& instance) {
  const std::size_t n = instance.clients();
  const std::size_t m = instance.days();
  const std::size_t beta = batching.beta();
  std::vector<std::optional<std::size_t>> pinned(n);
  for (std::size_t k = 0; k < pins.clients.size(); ++k) {
    if (pins.config[k] >= configs.configs.size()) throw InputError("pin out of range");
    pinned[pins.clients[k]] = pins.config[k];
  }
  LinearProgram lp;
  std::vector<std::vector<LpTerm>> capacity_terms(m * beta);
  std::vector<std::size_t> pinned_var(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    LpRow one;
    one.name = "choose_" + std::to_string(j + 1);
    one.sense = RowSense::kEqual;
    one.rhs = 1.0;
    for (std::size_t k = 0; k < configs.configs.size(); ++k) {
      if (pinned[j] && *pinned[j] != k) continue;
      const std::size_t v =
          lp.add_variable("x_" + std::to_string(j + 1) + "_" + std::to_string(k + 1));
      one.terms.push_back({v, 1.0});
      if (pinned[j]) pinned_var[j] = v;
      const auto& c = configs.configs[k];
      for (std::size_t i = 0; i < m; ++i) {
        capacity_terms[i * beta + c[i]].push_back({v, static_cast<double>(instance.time(i, j))});
      }
    }
    lp.add_row(std::move(one));
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t b = 0; b < beta; ++b) {
      LpRow row;
      row.name = "cap_" + std::to_string(i + 1) + "_" + std::to_string(b + 1);
      row.sense = RowSense::kLessEqual;
      row.rhs = batching.capacity[i][b];
      row.terms = std::move(capacity_terms[i * beta + b]);
      lp.add_row(std::move(row));
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!pinned[j]) continue;
    lp.add_row({{{pinned_var[j], 1.0}}, RowSense::kEqual, 1.0, "pin_" + std::to_string(j + 1)});
  }
  return lp;
}

ConfigLpSolution solve_config_lp(const Batching& batching, const ConfigurationSet& configs,
                                 const Pins& pins, const Instance& instance) {
  if (batching.days() != instance.days()) {
    throw InputError("batching day count does not match the instance");
  }
  ConfigLpSolution out;
  if (configs.configs.empty()) return out;
  const auto lp = build_config_lp(batching, configs, pins, instance);
  const auto sol = solve_lp(lp);
  out.status = sol.status;
  if (sol.status != LpStatus::kOptimal) return out;
  std::vector<std::optional<std::size_t>> pinned(instance.clients());
  for (std::size_t k = 0; k < pins.clients.size(); ++k) pinned[pins.clients[k]] = pins.config[k];
  out.weight.assign(instance.clients(), std::vector<double>(configs.configs.size(), 0.0));
  std::size_t v = 0;
  for (std::size_t j = 0; j < instance.clients(); ++j) {
    for (std::size_t k = 0; k < configs.configs.size(); ++k) {
      if (pinned[j] && *pinned[j] != k) continue;
      out.weight[j][k] = std::max(0.0, sol.x[v++]);
    }
  }
  return out;
}

double uniform_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

Assignment sample_assignment(const ConfigLpSolution& lp, const ConfigurationSet& configs,
                             std::size_t days, std::uint64_t seed, std::uint64_t attempt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(attempt),
                    static_cast<std::uint32_t>(attempt >> 32)};
  std::mt19937_64 rng(seq);
  const std::size_t n = lp.weight.size();
  Assignment a;
  a.batch_of.assign(days, std::vector<std::size_t>(n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    const auto& w = lp.weight[j];
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    const double u = uniform_unit(rng()) * total;
    // With float slack the last positive weight takes the remainder.
    std::size_t pick = 0;
    double run = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (w[k] <= 0.0) continue;
      pick = k;
      run += w[k];
      if (u < run) break;
    }
    for (std::size_t i = 0; i < days; ++i) a.batch_of[i][j] = configs.configs[pick][i];
  }
  return a;
}

RoundingOutcome randomized_round(const ConfigLpSolution& lp, const ConfigurationSet& configs,
                                 const Instance& instance, const Batching& batching, double eps,
                                 std::uint64_t seed, std::size_t max_tries) {
  if (lp.status != LpStatus::kOptimal) throw InputError("rounding needs a feasible LP point");
  RoundingOutcome out;
  for (std::size_t t = 0; t < max_tries; ++t) {
    out.assignment = sample_assignment(lp, configs, instance.days(), seed, t);
    out.tries = t + 1;
    const auto report = feasibility_report(batching, out.assignment, instance);
    out.stretch = report.max_stretch;
    if (report.max_stretch <= (1.0 + 2.0 * eps) * (1.0 + 1e-12)) {
      out.accepted = true;
      break;
    }
  }
  return out;
}

double qptas_internal_eps(double eps) {
  auto factor = [](double e) {
    return (1.0 + 26.0 * e) * (1.0 + 2.0 * e) * (1.0 + 29.0 * e) * (1.0 + e);
  };
  double lo = 0.0;
  double hi = eps;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (factor(mid) <= 1.0 + eps ? lo : hi) = mid;
  }
  return lo;
}

QptasResult qptas_solve(const Instance& instance, const QptasOptions& options) {
  if (!instance.is_day_invariant()) throw InputError("qptas needs a day-invariant instance");
  if (!(options.eps > 0.0)) throw InputError("eps must be positive");
  QptasResult result;
  const double eps = options.internal_eps ? options.eps : qptas_internal_eps(options.eps);
  result.eps_internal = eps;
  const auto start = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    return std::chrono::steady_clock::now() - start > options.time_budget;
  };

  const auto reduction = reduce_days(instance, eps);
  const Instance& reduced = reduction.first;
  const DayReduction& plan = reduction.second;
  result.reduction = plan;

  // Fallback: the inversion schedule of the reduced horizon, expanded.
  const Schedule inversion_r = two_day_inversion(reduced, identity_order(reduced.clients()));
  result.schedule = expand_schedule(inversion_r, plan);
  result.k = objective(instance, result.schedule);
  result.replication_bound = replication_bound(instance, inversion_r, plan);
  result.fallback = true;
  if (instance.clients() == 1) {
    result.certified = true;
    return result;
  }

  const CapacityGrid grid = CapacityGrid::day_invariant(eps, instance.total());
  const auto split = classify_clients(reduced, eps, grid.beta());
  auto large = split.large;
  std::stable_sort(large.begin(), large.end(), [&](std::size_t a, std::size_t b) {
    return instance.time(0, a) > instance.time(0, b);
  });

  // Sandwich for K* of the reduced instance.
  const auto upper = static_cast<double>(objective(reduced, inversion_r));
  const auto lower = static_cast<double>(enhanced_lower_bound(reduced).ceil());
  std::vector<double> candidates;
  for (double v = lower; ; v *= 1.0 + eps) {
    candidates.push_back(v);
    if (v >= upper) break;
  }

  std::vector<Schedule> seeds;
  if (options.oracle_schedule) {
    validate_schedule(reduced, *options.oracle_schedule);
    seeds.push_back(*options.oracle_schedule);
  } else {
    seeds.push_back(inversion_r);
    if (reduced.clients() * reduced.days() <= 256) seeds.push_back(approx2_solve(reduced).schedule);
  }

  bool complete = !options.oracle_schedule;
  std::size_t lp_budget = options.max_pin_guesses;
  std::uint64_t trial = 0;
  for (const auto& seed_schedule : seeds) {
    const auto built = batching_from_schedule(reduced, seed_schedule, grid);
    const Batching& batching = built.first;
    const Assignment& witness = built.second;
    for (double k_tilde : candidates) {
      if (out_of_time() || lp_budget == 0) {
        complete = false;
        break;
      }
      const auto configs =
          enumerate_valid_configurations(batching, k_tilde, eps, options.max_configurations);
      if (configs.truncated) {
        complete = false;
        continue;
      }
      if (configs.configs.empty()) continue;
      std::map<std::vector<std::size_t>, std::size_t> index;
      for (std::size_t k = 0; k < configs.configs.size(); ++k) index.emplace(configs.configs[k], k);

      // Witness pins first, then the odometer (oracle mode: witness only).
      std::vector<Pins> first;
      Pins witness_pins{large, {}};
      bool witness_ok = true;
      for (std::size_t j : large) {
        auto it = index.find(config_of(witness, j));
        if (it == index.end()) {
          witness_ok = false;
          break;
        }
        witness_pins.config.push_back(it->second);
      }
      if (witness_ok) first.push_back(witness_pins);
      PinGuesses guesses(large, configs.configs.size());
      std::optional<ConfigLpSolution> feasible;
      Pins used;
      auto attempt = [&](const Pins& pins) {
        --lp_budget;
        ++result.lp_solves;
        auto sol = solve_config_lp(batching, configs, pins, reduced);
        if (sol.status == LpStatus::kOptimal) {
          feasible = std::move(sol);
          used = pins;
        }
      };
      for (const auto& pins : first) {
        if (lp_budget == 0) break;
        attempt(pins);
      }
      if (!options.oracle_schedule) {
        while (!feasible) {
          if (lp_budget == 0 || out_of_time()) {
            complete = false;
            break;
          }
          auto pins = guesses.next();
          if (!pins) break;
          if (witness_ok && pins->config == witness_pins.config) continue;
          attempt(*pins);
        }
      }
      if (!feasible) continue;
      ++result.lp_feasible;
      const auto rounding = randomized_round(*feasible, configs, reduced, batching, eps,
                                             options.seed + 0x9e3779b97f4a7c15ULL * trial++,
                                             options.max_tries);
      result.rounding_tries += rounding.tries;
      if (!rounding.accepted) {
        complete = false;
        continue;
      }
      const Schedule reduced_schedule =
          assignment_to_schedule(batching, rounding.assignment, reduced);
      Schedule full = expand_schedule(reduced_schedule, plan);
      const Time k = objective(instance, full);
      if (k < result.k) {
        result.k = k;
        result.schedule = std::move(full);
        result.k_tilde = k_tilde;
        result.stretch = rounding.stretch;
        result.k_ab = objective_KAB(batching, rounding.assignment);
        result.replication_bound = replication_bound(instance, reduced_schedule, plan);
        result.fallback = false;
      }
    }
  }
  result.certified = complete;
  return result;
}

}  // namespace fairsched
