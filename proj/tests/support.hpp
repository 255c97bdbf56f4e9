#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "fairsched/approx2.hpp"
#include "fairsched/instance.hpp"
#include "fairsched/io.hpp"
#include "fairsched/simplex.hpp"

namespace testing_support {

using namespace fairsched;

inline Instance random_instance(std::uint64_t seed, std::size_t n, std::size_t m, bool invariant,
                                Time p_max = 10) {
  GeneratorSpec spec;
  spec.clients = n;
  spec.days = m;
  spec.p_min = 1;
  spec.p_max = p_max;
  spec.day_invariant = invariant;
  spec.seed = seed;
  return generate_instance(spec);
}

inline Schedule random_schedule(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::vector<std::vector<std::size_t>> orders(m, std::vector<std::size_t>(n));
  for (auto& o : orders) {
    for (std::size_t j = 0; j < n; ++j) o[j] = j;
    std::shuffle(o.begin(), o.end(), rng);
  }
  return Schedule(std::move(orders));
}

/// Most negative slack over all 2^n subsets of every day (positive means a
/// violated subset row), normalized like the separation routine.
inline double exhaustive_violation(const Instance& inst, const FractionalTimes& x) {
  const std::size_t n = inst.clients();
  double pmax = 0;
  for (std::size_t i = 0; i < inst.days(); ++i)
    pmax = std::max(pmax, static_cast<double>(inst.day_max(i)));
  double worst = -1e300;
  for (std::size_t i = 0; i < inst.days(); ++i) {
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      double total = 0, weighted = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (!(mask >> j & 1u)) continue;
        const auto p = static_cast<double>(inst.time(i, j));
        total += p;
        weighted += p * x[i][j];
      }
      worst = std::max(worst, (0.5 * total * total - weighted) / (pmax * pmax));
    }
  }
  return worst;
}

/// The relaxation with every subset row written out.
inline LinearProgram full_relaxation(const Instance& inst) {
  LinearProgram lp = build_relaxation_core(inst);
  const std::size_t n = inst.clients();
  for (std::size_t i = 0; i < inst.days(); ++i) {
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      if ((mask & (mask - 1)) == 0) continue;  // singletons are already there
      std::vector<std::size_t> s;
      for (std::size_t j = 0; j < n; ++j)
        if (mask >> j & 1u) s.push_back(j);
      lp.add_row(subset_row(inst, i, s));
    }
  }
  return lp;
}

}  // namespace testing_support
