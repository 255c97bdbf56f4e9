#pragma once

// JSON formats. Instances: {"n", "m", "day_invariant", "p"} where a
// day-invariant instance is written with a single row. Schedules:
// {"perms": [[...], ...]} with 1-based client indices.

#include <cstdint>
#include <string>
#include <string_view>

#include "fairsched/instance.hpp"

namespace fairsched {

/// Throws InputError on malformed documents. The day-invariant flag in the
/// file may be false for identical rows; the parsed instance is normalized.
Instance parse_instance(std::string_view text);
/// Canonical compact form followed by a newline.
std::string instance_to_json(const Instance& instance);

Schedule parse_schedule(std::string_view text);
std::string schedule_to_json(const Schedule& schedule);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

enum class Distribution { kUniform, kTwoPoint, kUnit };

struct GeneratorSpec {
  std::size_t clients = 5;
  std::size_t days = 2;
  Time p_min = 1;
  Time p_max = 10;
  bool day_invariant = false;
  Distribution distribution = Distribution::kUniform;
  /// Two-point: share of clients per day that get p_max (rounded to nearest).
  double heavy_fraction = 0.1;
  std::uint64_t seed = 0;
};

/// Deterministic for a given spec on every platform (mt19937_64 with
/// explicit rejection sampling).
Instance generate_instance(const GeneratorSpec& spec);

Distribution parse_distribution(std::string_view name);

}  // namespace fairsched
