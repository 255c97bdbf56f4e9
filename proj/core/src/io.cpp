#include "fairsched/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

namespace fairsched {

namespace {

using Json = nlohmann::ordered_json;

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

std::size_t get_count(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer()) {
    throw InputError(std::string("field \"") + key + "\" must be an integer");
  }
  const auto v = doc[key].get<std::int64_t>();
  if (v < 1) throw InputError(std::string("field \"") + key + "\" must be at least 1");
  return static_cast<std::size_t>(v);
}

std::vector<Time> get_row(const Json& row, std::size_t day) {
  if (!row.is_array()) throw InputError("row " + std::to_string(day + 1) + " is not an array");
  std::vector<Time> out;
  out.reserve(row.size());
  for (const auto& v : row) {
    if (!v.is_number_integer()) {
      throw InputError("day " + std::to_string(day + 1) + " has a non-integer processing time");
    }
    out.push_back(v.get<Time>());
  }
  return out;
}

// Uniform integer in [0, bound) by rejection, independent of the standard
// library's distribution implementations.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) throw InputError("instance must be a JSON object");
  const std::size_t n = get_count(doc, "n");
  const std::size_t m = get_count(doc, "m");
  if (n > kMaxClients) throw InputError("too many clients");
  if (m > kMaxDays) throw InputError("too many days");
  bool flag = false;
  if (doc.contains("day_invariant")) {
    if (!doc["day_invariant"].is_boolean()) throw InputError("\"day_invariant\" must be a boolean");
    flag = doc["day_invariant"].get<bool>();
  }
  if (!doc.contains("p") || !doc["p"].is_array()) throw InputError("field \"p\" must be an array");
  const auto& p = doc["p"];
  if (p.size() == 1 && m > 1) {
    if (!flag) throw InputError("a single row of \"p\" needs \"day_invariant\": true");
    auto row = get_row(p[0], 0);
    if (row.size() != n) {
      throw InputError("day 1 has " + std::to_string(row.size()) +
                       " processing times, expected " + std::to_string(n));
    }
    return Instance::from_matrix({row}).with_days(m);
  }
  if (p.size() != m) {
    throw InputError("\"p\" has " + std::to_string(p.size()) + " rows, expected " +
                     std::to_string(m));
  }
  std::vector<std::vector<Time>> rows;
  rows.reserve(m);
  for (std::size_t i = 0; i < m; ++i) rows.push_back(get_row(p[i], i));
  Instance instance = Instance::from_matrix(std::move(rows));
  if (instance.clients() != n) throw InputError("rows of \"p\" do not have n entries");
  if (flag && !instance.is_day_invariant()) {
    throw InputError("\"day_invariant\" is true but the rows differ");
  }
  return instance;
}

std::string instance_to_json(const Instance& instance) {
  Json doc;
  doc["n"] = instance.clients();
  doc["m"] = instance.days();
  doc["day_invariant"] = instance.is_day_invariant();
  Json p = Json::array();
  const std::size_t rows = instance.is_day_invariant() ? 1 : instance.days();
  for (std::size_t i = 0; i < rows; ++i) {
    auto row = instance.day_times(i);
    p.push_back(std::vector<Time>(row.begin(), row.end()));
  }
  doc["p"] = std::move(p);
  return doc.dump() + "\n";
}

Schedule parse_schedule(std::string_view text) {
  const Json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("perms") || !doc["perms"].is_array()) {
    throw InputError("schedule must be an object with a \"perms\" array");
  }
  std::vector<std::vector<std::size_t>> orders;
  std::size_t day = 0;
  for (const auto& row : doc["perms"]) {
    if (!row.is_array()) throw InputError("perms row " + std::to_string(day + 1) + " is not an array");
    std::vector<std::size_t> order;
    for (const auto& v : row) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
        throw InputError("day " + std::to_string(day + 1) + " has an invalid client index");
      }
      order.push_back(static_cast<std::size_t>(v.get<std::int64_t>() - 1));
    }
    orders.push_back(std::move(order));
    ++day;
  }
  return Schedule(std::move(orders));
}

std::string schedule_to_json(const Schedule& schedule) {
  Json perms = Json::array();
  for (const auto& day : schedule.orders()) {
    Json row = Json::array();
    for (std::size_t c : day) row.push_back(c + 1);
    perms.push_back(std::move(row));
  }
  Json doc;
  doc["perms"] = std::move(perms);
  return doc.dump() + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
  if (!out) throw InputError("failed writing " + path);
}

Distribution parse_distribution(std::string_view name) {
  if (name == "uniform") return Distribution::kUniform;
  if (name == "two-point") return Distribution::kTwoPoint;
  if (name == "unit") return Distribution::kUnit;
  throw InputError("unknown distribution '" + std::string(name) + "'");
}

Instance generate_instance(const GeneratorSpec& spec) {
  if (spec.clients == 0 || spec.days == 0) throw InputError("n and m must be at least 1");
  if (spec.p_min < 1 || spec.p_max < spec.p_min) throw InputError("invalid processing-time range");
  if (!(spec.heavy_fraction >= 0.0 && spec.heavy_fraction <= 1.0)) {
    throw InputError("heavy fraction must lie in [0, 1]");
  }
  std::mt19937_64 rng(spec.seed);
  const std::size_t rows = spec.day_invariant ? 1 : spec.days;
  std::vector<std::vector<Time>> p(rows, std::vector<Time>(spec.clients, 1));
  const auto span = static_cast<std::uint64_t>(spec.p_max - spec.p_min) + 1;
  const auto heavy = static_cast<std::size_t>(
      std::llround(spec.heavy_fraction * static_cast<double>(spec.clients)));
  for (auto& row : p) {
    switch (spec.distribution) {
      case Distribution::kUnit: break;
      case Distribution::kUniform:
        for (auto& v : row) v = spec.p_min + static_cast<Time>(draw_below(rng, span));
        break;
      case Distribution::kTwoPoint: {
        std::vector<std::size_t> idx(spec.clients);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t k = idx.size(); k > 1; --k) std::swap(idx[k - 1], idx[draw_below(rng, k)]);
        for (std::size_t k = 0; k < spec.clients; ++k) row[idx[k]] = k < heavy ? spec.p_max : spec.p_min;
        break;
      }
    }
  }
  if (spec.day_invariant) return Instance::day_invariant(std::move(p.front()), spec.days);
  return Instance::from_matrix(std::move(p));
}

}  // namespace fairsched
