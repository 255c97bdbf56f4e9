#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairsched/approx2.hpp"
#include "fairsched/bounds.hpp"
#include "fairsched/dayinv.hpp"
#include "fairsched/exact.hpp"
#include "fairsched/io.hpp"
#include "fairsched/ptas.hpp"
#include "fairsched/qptas.hpp"
#include "json.hpp"

using namespace fairsched;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInputError = 2, kFlagged = 3 };

std::chrono::milliseconds to_budget(double seconds) {
  if (!(seconds > 0)) throw InputError("--time-budget must be positive");
  return std::chrono::milliseconds(static_cast<std::int64_t>(seconds * 1000.0));
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

json perms_json(const Schedule& s) {
  json perms = json::array();
  for (const auto& day : s.orders()) {
    json row = json::array();
    for (std::size_t j : day) row.push_back(j + 1);
    perms.push_back(row);
  }
  return perms;
}

// Largest certified lower bound we can compute for the instance, as an
// integer (K* is integral). The relaxation is skipped when it did not
// converge.
Time certified_bound(const Instance& inst, const Approx2Result* lp) {
  Time best = best_closed_form_bound(inst);
  if (lp && lp->certified) {
    best = std::max(best, static_cast<Time>(std::ceil(lp->k_lp - 1e-6 * std::max(1.0, lp->k_lp))));
  }
  return best;
}

std::optional<Approx2Result> relaxation_if_small(const Instance& inst) {
  if (inst.clients() * inst.days() > 400) return std::nullopt;
  return approx2_solve(inst);
}

struct SolveArgs {
  std::string algo = "lp2";
  std::string instance_path;
  std::string output;
  double eps = 0.5;
  std::optional<std::uint64_t> seed;
  double time_budget = 300.0;
  std::string dump_lp;
  std::string oracle_batching;
};

struct Solved {
  Schedule schedule;
  json certificate;
  bool flagged = false;
  Time lb = 0;
};

Solved run_solver(const Instance& inst, const SolveArgs& a) {
  Solved out;
  const auto budget = to_budget(a.time_budget);
  std::optional<Schedule> oracle;
  if (!a.oracle_batching.empty()) {
    if (a.algo != "ptas" && a.algo != "qptas")
      throw InputError("--oracle-batching applies to ptas and qptas");
    oracle = parse_schedule(read_file(a.oracle_batching));
  }
  if (!a.dump_lp.empty() && a.algo != "lp2") throw InputError("--dump-lp applies to lp2");
  if (!(a.eps > 0)) throw InputError("--eps must be positive");
  json& c = out.certificate;
  const auto small_lp = a.algo == "lp2" ? std::nullopt : relaxation_if_small(inst);
  const Approx2Result* lp = small_lp ? &*small_lp : nullptr;

  if (a.algo == "lp2") {
    const auto r = approx2_solve(inst);
    out.schedule = r.schedule;
    out.lb = certified_bound(inst, &r);
    out.flagged = !r.certified;
    c["K"] = r.k;
    c["K_lp"] = r.k_lp;
    c["ratio_bound"] = 2;
    c["certified"] = r.certified;
    c["cuts"] = r.relaxation.cuts;
    if (!a.dump_lp.empty()) {
      std::ostringstream lp;
      write_cplex_lp(r.relaxation.lp, lp);
      write_file(a.dump_lp, lp.str());
    }
  } else if (a.algo == "exact") {
    ExactLimits limits;
    limits.time_budget = budget;
    const auto r = brute_force_optimum(inst, limits);
    out.schedule = r.schedule;
    out.flagged = !r.certified;
    out.lb = r.certified ? r.optimum : certified_bound(inst, lp);
    c["K"] = r.optimum;
    c["optimal"] = r.certified;
    c["nodes"] = r.nodes_explored;
  } else if (a.algo == "ptas") {
    PtasOptions o;
    o.eps = a.eps;
    o.time_budget = budget;
    o.oracle_schedule = oracle;
    const auto r = ptas_solve(inst, o);
    out.schedule = r.schedule;
    out.flagged = !r.certified;
    out.lb = certified_bound(inst, lp);
    c["K"] = r.k;
    c["eps"] = a.eps;
    c["eps_internal"] = r.eps_internal;
    c["ratio_bound"] = 1.0 + a.eps;
    c["certified"] = r.certified;
    c["fallback"] = r.fallback;
    c["batchings_tried"] = r.batchings_tried;
    if (r.k_tilde) c["K_tilde"] = *r.k_tilde;
  } else if (a.algo == "inversion") {
    PtasOptions scheme;
    scheme.time_budget = budget;
    const auto r = dayinv_approx(inst, a.eps, scheme);
    out.schedule = r.schedule;
    out.flagged = !r.certified;
    out.lb = certified_bound(inst, lp);
    const auto& cert = r.certificate;
    c["K"] = cert.k;
    c["upper_formula"] = cert.upper_formula;
    c["enhanced_lb"] = cert.lb.str();
    c["ratio_vs_lb"] = cert.ratio_vs_lb.str();
    c["ratio_vs_lb_approx"] = cert.ratio_vs_lb.to_double();
    c["used_ptas"] = cert.used_ptas;
    c["ratio_bound"] = cert.guarantee;
    c["certified"] = r.certified;
  } else if (a.algo == "qptas") {
    if (!a.seed) throw InputError("qptas needs --seed");
    QptasOptions o;
    o.eps = a.eps;
    o.seed = *a.seed;
    o.time_budget = budget;
    o.oracle_schedule = oracle;
    const auto r = qptas_solve(inst, o);
    out.schedule = r.schedule;
    out.flagged = !r.certified;
    out.lb = certified_bound(inst, lp);
    c["K"] = r.k;
    c["eps"] = a.eps;
    c["eps_internal"] = r.eps_internal;
    c["ratio_bound"] = 1.0 + a.eps;
    c["certified"] = r.certified;
    c["fallback"] = r.fallback;
    c["D"] = r.reduction.days;
    c["reps"] = r.reduction.reps;
    c["tail_days"] = r.reduction.tail_days;
    c["replication_bound"] = r.replication_bound;
    c["lp_solves"] = r.lp_solves;
    c["rounding_tries"] = r.rounding_tries;
    if (!r.fallback) {
      c["stretch"] = r.stretch;
      c["K_AB"] = r.k_ab;
    }
  } else {
    throw InputError("unknown algorithm '" + a.algo + "'");
  }
  c["lb"] = out.lb;
  return out;
}

int cmd_solve(const SolveArgs& a) {
  const auto inst = parse_instance(read_file(a.instance_path));
  const auto r = run_solver(inst, a);
  json doc;
  doc["algo"] = a.algo;
  doc["K"] = objective(inst, r.schedule);
  doc["lb"] = r.lb;
  doc["perms"] = perms_json(r.schedule);
  doc["certificate"] = r.certificate;
  emit(a.output, doc.dump() + "\n");
  if (r.flagged) std::cerr << "warning: a cap or time budget cut the search short\n";
  return r.flagged ? kFlagged : kOk;
}

struct VerifyArgs {
  std::string instance_path;
  std::string solution_path;
  std::optional<Time> k;
  std::optional<std::string> lb;
};

Rational parse_rational(const std::string& s) {
  try {
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
      std::size_t used = 0;
      const auto v = std::stoll(s, &used);
      if (used != s.size()) throw InputError("");
      return Rational(v);
    }
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw InputError("cannot read '" + s + "' as an integer or fraction");
  }
}

int cmd_verify(const VerifyArgs& a) {
  const auto inst = parse_instance(read_file(a.instance_path));
  const auto text = read_file(a.solution_path);
  const auto schedule = parse_schedule(text);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  validate_schedule(inst, schedule);

  std::optional<Time> claim_k = a.k;
  if (!claim_k && doc.contains("K")) {
    if (!doc["K"].is_number_integer()) throw InputError("\"K\" must be an integer");
    claim_k = doc["K"].get<Time>();
  }
  std::optional<Rational> claim_lb;
  if (a.lb) {
    claim_lb = parse_rational(*a.lb);
  } else if (doc.contains("lb")) {
    const auto& v = doc["lb"];
    if (v.is_number_integer()) {
      claim_lb = Rational(v.get<Time>());
    } else if (v.is_string()) {
      claim_lb = parse_rational(v.get<std::string>());
    } else {
      throw InputError("\"lb\" must be an integer or a fraction string");
    }
  }

  bool pass = true;
  const Time k = objective(inst, schedule);
  std::cout << "K recomputed: " << k << "\n";
  if (claim_k) {
    if (*claim_k != k) {
      pass = false;
      std::cout << "FAIL K: claimed " << *claim_k << ", recomputed " << k << "\n";
    } else {
      std::cout << "ok   K matches\n";
    }
  }
  if (claim_lb) {
    std::optional<Approx2Result> lp;
    if (inst.clients() * inst.days() <= 400) lp = approx2_solve(inst);
    Rational best(best_closed_form_bound(inst));
    if (inst.is_day_invariant()) best = std::max(best, enhanced_lower_bound(inst));
    std::cout << "closed-form bound: " << best_closed_form_bound(inst) << "\n";
    if (inst.is_day_invariant())
      std::cout << "enhanced bound: " << enhanced_lower_bound(inst).str() << "\n";
    if (lp && lp->certified) {
      std::cout << "relaxation bound: " << lp->k_lp << "\n";
      best = std::max(best, Rational(certified_bound(inst, &*lp)));
    }
    if (inst.clients() <= 6 && inst.days() <= 4) {
      ExactLimits limits;
      limits.time_budget = std::chrono::seconds(10);
      const auto opt = brute_force_optimum(inst, limits);
      if (opt.certified) {
        std::cout << "exact optimum: " << opt.optimum << "\n";
        best = std::max(best, Rational(opt.optimum));
      }
    }
    // K* is an integer, so rounding a bound up keeps it valid.
    best = Rational(best.ceil());
    if (*claim_lb > best) {
      pass = false;
      std::cout << "FAIL lb: claimed " << claim_lb->str() << " exceeds recomputed "
                << best.str() << "\n";
    } else if (*claim_lb > Rational(k)) {
      pass = false;
      std::cout << "FAIL lb: claimed " << claim_lb->str() << " exceeds K " << k << "\n";
    } else {
      std::cout << "ok   lb " << claim_lb->str() << " <= " << best.str() << "\n";
    }
  }
  std::cout << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kOk : kVerifyFailed;
}

struct GenArgs {
  GeneratorSpec spec;
  std::string distribution = "uniform";
  std::optional<std::uint64_t> seed;
  std::string output;
};

int cmd_gen(GenArgs a) {
  if (!a.seed) throw InputError("gen needs --seed");
  a.spec.seed = *a.seed;
  a.spec.distribution = parse_distribution(a.distribution);
  emit(a.output, instance_to_json(generate_instance(a.spec)));
  return kOk;
}

int cmd_bound(const std::string& path) {
  const auto inst = parse_instance(read_file(path));
  json doc;
  json list = json::array();
  for (const auto& b : trivial_lower_bounds(inst))
    list.push_back({{"name", b.name}, {"value", b.value}, {"certified", b.certified}});
  doc["closed_form"] = list;
  if (inst.is_day_invariant()) {
    const auto e = enhanced_lower_bound(inst);
    doc["enhanced"] = e.str();
    doc["enhanced_ceil"] = e.ceil();
  }
  const auto lp = approx2_solve(inst);
  doc["relaxation"] = lp.k_lp;
  doc["relaxation_certified"] = lp.certified;
  doc["best"] = certified_bound(inst, &lp);
  std::cout << doc.dump(2) << "\n";
  return lp.certified ? kOk : kFlagged;
}

char glyph(std::size_t client) {
  static const char* kGlyphs = "123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  return client < 35 ? kGlyphs[client] : '#';
}

std::string gantt(const Instance& inst, const Schedule& s) {
  Time widest = 0;
  for (std::size_t i = 0; i < inst.days(); ++i) widest = std::max(widest, inst.day_total(i));
  const double scale = widest > 72 ? 72.0 / static_cast<double>(widest) : 1.0;
  std::string out;
  for (std::size_t i = 0; i < inst.days(); ++i) {
    std::string row = "day " + std::to_string(i + 1) + " |";
    Time clock = 0;
    for (std::size_t j : s.order(i)) {
      const auto from = static_cast<std::size_t>(std::lround(static_cast<double>(clock) * scale));
      clock += inst.time(i, j);
      const auto to = static_cast<std::size_t>(std::lround(static_cast<double>(clock) * scale));
      row.append(std::max<std::size_t>(to - from, 1), glyph(j));
    }
    out += row + "|\n";
  }
  return out;
}

struct BenchArgs {
  std::size_t count = 100;
  std::size_t n_max = 5;
  std::size_t m_max = 3;
  std::optional<std::uint64_t> seed;
  double eps = 0.5;
  double time_budget = 10.0;
  std::vector<std::string> algos{"lp2", "ptas", "inversion", "qptas", "exact"};
  std::string output;
  std::string gantt_path;
};

int cmd_bench(const BenchArgs& a) {
  if (!a.seed) throw InputError("bench needs --seed");
  if (a.n_max < 1 || a.m_max < 1) throw InputError("--n-max and --m-max must be at least 1");
  std::ostringstream csv;
  csv << "instance,n,m,day_invariant,algo,K,lower_bound,certified_ratio,oracle_K,"
         "empirical_ratio,certified,wall_ms\n";
  std::string gantts;
  bool any_flag = false;
  std::mt19937_64 shape(*a.seed);
  for (std::size_t id = 0; id < a.count; ++id) {
    GeneratorSpec spec;
    spec.clients = 1 + shape() % a.n_max;
    spec.days = 1 + shape() % a.m_max;
    spec.day_invariant = id % 2 == 1;
    spec.seed = *a.seed + id;
    const auto inst = generate_instance(spec);
    const auto lp = approx2_solve(inst);
    const Time lb = certified_bound(inst, &lp);
    std::optional<Time> kstar;
    if (inst.clients() <= 6 && inst.days() <= 4) {
      const auto opt = brute_force_optimum(inst);
      if (opt.certified) kstar = opt.optimum;
    }
    for (const auto& algo : a.algos) {
      if ((algo == "inversion" || algo == "qptas") && !inst.is_day_invariant()) continue;
      SolveArgs sa;
      sa.algo = algo;
      sa.eps = a.eps;
      sa.seed = *a.seed;
      sa.time_budget = a.time_budget;
      const auto start = std::chrono::steady_clock::now();
      const auto r = run_solver(inst, sa);
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
      const Time k = objective(inst, r.schedule);
      // Guaranteed constant when the run is certified, otherwise only the
      // a-posteriori ratio against the lower bound is proven.
      const double posteriori = static_cast<double>(k) / static_cast<double>(lb);
      double certified_ratio = posteriori;
      if (!r.flagged) {
        certified_ratio = r.certificate.contains("ratio_bound")
                              ? std::min(r.certificate["ratio_bound"].get<double>(), posteriori)
                              : posteriori;
        if (algo == "exact") certified_ratio = 1.0;
      }
      any_flag = any_flag || r.flagged;
      char line[512];
      std::snprintf(line, sizeof line, "%zu,%zu,%zu,%d,%s,%lld,%lld,%.6f,%s,%s,%d,%lld\n", id,
                    inst.clients(), inst.days(), inst.is_day_invariant() ? 1 : 0, algo.c_str(),
                    static_cast<long long>(k), static_cast<long long>(lb), certified_ratio,
                    kstar ? std::to_string(*kstar).c_str() : "",
                    kstar ? std::to_string(static_cast<double>(k) / static_cast<double>(*kstar))
                                .c_str()
                          : "",
                    r.flagged ? 0 : 1, static_cast<long long>(ms));
      csv << line;
      if (inst.days() <= 4 && inst.clients() <= 10) {
        gantts += "instance " + std::to_string(id) + " " + algo + " K=" + std::to_string(k) + "\n" +
                  gantt(inst, r.schedule) + "\n";
      }
    }
  }
  emit(a.output, csv.str());
  if (!a.gantt_path.empty()) write_file(a.gantt_path, gantts);
  return any_flag ? kFlagged : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair repetitive scheduling solvers"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate an instance");
  g->add_option("--n", gen.spec.clients, "Clients")->check(CLI::PositiveNumber);
  g->add_option("--m", gen.spec.days, "Days")->check(CLI::PositiveNumber);
  g->add_option("--p-min", gen.spec.p_min, "Smallest processing time");
  g->add_option("--p-max", gen.spec.p_max, "Largest processing time");
  g->add_flag("--day-invariant", gen.spec.day_invariant, "Same times every day");
  g->add_option("--distribution", gen.distribution, "uniform, two-point or unit");
  g->add_option("--heavy-fraction", gen.spec.heavy_fraction, "Share of p_max jobs (two-point)");
  g->add_option("--seed", gen.seed, "Generator seed");
  g->add_option("-o,--output", gen.output, "Output file (default stdout)");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve an instance");
  s->add_option("instance", solve.instance_path, "Instance JSON")->required();
  s->add_option("--algo", solve.algo, "lp2, ptas, inversion, qptas or exact")
      ->check(CLI::IsMember({"lp2", "ptas", "inversion", "qptas", "exact"}));
  s->add_option("--eps", solve.eps, "Accuracy parameter");
  s->add_option("--seed", solve.seed, "Seed (required by qptas)");
  s->add_option("--time-budget", solve.time_budget, "Seconds");
  s->add_option("--dump-lp", solve.dump_lp, "Write the final relaxation LP (lp2)");
  s->add_option("--oracle-batching", solve.oracle_batching,
                "Schedule whose structure-lemma batching is used (ptas, qptas)");
  s->add_option("-o,--output", solve.output, "Output file (default stdout)");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check a solution and its claims");
  v->add_option("instance", verify.instance_path, "Instance JSON")->required();
  v->add_option("solution", verify.solution_path, "Solution JSON with perms")->required();
  v->add_option("--k", verify.k, "Claimed objective (overrides the file)");
  v->add_option("--lb", verify.lb, "Claimed lower bound (overrides the file)");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run the solvers over generated instances");
  b->add_option("--count", bench.count, "Instances");
  b->add_option("--n-max", bench.n_max, "Largest client count");
  b->add_option("--m-max", bench.m_max, "Largest day count");
  b->add_option("--seed", bench.seed, "Suite seed");
  b->add_option("--eps", bench.eps, "Accuracy parameter");
  b->add_option("--time-budget", bench.time_budget, "Seconds per run");
  b->add_option("--algos", bench.algos, "Algorithms to run")
      ->check(CLI::IsMember({"lp2", "ptas", "inversion", "qptas", "exact"}));
  b->add_option("-o,--output", bench.output, "CSV file (default stdout)");
  b->add_option("--gantt", bench.gantt_path, "Text Gantt file");

  std::string bound_path;
  auto* bd = app.add_subcommand("bound", "Print lower bounds");
  bd->add_option("instance", bound_path, "Instance JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_solve(solve);
    if (*v) return cmd_verify(verify);
    if (*b) return cmd_bench(bench);
    if (*bd) return cmd_bound(bound_path);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}
