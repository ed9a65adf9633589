#include "mlsched/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "mlsched/exact.hpp"
#include "mlsched/random.hpp"
#include "parallel.hpp"
#include "text_util.hpp"

namespace mlsched {

using detail::parallel_for;

double deviation(Time value, Time reference) {
  if (reference <= 0) throw std::invalid_argument("deviation: reference must be positive");
  return 100.0 * static_cast<double>(value - reference) / static_cast<double>(reference);
}

std::string to_string(ReferenceKind kind) { return kind == ReferenceKind::kOptimal ? "optimal" : "best-known"; }

namespace {

const std::vector<std::string>& known_heuristics() {
  static const std::vector<std::string> names{"pmlh", "imlh", "itmlh", "rand", "spt"};
  return names;
}

bool needs_model(const std::string& name) { return name == "pmlh" || name == "imlh" || name == "itmlh"; }

}  // namespace

bool is_known_heuristic(const std::string& name) {
  const auto& names = known_heuristics();
  return std::find(names.begin(), names.end(), name) != names.end();
}

SolveReport run_heuristic(const std::string& name, const Instance& instance, const HeuristicParams& params) {
  if (!is_known_heuristic(name)) throw std::invalid_argument(fmt::format("unknown heuristic \"{}\"", name));
  if (needs_model(name) && !params.model) throw std::invalid_argument(fmt::format("heuristic {} needs a model", name));
  if (name == "pmlh") return pmlh(instance, *params.model);
  if (name == "imlh") return imlh(instance, *params.model);
  if (name == "itmlh") {
    ItmlhOptions opt;
    opt.m = params.m;
    opt.seed = params.seed;
    opt.threads = params.threads;
    opt.time_limit_seconds = params.time_limit_seconds;
    return itmlh(instance, *params.model, opt);
  }
  if (name == "rand") return rand_baseline(instance, params.seed);
  return spt_baseline(instance);
}

std::uint64_t bench_seed_base(std::uint64_t seed, int n, int rho_index) {
  std::uint64_t h = derive_seed(seed, "bench");
  h = mix64(h ^ static_cast<std::uint64_t>(n));
  return mix64(h ^ static_cast<std::uint64_t>(rho_index));
}

BenchReport run_benchmark(const BenchConfig& config) {
  if (config.heuristics.empty()) throw std::invalid_argument("benchmark needs at least one heuristic");
  if (config.per_cell < 1) throw std::invalid_argument("benchmark needs at least one instance per cell");
  for (const auto& h : config.heuristics) {
    if (!is_known_heuristic(h)) throw std::invalid_argument(fmt::format("unknown heuristic \"{}\"", h));
    if (needs_model(h) && !config.model) throw std::invalid_argument(fmt::format("heuristic {} needs a model", h));
  }
  std::vector<int> sizes = config.sizes;
  std::sort(sizes.begin(), sizes.end());
  for (int n : sizes) {
    if (n < 1) throw std::invalid_argument("benchmark sizes must be >= 1");
    if (config.reference == ReferenceKind::kOptimal && n > kExactMaxJobs)
      throw std::invalid_argument(fmt::format("optimal reference requested for n = {} beyond {}", n, kExactMaxJobs));
  }

  BenchReport report;
  std::vector<std::string> active = config.heuristics;
  for (int n : sizes) {
    if (active.empty()) break;
    std::map<std::string, std::pair<double, int>> size_time;  // total seconds, runs
    for (std::size_t ri = 0; ri < config.rhos.size(); ++ri) {
      const double rho = config.rhos[ri];
      const std::uint64_t seed_base = bench_seed_base(config.seed, n, static_cast<int>(ri));
      const std::size_t count = static_cast<std::size_t>(config.per_cell);
      // results[i][h]
      std::vector<std::vector<SolveReport>> results(count);
      std::vector<Time> reference(count, 0);
      // Inner heuristics run single-threaded; the cell is parallel over instances.
      parallel_for(count, config.threads, [&](std::size_t i) {
        const Instance inst = generate_instance(n, rho, seed_base + i);
        HeuristicParams params{config.model, config.m, seed_base + i, config.time_limit_seconds, 1};
        for (const auto& h : active) results[i].push_back(run_heuristic(h, inst, params));
        if (config.reference == ReferenceKind::kOptimal) {
          reference[i] = bnb_solve(inst).schedule.objective;
        } else {
          Time best = results[i].front().schedule.objective;
          for (const auto& r : results[i]) best = std::min(best, r.schedule.objective);
          reference[i] = best;
        }
      });

      for (std::size_t h = 0; h < active.size(); ++h) {
        BenchRow row;
        row.n = n;
        row.rho = rho;
        row.heuristic = active[h];
        row.seed_base = seed_base;
        row.reference = config.reference;
        int optimal_hits = 0;
        for (std::size_t i = 0; i < count; ++i) {
          const SolveReport& r = results[i][h];
          const double d = deviation(r.schedule.objective, reference[i]);
          report.details.push_back({n, rho, active[h], d, config.reference, r.wall_seconds});
          row.delta_avg += d;
          row.delta_max = std::max(row.delta_max, d);
          row.t_avg += r.wall_seconds;
          row.t_max = std::max(row.t_max, r.wall_seconds);
          optimal_hits += r.schedule.objective == reference[i];
          size_time[active[h]].first += r.wall_seconds;
          size_time[active[h]].second += 1;
        }
        row.delta_avg /= static_cast<double>(count);
        row.t_avg /= static_cast<double>(count);
        if (config.reference == ReferenceKind::kOptimal) row.pct_opt = 100.0 * optimal_hits / static_cast<double>(count);
        report.rows.push_back(std::move(row));
      }
    }
    if (config.time_limit_seconds) {
      std::erase_if(active, [&](const std::string& h) {
        const auto& [total, runs] = size_time[h];
        return runs > 0 && total / runs > *config.time_limit_seconds;
      });
    }
  }
  return report;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "n,rho,heuristic,delta_avg,delta_max,pct_opt,t_avg,t_max,seed_base,reference\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{:.3f},{:.3f},{},{:.2f},{:.2f},{},{}\n", r.n, detail::format_double(r.rho), r.heuristic,
                       r.delta_avg, r.delta_max, r.pct_opt ? fmt::format("{:.2f}", *r.pct_opt) : std::string(),
                       r.t_avg, r.t_max, r.seed_base, to_string(r.reference));
  }
  return out;
}

std::vector<BenchRow> parse_bench_csv(const std::string& text) {
  const auto lines = detail::content_lines(text);
  if (lines.empty() || lines[0].text != "n,rho,heuristic,delta_avg,delta_max,pct_opt,t_avg,t_max,seed_base,reference")
    throw std::invalid_argument("benchmark CSV: unexpected header");
  std::vector<BenchRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> f;
    std::stringstream ss(lines[i].text);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (lines[i].text.back() == ',') f.emplace_back();
    if (f.size() != 10) throw std::invalid_argument(fmt::format("benchmark CSV line {}: expected 10 fields", lines[i].number));
    const std::size_t ln = lines[i].number;
    BenchRow r;
    r.n = static_cast<int>(detail::parse_int(f[0], ln));
    r.rho = detail::parse_double(f[1], ln);
    r.heuristic = f[2];
    r.delta_avg = detail::parse_double(f[3], ln);
    r.delta_max = detail::parse_double(f[4], ln);
    if (!f[5].empty()) r.pct_opt = detail::parse_double(f[5], ln);
    r.t_avg = detail::parse_double(f[6], ln);
    r.t_max = detail::parse_double(f[7], ln);
    r.seed_base = static_cast<std::uint64_t>(std::stoull(f[8]));
    if (f[9] == "optimal")
      r.reference = ReferenceKind::kOptimal;
    else if (f[9] == "best-known")
      r.reference = ReferenceKind::kBestKnown;
    else
      throw std::invalid_argument(fmt::format("benchmark CSV line {}: unknown reference \"{}\"", ln, f[9]));
    rows.push_back(std::move(r));
  }
  return rows;
}

int default_thread_count() {
  if (const char* env = std::getenv("MLSCHED_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

}  // namespace mlsched
