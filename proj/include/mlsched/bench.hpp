#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlsched/core.hpp"
#include "mlsched/encoder.hpp"
#include "mlsched/heuristics.hpp"

namespace mlsched {

/// 100 * (value - reference) / reference. Throws std::invalid_argument if
/// reference <= 0.
double deviation(Time value, Time reference);

enum class ReferenceKind { kOptimal, kBestKnown };

std::string to_string(ReferenceKind kind);

/// Heuristic names accepted by run_heuristic: pmlh, imlh, itmlh, rand, spt.
bool is_known_heuristic(const std::string& name);

struct HeuristicParams {
  const Model* model = nullptr;  // required by pmlh, imlh, itmlh
  int m = 150;
  std::uint64_t seed = 0;
  std::optional<double> time_limit_seconds;
  int threads = 1;
};

/// Dispatches on the heuristic name. Throws std::invalid_argument for an
/// unknown name or a missing model.
SolveReport run_heuristic(const std::string& name, const Instance& instance, const HeuristicParams& params);

/// Deviation of one heuristic on one instance.
struct DeviationRow {
  int n = 0;
  double rho = 0.0;
  std::string heuristic;
  double delta = 0.0;  // percent
  ReferenceKind reference = ReferenceKind::kBestKnown;
  double wall_seconds = 0.0;
};

/// Aggregate over the instances of one (n, rho) cell. This is one CSV row.
struct BenchRow {
  int n = 0;
  double rho = 0.0;
  std::string heuristic;
  double delta_avg = 0.0;
  double delta_max = 0.0;
  std::optional<double> pct_opt;  // only with an optimal reference
  double t_avg = 0.0;
  double t_max = 0.0;
  std::uint64_t seed_base = 0;
  ReferenceKind reference = ReferenceKind::kBestKnown;
};

struct BenchConfig {
  std::vector<int> sizes;
  std::vector<double> rhos{std::begin(kRhoGrid), std::end(kRhoGrid)};
  int per_cell = 10;
  std::vector<std::string> heuristics;
  const Model* model = nullptr;
  std::uint64_t seed = 0;
  ReferenceKind reference = ReferenceKind::kBestKnown;
  /// Heuristics whose mean wall time over a size exceeds this are not run on
  /// larger sizes. Also caps each itmlh run.
  std::optional<double> time_limit_seconds;
  int m = 150;
  int threads = 1;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<DeviationRow> details;
};

/// Seed base of cell (n, rho index); instance i of the cell uses seed_base + i.
/// The stream is tagged "bench", disjoint from training seeds.
std::uint64_t bench_seed_base(std::uint64_t seed, int n, int rho_index);

/// Runs every heuristic on per_cell fresh instances of each (n, rho) cell.
/// The best-known reference is the per-instance minimum over the heuristics
/// that ran; the optimal reference uses bnb_solve. Throws
/// std::invalid_argument on an empty heuristic set, an unknown heuristic, a
/// missing model, or an optimal reference for sizes beyond kExactMaxJobs.
BenchReport run_benchmark(const BenchConfig& config);

/// Fixed header: n,rho,heuristic,delta_avg,delta_max,pct_opt,t_avg,t_max,seed_base,reference.
/// Deviations have 3 decimals, times 2 decimals, pct_opt 2 decimals (empty
/// for best-known references).
std::string bench_csv(const std::vector<BenchRow>& rows);
std::vector<BenchRow> parse_bench_csv(const std::string& text);

/// Default worker count: MLSCHED_THREADS if set and positive, else 1.
int default_thread_count();

}  // namespace mlsched
