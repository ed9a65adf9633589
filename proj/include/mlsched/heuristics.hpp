#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mlsched/core.hpp"
#include "mlsched/encoder.hpp"

namespace mlsched {

struct SolveCounters {
  int distinct_sequences = 0;  // distinct surrogate orders s^e
  int ls_calls = 0;
  int rdi_calls = 0;
  int memo_hits = 0;           // skipped LS (repeated s^e) plus skipped RDI (repeated s^i)
};

struct SolveReport {
  Schedule schedule;
  std::string heuristic;
  double wall_seconds = 0.0;
  SolveCounters counters;
  bool truncated = false;  // itmlh stopped on its time limit
};

/// Predict, sort, evaluate.
SolveReport pmlh(const Instance& instance, const Model& model);

/// pmlh's sequence, then ls_repair, then rdi on the predicted priorities.
SolveReport imlh(const Instance& instance, const Model& model);

struct ItmlhOptions {
  int m = 150;
  std::uint64_t seed = 0;
  double perturbation_scale = 1.0;  // 0 turns every perturbed model into theta itself
  int threads = 1;
  std::optional<double> time_limit_seconds;
};

/// Multi-start imlh. Candidate 0 is the unperturbed model, candidates 1..m use
/// perturb_model(model, m, seed). Surrogate orders are generated sequentially;
/// a repeated surrogate order skips both decoders, and a repeated repaired
/// order skips rdi (the memo is shared with candidate 0). The remaining rdi
/// calls run on up to `threads` workers; the result is the minimum objective,
/// ties resolved by the smallest candidate index, so it does not depend on
/// the thread count. Throws std::invalid_argument if m < 1.
SolveReport itmlh(const Instance& instance, const Model& model, const ItmlhOptions& options);

/// Uniform random permutation from Rng(seed, "rand"), then ls_repair.
SolveReport rand_baseline(const Instance& instance, std::uint64_t seed);

/// SPT on the true processing times.
SolveReport spt_baseline(const Instance& instance);

}  // namespace mlsched
