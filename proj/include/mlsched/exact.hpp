#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "mlsched/core.hpp"
#include "mlsched/encoder.hpp"

namespace mlsched {

/// Completion-time sum of the fixed prefix plus the SRPT objective of the
/// other jobs started no earlier than t. t must be the completion time of the
/// prefix (0 for an empty prefix).
Time srpt_lower_bound(const Instance& instance, std::span<const int> prefix, Time t);

struct BnbOptions {
  std::optional<std::uint64_t> node_limit;
  std::optional<double> time_limit_seconds;
  /// When set, the incumbent is initialized with imlh on this model,
  /// otherwise with the SPT order on p.
  const Model* warm_start = nullptr;
};

struct BnbStats {
  std::uint64_t nodes_explored = 0;
  std::uint64_t nodes_pruned = 0;
  double wall_seconds = 0.0;
  bool proven_optimal = false;
  Time initial_incumbent = 0;
};

struct BnbResult {
  Schedule schedule;
  BnbStats stats;
};

/// Default instance size limit for bnb_solve without explicit limits.
inline constexpr int kExactMaxJobs = 15;

/// Depth-first branch-and-bound over sequence prefixes. Branches are tried in
/// ascending job index; a job is only appended if it can start before every
/// other unscheduled job could complete (active schedules), and a node is
/// pruned when its SRPT lower bound cannot beat the incumbent. Among optimal
/// sequences found by the search the lexicographically smallest is returned.
/// Without limits the result is proven optimal; when a limit is hit the best
/// sequence found so far is returned with proven_optimal = false.
/// Throws std::invalid_argument if n > kExactMaxJobs and no limit is set.
BnbResult bnb_solve(const Instance& instance, const BnbOptions& options = {});

/// Maximum size accepted by brute_force.
inline constexpr int kBruteForceMaxJobs = 9;

/// Enumerates all n! sequences and returns the lexicographically smallest
/// optimal one. Throws std::invalid_argument if n > kBruteForceMaxJobs.
Schedule brute_force(const Instance& instance);

}  // namespace mlsched
