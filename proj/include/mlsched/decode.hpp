#pragma once

#include <span>

#include "mlsched/core.hpp"

namespace mlsched {

/// Adjacent-swap repair pass. Walks the sequence keeping the current start
/// time t; whenever the next job is already released at t and is strictly
/// shorter than the current job, the pair is swapped and the walk steps back
/// one position so the new predecessor pair is re-examined. Every swap
/// strictly lowers the objective. O(n^2) worst case.
///
/// Returns the better of the repaired and the input sequence.
/// Throws std::invalid_argument if order is not a permutation.
Schedule ls_repair(const Instance& instance, std::span<const int> order);

/// The repaired sequence itself, without the better-of-two guard.
Order ls_repair_sequence(const Instance& instance, std::span<const int> order);

/// Non-delay list scheduling of the jobs in subset from time start: at each
/// instant run the released job with the smallest priority (ties by index),
/// jumping to the next release when none is available.
Order greedy_dispatch(const Instance& instance, std::span<const int> subset, Time start,
                      std::span<const double> priorities);

/// Reinsertion local search. For every job j and every target position k,
/// j is extracted, the first k jobs of the remaining sequence are kept, j is
/// placed next and the rest is rebuilt with greedy_dispatch on priorities.
/// The first strictly improving candidate is accepted and the scan resumes
/// with the next extraction position; the search stops once n consecutive
/// extractions yield no improvement. The result never has a higher
/// objective than start, and applying rdi to it again returns it unchanged.
/// Throws std::invalid_argument on length mismatches.
Schedule rdi(const Instance& instance, const Schedule& start, std::span<const double> priorities);

}  // namespace mlsched
