#pragma once

#include <span>
#include <vector>

#include "mlsched/core.hpp"

namespace mlsched {

/// Jobs sorted by ascending priority, ties broken by ascending job index.
/// With position weights n, n-1, ..., 1 this order minimizes
/// sum_i (n - i + 1) * priority[j_i], i.e. it solves 1||sum C_j on the
/// surrogate processing times. Priorities may be negative.
Order spt_order(std::span<const double> priorities);

/// Same rule on integer keys (plain SPT on p, SRT on r, ...).
Order sort_order(std::span<const Time> keys);

/// Result of the preemptive SRPT simulation.
struct SrptTrace {
  std::vector<Time> completions;   // per job
  std::vector<Time> first_segment; // pi_j: processed before the first preemption (p_j if never preempted)
  std::vector<int> preemptions;    // #_j
  std::vector<Time> interruptor_p; // p of the job that ended j's first segment, 0 if never preempted
  std::vector<int> rank;           // 1-based position of j when jobs are sorted by SRPT completion
  int total_preemptions = 0;       // #_T
  Time objective = 0;
};

/// Event-driven SRPT: at every release or completion instant the released,
/// unfinished job with least remaining time runs. A running job is only
/// preempted by a newly released job with strictly smaller remaining time;
/// remaining-time ties are broken by ascending job index.
SrptTrace srpt_trace(const Instance& instance);

/// SRPT objective of the jobs in subset when none may start before start_time
/// (release dates become max(r_j, start_time)). Used as a lower bound.
Time srpt_objective(const Instance& instance, std::span<const int> subset, Time start_time);

}  // namespace mlsched
