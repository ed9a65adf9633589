#include "mlsched/easy.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

namespace mlsched {

Order spt_order(std::span<const double> priorities) {
  Order order(priorities.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return priorities[a] < priorities[b]; });
  return order;
}

Order sort_order(std::span<const Time> keys) {
  Order order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return keys[a] < keys[b]; });
  return order;
}

namespace {

// Simulates SRPT on the jobs in subset. When trace is non-null it must be
// sized for the whole instance; only entries of subset jobs are written.
Time simulate_srpt(const Instance& inst, std::span<const int> subset, Time start, SrptTrace* trace) {
  const std::size_t m = subset.size();
  if (m == 0) return 0;
  auto release = [&](int j) { return std::max(inst.r(j), start); };

  std::vector<int> by_release(subset.begin(), subset.end());
  std::stable_sort(by_release.begin(), by_release.end(), [&](int a, int b) {
    const Time ra = release(a), rb = release(b);
    return ra != rb ? ra < rb : a < b;
  });

  std::vector<Time> remaining(inst.size(), 0);
  for (int j : subset) remaining[j] = inst.p(j);

  using Entry = std::pair<Time, int>;  // (remaining, job)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> waiting;

  constexpr Time kNever = std::numeric_limits<Time>::max();
  std::size_t next = 0;
  std::size_t done = 0;
  int running = -1;
  Time t = start;
  Time objective = 0;

  auto admit = [&] {
    while (next < m && release(by_release[next]) <= t) {
      const int j = by_release[next++];
      waiting.emplace(remaining[j], j);
    }
  };

  while (done < m) {
    admit();
    if (running < 0) {
      if (waiting.empty()) {
        t = release(by_release[next]);
        admit();
      }
      running = waiting.top().second;
      waiting.pop();
    }
    const Time next_release = next < m ? release(by_release[next]) : kNever;
    if (next_release == kNever || t + remaining[running] <= next_release) {
      t += remaining[running];
      remaining[running] = 0;
      objective += t;
      if (trace) trace->completions[running] = t;
      running = -1;
      ++done;
      continue;
    }
    remaining[running] -= next_release - t;
    t = next_release;
    admit();
    // Only jobs released just now can be shorter than the running job.
    if (!waiting.empty() && waiting.top().first < remaining[running]) {
      const int preemptor = waiting.top().second;
      waiting.pop();
      if (trace) {
        if (trace->preemptions[running] == 0) {
          trace->first_segment[running] = inst.p(running) - remaining[running];
          trace->interruptor_p[running] = inst.p(preemptor);
        }
        ++trace->preemptions[running];
        ++trace->total_preemptions;
      }
      waiting.emplace(remaining[running], running);
      running = preemptor;
    }
  }
  return objective;
}

}  // namespace

SrptTrace srpt_trace(const Instance& instance) {
  const std::size_t n = instance.size();
  SrptTrace trace;
  trace.completions.assign(n, 0);
  trace.first_segment.resize(n);
  for (std::size_t j = 0; j < n; ++j) trace.first_segment[j] = instance.p(j);
  trace.preemptions.assign(n, 0);
  trace.interruptor_p.assign(n, 0);
  trace.rank.assign(n, 0);

  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  trace.objective = simulate_srpt(instance, all, 0, &trace);

  const Order by_completion = sort_order(trace.completions);
  for (std::size_t k = 0; k < n; ++k) trace.rank[by_completion[k]] = static_cast<int>(k) + 1;
  return trace;
}

Time srpt_objective(const Instance& instance, std::span<const int> subset, Time start_time) {
  return simulate_srpt(instance, subset, start_time, nullptr);
}

}  // namespace mlsched
