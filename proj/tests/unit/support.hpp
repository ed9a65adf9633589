// Fixtures and independent oracles shared by the unit tests.
#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "mlsched/core.hpp"
#include "mlsched/decode.hpp"
#include "mlsched/random.hpp"

namespace testing {

using namespace mlsched;

// Three jobs (p, r): (2,0), (1,3), (4,1).
inline Instance instance_i1() { return Instance({{2, 0}, {1, 3}, {4, 1}}); }

inline Instance random_instance(Rng& rng, int n_lo, int n_hi) {
  static constexpr double rhos[] = {0.2, 0.4, 0.6, 0.8, 1.0, 1.25, 1.5, 1.75, 2.0, 3.0};
  const int n = static_cast<int>(rng.uniform_int(n_lo, n_hi));
  return generate_instance(n, rhos[rng.uniform_int(0, 9)], rng.next());
}

inline Order random_order(Rng& rng, std::size_t n) {
  Order o(n);
  std::iota(o.begin(), o.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(o[i - 1], o[rng.uniform_int(0, static_cast<std::int64_t>(i) - 1)]);
  return o;
}

inline std::vector<double> random_priorities(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

// Objective by a direct per-position loop.
inline Time naive_objective(const Instance& inst, const Order& order) {
  Time t = 0, total = 0;
  for (int j : order) {
    t = std::max(t, inst.r(j)) + inst.p(j);
    total += t;
  }
  return total;
}

// Enumeration over all n! sequences; smallest objective.
inline Time enumerate_optimum(const Instance& inst) {
  Order o(inst.size());
  std::iota(o.begin(), o.end(), 0);
  Time best = naive_objective(inst, o);
  while (std::next_permutation(o.begin(), o.end())) best = std::min(best, naive_objective(inst, o));
  return best;
}

// Unit-time SRPT simulation: at each integer instant run the released job with
// least remaining time, keeping the running job on ties.
inline Time unit_step_srpt(const Instance& inst) {
  const std::size_t n = inst.size();
  std::vector<Time> left(n);
  for (std::size_t j = 0; j < n; ++j) left[j] = inst.p(j);
  std::size_t done = 0;
  Time t = 0, total = 0;
  int running = -1;
  while (done < n) {
    int pick = running;
    for (std::size_t j = 0; j < n; ++j) {
      if (left[j] == 0 || inst.r(j) > t) continue;
      if (pick < 0 || left[j] < left[pick]) pick = static_cast<int>(j);
    }
    ++t;
    if (pick < 0) continue;
    running = pick;
    if (--left[pick] == 0) {
      total += t;
      ++done;
      running = -1;
    }
  }
  return total;
}

// Reinsertion search transcribed without bounds or prefix reuse.
inline Order naive_rdi(const Instance& inst, Order cur, std::span<const double> prio) {
  const std::size_t n = cur.size();
  if (n == 1) return cur;
  Time best = naive_objective(inst, cur);
  std::size_t i = 0, idle = 0;
  while (idle < n) {
    const int j = cur[i];
    Order rest = cur;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    bool improved = false;
    for (std::size_t k = 0; k < n && !improved; ++k) {
      Order cand(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(k));
      cand.push_back(j);
      Time t = 0;
      for (int q : cand) t = std::max(t, inst.r(q)) + inst.p(q);
      std::vector<int> subset(rest.begin() + static_cast<std::ptrdiff_t>(k), rest.end());
      // Dispatch by smallest priority among released jobs, ties by index.
      while (!subset.empty()) {
        Time next_release = inst.r(subset.front());
        for (int q : subset) next_release = std::min(next_release, inst.r(q));
        t = std::max(t, next_release);
        auto pick = subset.end();
        for (auto it = subset.begin(); it != subset.end(); ++it) {
          if (inst.r(*it) > t) continue;
          if (pick == subset.end() || prio[*it] < prio[*pick] || (prio[*it] == prio[*pick] && *it < *pick)) pick = it;
        }
        t += inst.p(*pick);
        cand.push_back(*pick);
        subset.erase(pick);
      }
      const Time v = naive_objective(inst, cand);
      if (v < best) {
        best = v;
        cur = cand;
        improved = true;
      }
    }
    idle = improved ? 0 : idle + 1;
    i = (i + 1) % n;
  }
  return cur;
}

}  // namespace testing
