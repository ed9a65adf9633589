#include "mlsched/exact.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "mlsched/easy.hpp"
#include "mlsched/heuristics.hpp"

namespace mlsched {

Time srpt_lower_bound(const Instance& instance, std::span<const int> prefix, Time t) {
  const std::size_t n = instance.size();
  std::vector<char> fixed(n, 0);
  Time c = 0;
  Time sum = 0;
  for (int j : prefix) {
    if (j < 0 || static_cast<std::size_t>(j) >= n || fixed[j])
      throw std::invalid_argument("srpt_lower_bound: prefix is not a partial permutation");
    fixed[j] = 1;
    c = std::max(c, instance.r(j)) + instance.p(j);
    sum += c;
  }
  std::vector<int> rest;
  rest.reserve(n - prefix.size());
  for (std::size_t j = 0; j < n; ++j)
    if (!fixed[j]) rest.push_back(static_cast<int>(j));
  return sum + srpt_objective(instance, rest, t);
}

namespace {

using Clock = std::chrono::steady_clock;

class BranchAndBound {
 public:
  BranchAndBound(const Instance& instance, const BnbOptions& options)
      : inst_(instance), options_(options), n_(instance.size()), start_(Clock::now()) {}

  BnbResult run() {
    Schedule initial = initial_incumbent();
    best_order_ = initial.order;
    best_ = initial.objective;
    stats_.initial_incumbent = best_;

    remaining_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) remaining_[j] = static_cast<int>(j);
    prefix_.reserve(n_);
    search(0, 0);

    stats_.proven_optimal = !aborted_;
    stats_.wall_seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    return {evaluate_schedule(inst_, best_order_), stats_};
  }

 private:
  Schedule initial_incumbent() const {
    if (options_.warm_start) return imlh(inst_, *options_.warm_start).schedule;
    return spt_baseline(inst_).schedule;
  }

  bool limit_hit() {
    if (options_.node_limit && stats_.nodes_explored >= *options_.node_limit) return true;
    if (options_.time_limit_seconds && (stats_.nodes_explored & 1023) == 0 &&
        std::chrono::duration<double>(Clock::now() - start_).count() > *options_.time_limit_seconds)
      return true;
    return false;
  }

  // An incumbent found by the search is lexicographically smaller than every
  // leaf visited later, so ties with it are pruned as well.
  bool cannot_improve(Time bound) const { return bound > best_ || (bound == best_ && found_by_search_); }

  void search(Time t, Time sum) {
    if (aborted_) return;
    if (limit_hit()) {
      aborted_ = true;
      return;
    }
    ++stats_.nodes_explored;

    if (remaining_.empty()) {
      if (sum < best_ || (sum == best_ && !found_by_search_ && prefix_ < best_order_)) {
        best_ = sum;
        best_order_ = prefix_;
        found_by_search_ = true;
      }
      return;
    }

    if (cannot_improve(sum + srpt_objective(inst_, remaining_, t))) {
      ++stats_.nodes_pruned;
      return;
    }

    Time earliest_completion = std::numeric_limits<Time>::max();
    for (int k : remaining_)
      earliest_completion = std::min(earliest_completion, std::max(t, inst_.r(k)) + inst_.p(k));

    // remaining_ stays sorted by job index so branches follow lexicographic order.
    const std::vector<int> branches = remaining_;
    for (int j : branches) {
      const Time begin = std::max(t, inst_.r(j));
      if (begin >= earliest_completion) continue;  // some other job fits entirely before j
      const Time c = begin + inst_.p(j);
      if (cannot_improve(sum + c)) continue;
      remaining_.erase(std::find(remaining_.begin(), remaining_.end(), j));
      prefix_.push_back(j);
      search(c, sum + c);
      prefix_.pop_back();
      remaining_.insert(std::lower_bound(remaining_.begin(), remaining_.end(), j), j);
      if (aborted_) return;
    }
  }

  const Instance& inst_;
  const BnbOptions& options_;
  std::size_t n_;
  Clock::time_point start_;
  BnbStats stats_;
  Order best_order_;
  Time best_ = 0;
  bool found_by_search_ = false;
  bool aborted_ = false;
  std::vector<int> remaining_;
  Order prefix_;
};

void enumerate(const Instance& inst, Order& prefix, std::vector<char>& used, Time t, Time sum, Time& best,
               Order& best_order) {
  if (prefix.size() == inst.size()) {
    if (sum < best) {
      best = sum;
      best_order = prefix;
    }
    return;
  }
  for (std::size_t j = 0; j < inst.size(); ++j) {
    if (used[j]) continue;
    const Time c = std::max(t, inst.r(j)) + inst.p(j);
    used[j] = 1;
    prefix.push_back(static_cast<int>(j));
    enumerate(inst, prefix, used, c, sum + c, best, best_order);
    prefix.pop_back();
    used[j] = 0;
  }
}

}  // namespace

BnbResult bnb_solve(const Instance& instance, const BnbOptions& options) {
  if (instance.n() > kExactMaxJobs && !options.node_limit && !options.time_limit_seconds)
    throw std::invalid_argument(
        fmt::format("bnb_solve: n = {} exceeds {} without a node or time limit", instance.n(), kExactMaxJobs));
  return BranchAndBound(instance, options).run();
}

Schedule brute_force(const Instance& instance) {
  if (instance.n() > kBruteForceMaxJobs)
    throw std::invalid_argument(fmt::format("brute_force: n = {} exceeds {}", instance.n(), kBruteForceMaxJobs));
  Order prefix;
  std::vector<char> used(instance.size(), 0);
  Time best = std::numeric_limits<Time>::max();
  Order best_order;
  enumerate(instance, prefix, used, 0, 0, best, best_order);
  return evaluate_schedule(instance, best_order);
}

}  // namespace mlsched
