#include "mlsched/decode.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "mlsched/random.hpp"

namespace mlsched {

Order ls_repair_sequence(const Instance& instance, std::span<const int> order) {
  require_permutation(order, instance.size());
  Order s(order.begin(), order.end());
  const std::size_t n = s.size();
  std::vector<Time> completion(n, 0);  // by position, valid below l
  Time t = 0;
  std::size_t l = 0;
  while (l + 1 < n) {
    if (t < instance.r(s[l])) t = instance.r(s[l]);
    if (t >= instance.r(s[l + 1]) && instance.p(s[l]) > instance.p(s[l + 1])) {
      std::swap(s[l], s[l + 1]);
      if (l == 0) {
        t = 0;
      } else if (l == 1) {
        t = 0;
        l = 0;
      } else {
        t = completion[l - 2];
        --l;
      }
    } else {
      t += instance.p(s[l]);
      completion[l] = t;
      ++l;
    }
  }
  return s;
}

Schedule ls_repair(const Instance& instance, std::span<const int> order) {
  Schedule input = evaluate_schedule(instance, order);
  Schedule repaired = evaluate_schedule(instance, ls_repair_sequence(instance, order));
  return repaired.objective <= input.objective ? repaired : input;
}

namespace {

struct ByPriority {
  std::span<const double> priorities;
  bool operator()(int a, int b) const {  // max-heap comparator -> pops smallest priority, then index
    if (priorities[a] != priorities[b]) return priorities[a] > priorities[b];
    return a > b;
  }
};

// Lower bounds on the completion-time sum of a job set started at time t or
// later, kept under insert/erase with Fenwick trees:
//   spt: c * t + sum_i (c - i + 1) p_(i), p sorted ascending (releases ignored);
//   rel: sum_e max(r_e, t) + p_e (each job alone).
class SuffixBound {
 public:
  explicit SuffixBound(const Instance& inst)
      : inst_(inst), p_rank_(inst.size()), r_rank_(inst.size()), r_sorted_(inst.size()) {
    const std::size_t n = inst.size();
    live_.p.resize(n + 1);
    live_.r.resize(n + 1);
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return inst.p(a) < inst.p(b); });
    for (std::size_t k = 0; k < n; ++k) p_rank_[idx[k]] = static_cast<int>(k);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return inst.r(a) < inst.r(b); });
    for (std::size_t k = 0; k < n; ++k) {
      r_rank_[idx[k]] = static_cast<int>(k);
      r_sorted_[k] = inst.r(idx[k]);
    }
  }

  void clear() {
    std::fill(live_.p.begin(), live_.p.end(), Node{});
    std::fill(live_.r.begin(), live_.r.end(), Node{});
    live_.count = live_.weighted = live_.r_total = live_.p_total = 0;
  }

  void insert(int j) {
    const Time x = inst_.p(j);
    const Node below = prefix(live_.p, p_rank_[j]);
    live_.weighted += x * (live_.count - below.cnt + 1) + below.sum;
    add(live_.p, p_rank_[j], 1, x);
    add(live_.r, r_rank_[j], 1, inst_.r(j));
    ++live_.count;
    live_.p_total += x;
    live_.r_total += inst_.r(j);
  }

  void erase(int j) {
    const Time x = inst_.p(j);
    add(live_.p, p_rank_[j], -1, -x);
    add(live_.r, r_rank_[j], -1, -inst_.r(j));
    --live_.count;
    live_.p_total -= x;
    live_.r_total -= inst_.r(j);
    const Node below = prefix(live_.p, p_rank_[j]);
    live_.weighted -= x * (live_.count - below.cnt + 1) + below.sum;
  }

  // Dispatch mode. A dispatched job x was released before any later check
  // time t, so its release-bound term is exactly t + p_x; the r-tree and the
  // totals stay untouched and take() only updates the p-tree. finish() copies
  // the p-tree back, which is cheaper than re-inserting the tail.
  void begin() { saved_p_ = live_.p, saved_count_ = live_.count, saved_weighted_ = live_.weighted; }

  void take(int j) {
    const Time x = inst_.p(j);
    add(live_.p, p_rank_[j], -1, -x);
    --live_.count;
    const Node below = prefix(live_.p, p_rank_[j]);
    live_.weighted -= x * (live_.count - below.cnt + 1) + below.sum;
    ++taken_count_;
    taken_p_ += x;
  }

  void finish() {
    live_.p = saved_p_;
    live_.count = saved_count_;
    live_.weighted = saved_weighted_;
    taken_count_ = taken_p_ = 0;
  }

  Time value(Time t) const {
    const Time spt = live_.count * t + live_.weighted;
    const int split = static_cast<int>(std::lower_bound(r_sorted_.begin(), r_sorted_.end(), t) - r_sorted_.begin());
    const Node early = prefix(live_.r, split);
    const Time rel = live_.r_total - early.sum + early.cnt * t + live_.p_total - taken_count_ * t - taken_p_;
    return std::max(spt, rel);
  }

 private:
  struct Node {
    Time cnt = 0;
    Time sum = 0;
  };
  struct State {
    std::vector<Node> p, r;  // Fenwick trees indexed by p-rank and r-rank
    Time count = 0;
    Time weighted = 0;
    Time r_total = 0;
    Time p_total = 0;
  };

  // Count and value sum over ranks < r.
  static Node prefix(const std::vector<Node>& tree, int r) {
    Node acc;
    for (int i = r; i > 0; i -= i & -i) {
      acc.cnt += tree[i].cnt;
      acc.sum += tree[i].sum;
    }
    return acc;
  }

  static void add(std::vector<Node>& tree, int r, Time dc, Time ds) {
    for (std::size_t i = static_cast<std::size_t>(r) + 1; i < tree.size(); i += i & -i) {
      tree[i].cnt += dc;
      tree[i].sum += ds;
    }
  }

  const Instance& inst_;
  std::vector<int> p_rank_;
  std::vector<int> r_rank_;
  std::vector<Time> r_sorted_;
  State live_;
  std::vector<Node> saved_p_;
  Time saved_count_ = 0;
  Time saved_weighted_ = 0;
  Time taken_count_ = 0;
  Time taken_p_ = 0;
};

std::vector<int> release_order(const Instance& inst) {
  std::vector<int> by_release(inst.size());
  std::iota(by_release.begin(), by_release.end(), 0);
  std::stable_sort(by_release.begin(), by_release.end(), [&](int a, int b) { return inst.r(a) < inst.r(b); });
  return by_release;
}

// Non-delay dispatch state over the jobs flagged in member. Candidates are
// visited through by_release (all jobs sorted by release date, then index).
class Dispatcher {
 public:
  Dispatcher(const Instance& inst, std::span<const double> priorities, const std::vector<int>& by_release,
             const std::vector<char>& member)
      : inst_(inst), by_release_(by_release), member_(member), rank_(inst.size()), job_(inst.size()) {
    // The heap holds priority ranks: a total order equal to (priority, index).
    std::iota(job_.begin(), job_.end(), 0);
    std::sort(job_.begin(), job_.end(), [&](int a, int b) { return ByPriority{priorities}(b, a); });
    for (std::size_t k = 0; k < job_.size(); ++k) rank_[job_[k]] = static_cast<int>(k);
  }

  void start(Time t) {
    heap_.clear();
    next_ = 0;
    t_ = t;
  }

  // Places the next job and returns it; at least one member job must remain.
  int step() {
    skip();
    release_until(t_);
    if (heap_.empty()) {
      t_ = inst_.r(by_release_[next_]);
      release_until(t_);
    }
    std::pop_heap(heap_.begin(), heap_.end(), cmp_);
    const int j = job_[heap_.back()];
    heap_.pop_back();
    t_ = std::max(t_, inst_.r(j)) + inst_.p(j);
    return j;
  }

  Time time() const { return t_; }

 private:
  void skip() {
    while (next_ < by_release_.size() && !member_[by_release_[next_]]) ++next_;
  }

  void release_until(Time t) {
    const std::size_t before = heap_.size();
    while (next_ < by_release_.size() && inst_.r(by_release_[next_]) <= t) {
      heap_.push_back(rank_[by_release_[next_++]]);
      skip();
    }
    if (heap_.size() - before > 8)
      std::make_heap(heap_.begin(), heap_.end(), cmp_);
    else
      for (std::size_t k = before + 1; k <= heap_.size(); ++k) std::push_heap(heap_.begin(), heap_.begin() + k, cmp_);
  }

  const Instance& inst_;
  std::greater<int> cmp_;  // min-heap on ranks
  const std::vector<int>& by_release_;
  const std::vector<char>& member_;
  std::vector<int> rank_;  // job -> rank
  std::vector<int> job_;   // rank -> job
  std::vector<int> heap_;
  std::size_t next_ = 0;
  Time t_ = 0;
};

// Reinsertion search state. Besides the current sequence it keeps, per
// position q, the completion time, the prefix objective and an XOR hash of
// the prefix job set, plus consistent_from: the first position from which the
// current sequence coincides with greedy dispatch. A candidate whose dispatch
// reaches the same (job set, time) state as the current sequence at such a
// position continues exactly like the current sequence, so its objective is
// known without dispatching the rest.
class Reinsertion {
 public:
  Reinsertion(const Instance& inst, std::span<const double> priorities, Order start)
      : inst_(inst), prio_(priorities), n_(inst.size()), by_release_(release_order(inst)), member_(n_, 0),
        dispatcher_(inst, priorities, by_release_, member_), bound_(inst), cur_(std::move(start)), keys_(n_),
        pos_(n_), completion_(n_), prefix_sum_(n_ + 1), prefix_hash_(n_ + 1) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto& k : keys_) k = h = mix64(h);
    rest_.resize(n_ - 1);
    tail_.reserve(n_);
    refresh();
  }

  Order run() {
    std::size_t i = 0;
    std::size_t idle = 0;  // consecutive extractions without improvement
    while (idle < n_) {
      idle = extract(i) ? 0 : idle + 1;
      i = (i + 1) % n_;
    }
    return cur_;
  }

 private:
  void refresh() {
    Time t = 0;
    for (std::size_t q = 0; q < n_; ++q) {
      const int j = cur_[q];
      t = std::max(t, inst_.r(j)) + inst_.p(j);
      completion_[q] = t;
      prefix_sum_[q + 1] = prefix_sum_[q] + t;
      prefix_hash_[q + 1] = prefix_hash_[q] ^ keys_[j];
      pos_[j] = static_cast<int>(q);
    }
    best_ = prefix_sum_[n_];

    // Replay the dispatch rule along the sequence; positions where it would
    // pick another job break consistency.
    std::vector<int> heap;
    std::vector<char> done(n_, 0);
    ByPriority cmp{prio_};
    std::size_t next = 0;
    auto release_until = [&](Time limit) {
      while (next < n_ && inst_.r(by_release_[next]) <= limit) {
        heap.push_back(by_release_[next++]);
        std::push_heap(heap.begin(), heap.end(), cmp);
      }
    };
    auto prune = [&] {
      while (!heap.empty() && done[heap.front()]) {
        std::pop_heap(heap.begin(), heap.end(), cmp);
        heap.pop_back();
      }
    };
    consistent_from_ = 0;
    t = 0;
    for (std::size_t q = 0; q < n_; ++q) {
      release_until(t);
      prune();
      if (heap.empty()) {
        while (next < n_ && done[by_release_[next]]) ++next;
        release_until(inst_.r(by_release_[next]));
        prune();
      }
      if (heap.front() != cur_[q]) consistent_from_ = q + 1;
      done[cur_[q]] = 1;
      t = completion_[q];
    }
  }

  // True if the placed jobs (P of them) are exactly the first P jobs of cur_.
  bool same_prefix_set(std::size_t k, int j, std::size_t P) const {
    for (std::size_t q = 0; q < k; ++q)
      if (static_cast<std::size_t>(pos_[rest_[q]]) >= P) return false;
    if (static_cast<std::size_t>(pos_[j]) >= P) return false;
    for (int x : tail_)
      if (static_cast<std::size_t>(pos_[x]) >= P) return false;
    return true;
  }

  bool merges(std::size_t k, int j, std::size_t P, Time t, std::uint64_t hash) const {
    return P >= consistent_from_ && t == completion_[P - 1] && hash == prefix_hash_[P] && same_prefix_set(k, j, P);
  }

  void accept(std::size_t k, int j, std::size_t merged_at) {
    Order next(rest_.begin(), rest_.begin() + static_cast<std::ptrdiff_t>(k));
    next.push_back(j);
    next.insert(next.end(), tail_.begin(), tail_.end());
    next.insert(next.end(), cur_.begin() + static_cast<std::ptrdiff_t>(merged_at), cur_.end());
    cur_ = std::move(next);
    refresh();
  }

  bool extract(std::size_t i) {
    const int j = cur_[i];
    std::copy(cur_.begin(), cur_.begin() + static_cast<std::ptrdiff_t>(i), rest_.begin());
    std::copy(cur_.begin() + static_cast<std::ptrdiff_t>(i) + 1, cur_.end(), rest_.begin() + static_cast<std::ptrdiff_t>(i));
    std::fill(member_.begin(), member_.end(), 0);
    bound_.clear();
    for (int q : rest_) {
      member_[q] = 1;
      bound_.insert(q);
    }

    Time t_prefix = 0;
    Time sum_prefix = 0;
    for (std::size_t k = 0; k < n_; ++k) {
      if (k > 0) {
        const int q = rest_[k - 1];
        t_prefix = std::max(t_prefix, inst_.r(q)) + inst_.p(q);
        sum_prefix += t_prefix;
        member_[q] = 0;
        bound_.erase(q);
      }
      const Time t_j = std::max(t_prefix, inst_.r(j)) + inst_.p(j);
      const Time base = sum_prefix + t_j;
      // base is non-decreasing in k, so no later target can improve either.
      if (base >= best_) break;
      // Hash of rest_[0..k) plus j.
      std::uint64_t hash = (k <= i ? prefix_hash_[k] : prefix_hash_[k + 1] ^ keys_[j]) ^ keys_[j];
      tail_.clear();
      std::size_t P = k + 1;
      if (merges(k, j, P, t_j, hash)) {
        const Time total = base + best_ - prefix_sum_[P];
        if (total < best_) {
          accept(k, j, P);
          return true;
        }
        continue;
      }
      if (base + bound_.value(t_j) >= best_) continue;

      // Dispatch the remaining jobs, stopping on the bound or on a merge.
      bound_.begin();
      dispatcher_.start(t_j);
      Time sum = base;
      std::size_t merged_at = n_;
      bool cut = false;
      for (std::size_t left = n_ - 1 - k; left > 0; --left) {
        const int x = dispatcher_.step();
        const Time t = dispatcher_.time();
        sum += t;
        tail_.push_back(x);
        bound_.take(x);
        hash ^= keys_[x];
        ++P;
        if (merges(k, j, P, t, hash)) {
          merged_at = P;
          sum += best_ - prefix_sum_[P];
          break;
        }
        if (sum + bound_.value(t) >= best_) {
          cut = true;
          break;
        }
      }
      bound_.finish();
      if (!cut && sum < best_) {
        accept(k, j, merged_at);
        return true;
      }
    }
    return false;
  }

  const Instance& inst_;
  std::span<const double> prio_;
  const std::size_t n_;
  const std::vector<int> by_release_;
  std::vector<char> member_;
  Dispatcher dispatcher_;
  SuffixBound bound_;

  Order cur_;
  Time best_ = 0;
  std::vector<std::uint64_t> keys_;
  std::vector<int> pos_;
  std::vector<Time> completion_;
  std::vector<Time> prefix_sum_;
  std::vector<std::uint64_t> prefix_hash_;
  std::size_t consistent_from_ = 0;

  Order rest_;
  Order tail_;
};

}  // namespace

Order greedy_dispatch(const Instance& instance, std::span<const int> subset, Time start,
                      std::span<const double> priorities) {
  if (priorities.size() != instance.size()) throw std::invalid_argument("greedy_dispatch: priorities length mismatch");
  std::vector<char> member(instance.size(), 0);
  for (int j : subset) member.at(j) = 1;
  const std::vector<int> by_release = release_order(instance);
  Dispatcher d(instance, priorities, by_release, member);
  d.start(start);
  Order out;
  out.reserve(subset.size());
  for (std::size_t k = 0; k < subset.size(); ++k) out.push_back(d.step());
  return out;
}

Schedule rdi(const Instance& instance, const Schedule& start, std::span<const double> priorities) {
  const std::size_t n = instance.size();
  if (priorities.size() != n) throw std::invalid_argument("rdi: priorities length mismatch");
  require_permutation(start.order, n);
  if (n == 1) return evaluate_schedule(instance, start.order);
  return evaluate_schedule(instance, Reinsertion(instance, priorities, start.order).run());
}

}  // namespace mlsched
