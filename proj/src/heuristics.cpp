#include "mlsched/heuristics.hpp"

#include <atomic>
#include <chrono>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "mlsched/decode.hpp"
#include "mlsched/easy.hpp"
#include "mlsched/random.hpp"
#include "parallel.hpp"

namespace mlsched {

using detail::parallel_for;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct OrderHash {
  std::size_t operator()(const Order& order) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int j : order) h = mix64(h ^ static_cast<std::uint64_t>(j));
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

SolveReport pmlh(const Instance& instance, const Model& model) {
  const auto start = Clock::now();
  const auto priorities = predict_priorities(model, model_features(model, instance));
  SolveReport report;
  report.heuristic = "pmlh";
  report.schedule = evaluate_schedule(instance, spt_order(priorities));
  report.counters.distinct_sequences = 1;
  report.wall_seconds = seconds_since(start);
  return report;
}

SolveReport imlh(const Instance& instance, const Model& model) {
  const auto start = Clock::now();
  const auto priorities = predict_priorities(model, model_features(model, instance));
  const Schedule repaired = ls_repair(instance, spt_order(priorities));
  SolveReport report;
  report.heuristic = "imlh";
  report.schedule = rdi(instance, repaired, priorities);
  report.counters = {1, 1, 1, 0};
  report.wall_seconds = seconds_since(start);
  return report;
}

SolveReport itmlh(const Instance& instance, const Model& model, const ItmlhOptions& options) {
  if (options.m < 1) throw std::invalid_argument("itmlh: m must be >= 1");
  const auto start = Clock::now();
  auto expired = [&] { return options.time_limit_seconds && seconds_since(start) > *options.time_limit_seconds; };

  const FeatureMatrix features = model_features(model, instance);
  const Eigen::MatrixXd draws = perturbation_draws(options.m, model.dim(), options.seed);

  SolveReport report;
  report.heuristic = "itmlh";

  struct Candidate {
    int index;
    std::vector<double> priorities;
    Schedule repaired;
  };
  std::vector<Candidate> pending;
  std::unordered_set<Order, OrderHash> seen_surrogate;
  std::unordered_set<Order, OrderHash> seen_repaired;

  for (int k = 0; k <= options.m; ++k) {
    if (k > 0 && expired()) {
      report.truncated = true;
      break;
    }
    Eigen::VectorXd theta = model.theta();
    if (k > 0) theta += options.perturbation_scale * draws.row(k - 1).transpose();
    const Eigen::VectorXd scores = features * theta;
    std::vector<double> priorities(scores.data(), scores.data() + scores.size());
    Order surrogate = spt_order(priorities);
    if (!seen_surrogate.insert(surrogate).second) {
      ++report.counters.memo_hits;
      continue;
    }
    ++report.counters.distinct_sequences;
    Schedule repaired = ls_repair(instance, surrogate);
    ++report.counters.ls_calls;
    if (!seen_repaired.insert(repaired.order).second) {
      ++report.counters.memo_hits;
      continue;
    }
    pending.push_back({k, std::move(priorities), std::move(repaired)});
  }

  std::vector<std::optional<Schedule>> decoded(pending.size());
  std::atomic<bool> cut{false};
  parallel_for(pending.size(), options.threads, [&](std::size_t i) {
    if (i > 0 && expired()) {
      cut = true;
      return;
    }
    decoded[i] = rdi(instance, pending[i].repaired, pending[i].priorities);
  });
  if (cut) report.truncated = true;

  // pending is in ascending candidate index, so the first minimum wins ties.
  for (const auto& result : decoded) {
    if (!result) continue;
    ++report.counters.rdi_calls;
    if (report.schedule.order.empty() || result->objective < report.schedule.objective) report.schedule = *result;
  }
  report.wall_seconds = seconds_since(start);
  return report;
}

SolveReport rand_baseline(const Instance& instance, std::uint64_t seed) {
  const auto start = Clock::now();
  Rng rng(seed, "rand");
  Order order(instance.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i-- > 1;)
    std::swap(order[i], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
  SolveReport report;
  report.heuristic = "rand";
  report.schedule = ls_repair(instance, order);
  report.counters = {1, 1, 0, 0};
  report.wall_seconds = seconds_since(start);
  return report;
}

SolveReport spt_baseline(const Instance& instance) {
  const auto start = Clock::now();
  std::vector<Time> p(instance.size());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = instance.p(j);
  SolveReport report;
  report.heuristic = "spt";
  report.schedule = evaluate_schedule(instance, sort_order(p));
  report.counters.distinct_sequences = 1;
  report.wall_seconds = seconds_since(start);
  return report;
}

}  // namespace mlsched
