#include "mlsched/learn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "mlsched/decode.hpp"
#include "mlsched/easy.hpp"
#include "mlsched/exact.hpp"
#include "mlsched/heuristics.hpp"
#include "mlsched/random.hpp"
#include "parallel.hpp"
#include "text_util.hpp"

namespace mlsched {

using detail::parallel_for;

namespace {

// Position weights of the descending-score order: the job in position i
// (1-based) of the maximizing sequence gets n - i + 1.
void add_argmax_weights(const Eigen::VectorXd& scores, std::vector<int>& idx, Eigen::VectorXd& weights,
                        double& value) {
  const int n = static_cast<int>(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return scores[a] > scores[b]; });
  for (int i = 0; i < n; ++i) {
    const double w = n - i;
    weights[idx[i]] += w;
    value += w * scores[idx[i]];
  }
}

}  // namespace

TrainingExample make_example(Instance instance, Order label, bool label_optimal) {
  const Schedule s = evaluate_schedule(instance, label);
  FeatureMatrix features = compute_features(instance);
  return {std::move(instance), std::move(label), s.objective, std::move(features), label_optimal};
}

Eigen::VectorXd phi_of_schedule(const FeatureMatrix& features, std::span<const int> order) {
  require_permutation(order, static_cast<std::size_t>(features.rows()));
  const auto n = static_cast<double>(order.size());
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(features.cols());
  for (std::size_t i = 0; i < order.size(); ++i) phi += (n - static_cast<double>(i)) * features.row(order[i]).transpose();
  return phi;
}

Order argmax_schedule(const FeatureMatrix& features, const Eigen::VectorXd& w) {
  const Eigen::VectorXd scores = features * w;
  Order order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] > scores[b]; });
  return order;
}

SaaObjective::SaaObjective(std::span<const TrainingExample> examples, const SaaConfig& config)
    : examples_(examples), threads_(config.threads) {
  if (examples.empty()) throw std::invalid_argument("SAA objective needs at least one example");
  if (config.samples < 1) throw std::invalid_argument("SAA objective needs at least one sample");
  dim_ = static_cast<int>(examples.front().features.cols());
  label_phi_.reserve(examples.size());
  features_.reserve(examples.size());
  for (const auto& ex : examples) {
    if (ex.features.cols() != dim_) throw std::invalid_argument("training examples have different feature dimensions");
    features_.push_back(ex.features);
    apply_scaling(features_.back(), config.scaling);
    label_phi_.push_back(phi_of_schedule(features_.back(), ex.label_order));
  }
  Rng rng(config.seed, "saa");
  draws_.resize(config.samples, dim_);
  for (int k = 0; k < config.samples; ++k)
    for (int i = 0; i < dim_; ++i) draws_(k, i) = config.perturbation_scale * rng.normal();
}

LossReport SaaObjective::evaluate(const Eigen::VectorXd& theta) const {
  if (theta.size() != dim_)
    throw std::invalid_argument(fmt::format("theta has {} entries, features have {}", theta.size(), dim_));
  const std::size_t count = examples_.size();
  const int samples = static_cast<int>(draws_.rows());
  // Column k holds theta + z_k.
  const Eigen::MatrixXd directions = draws_.transpose().colwise() + theta;

  std::vector<double> values(count);
  std::vector<Eigen::VectorXd> grads(count);
  parallel_for(count, threads_, [&](std::size_t e) {
    const FeatureMatrix& features = features_[e];
    const Eigen::MatrixXd scores = features * directions;  // n x M
    const auto n = static_cast<std::size_t>(features.rows());
    std::vector<int> idx(n);
    Eigen::VectorXd weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    double max_sum = 0.0;
    for (int k = 0; k < samples; ++k) add_argmax_weights(scores.col(k), idx, weights, max_sum);
    values[e] = max_sum / samples - theta.dot(label_phi_[e]);
    grads[e] = features.transpose() * weights / samples - label_phi_[e];
  });

  LossReport report;
  report.subgradient = Eigen::VectorXd::Zero(dim_);
  for (std::size_t e = 0; e < count; ++e) {
    report.value += values[e];
    report.subgradient += grads[e];
  }
  report.value /= static_cast<double>(count);
  report.subgradient /= static_cast<double>(count);
  report.per_example = std::move(values);
  return report;
}

LossReport saa_loss_and_subgradient(const Eigen::VectorXd& theta, std::span<const TrainingExample> examples,
                                    const SaaConfig& config) {
  return SaaObjective(examples, config).evaluate(theta);
}

namespace {

struct Evaluated {
  Eigen::VectorXd x;
  double f;
  Eigen::VectorXd g;
};

class Minimizer {
 public:
  Minimizer(const SaaObjective& objective, const SaaConfig& config, const IterationCallback& callback)
      : objective_(objective), config_(config), callback_(callback) {}

  TrainResult run() {
    TrainResult result;
    Evaluated cur = eval(Eigen::VectorXd::Zero(objective_.dim()));
    const double tol = config_.gradient_tolerance * std::max(1.0, cur.g.norm());
    record(result, 0, cur, 0.0);

    if (config_.optimizer == Optimizer::kLbfgs)
      lbfgs(result, cur, tol);
    else
      subgradient(result, cur, tol);

    result.theta = cur.x;
    result.value = cur.f;
    result.gradient_norm = cur.g.norm();
    const Eigen::VectorXd theta = config_.negate ? Eigen::VectorXd(-cur.x) : cur.x;
    result.model = Model(theta, Eigen::VectorXd::Ones(theta.size()), config_.scaling);
    return result;
  }

 private:
  Evaluated eval(Eigen::VectorXd x) {
    ++evaluations_;
    LossReport r = objective_.evaluate(x);
    if (!std::isfinite(r.value) || !r.subgradient.allFinite())
      throw std::runtime_error(fmt::format("training diverged: non-finite objective after {} evaluations (|theta| = {})",
                                           evaluations_, x.norm()));
    return {std::move(x), r.value, std::move(r.subgradient)};
  }

  void record(TrainResult& result, int iteration, const Evaluated& cur, double step) {
    IterationLog entry{iteration, cur.f, cur.g.norm(), step, evaluations_};
    result.log.push_back(entry);
    result.iterations = iteration;
    if (callback_) callback_(entry);
  }

  void lbfgs(TrainResult& result, Evaluated& cur, double tol) {
    std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> memory;  // (s, y)
    for (int iter = 1; iter <= config_.max_iterations; ++iter) {
      if (cur.g.norm() <= tol) {
        result.converged = true;
        result.stop_reason = "gradient tolerance";
        return;
      }
      Eigen::VectorXd d = -two_loop(memory, cur.g);
      double slope = cur.g.dot(d);
      if (!(slope < 0.0)) {
        memory.clear();
        d = -cur.g;
        slope = cur.g.dot(d);
      }
      const double initial_step = memory.empty() ? 1.0 / cur.g.norm() : 1.0;
      auto next = line_search(cur, d, slope, initial_step);
      if (!next) {
        result.stop_reason = "line search found no decrease";
        return;
      }
      const Eigen::VectorXd s = next->x - cur.x;
      const Eigen::VectorXd y = next->g - cur.g;
      const double step = s.norm();
      if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
        memory.emplace_back(s, y);
        if (static_cast<int>(memory.size()) > config_.memory) memory.pop_front();
      }
      cur = std::move(*next);
      record(result, iter, cur, step);
    }
    result.stop_reason = "iteration limit";
  }

  static Eigen::VectorXd two_loop(const std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& memory,
                                  const Eigen::VectorXd& g) {
    Eigen::VectorXd q = g;
    std::vector<double> alpha(memory.size());
    for (std::size_t i = memory.size(); i-- > 0;) {
      const auto& [s, y] = memory[i];
      alpha[i] = s.dot(q) / y.dot(s);
      q -= alpha[i] * y;
    }
    if (!memory.empty()) {
      const auto& [s, y] = memory.back();
      q *= s.dot(y) / y.dot(y);
    }
    for (std::size_t i = 0; i < memory.size(); ++i) {
      const auto& [s, y] = memory[i];
      const double beta = y.dot(q) / y.dot(s);
      q += (alpha[i] - beta) * s;
    }
    return q;
  }

  // Weak Wolfe bracketing. Falls back to the best sufficient-decrease point
  // seen if the curvature condition is never met.
  std::optional<Evaluated> line_search(const Evaluated& cur, const Eigen::VectorXd& d, double slope, double t) {
    constexpr double c1 = 1e-4;
    constexpr double c2 = 0.9;
    constexpr int kMaxTrials = 60;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    std::optional<Evaluated> fallback;
    for (int trial = 0; trial < kMaxTrials; ++trial) {
      Evaluated p = eval(cur.x + t * d);
      if (p.f > cur.f + c1 * t * slope || !(p.f < cur.f)) {
        hi = t;
      } else if (p.g.dot(d) < c2 * slope) {
        lo = t;
        if (!fallback || p.f < fallback->f) fallback = p;
      } else {
        return p;
      }
      t = std::isinf(hi) ? 2.0 * lo : 0.5 * (lo + hi);
      if (!std::isinf(hi) && hi - lo <= 1e-14 * std::max(1.0, hi)) break;
    }
    return fallback;
  }

  void subgradient(TrainResult& result, Evaluated& cur, double tol) {
    Evaluated best = cur;
    const double base_step = 1.0;
    for (int iter = 1; iter <= config_.max_iterations; ++iter) {
      const double gnorm = cur.g.norm();
      if (gnorm <= tol) {
        result.converged = true;
        result.stop_reason = "gradient tolerance";
        break;
      }
      const double step = base_step / std::sqrt(static_cast<double>(iter));
      cur = eval(cur.x - (step / gnorm) * cur.g);
      if (cur.f < best.f) best = cur;
      record(result, iter, best, step);
    }
    if (result.stop_reason.empty()) result.stop_reason = "iteration limit";
    cur = std::move(best);
  }

  const SaaObjective& objective_;
  const SaaConfig& config_;
  const IterationCallback& callback_;
  int evaluations_ = 0;
};

}  // namespace

TrainResult train(std::span<const TrainingExample> examples, const SaaConfig& config,
                  const IterationCallback& on_iteration) {
  const SaaObjective objective(examples, config);
  return Minimizer(objective, config, on_iteration).run();
}

std::uint64_t training_instance_seed(std::uint64_t seed, int n, int rho_index, int i) {
  std::uint64_t h = derive_seed(seed, "train");
  h = mix64(h ^ static_cast<std::uint64_t>(n));
  h = mix64(h ^ static_cast<std::uint64_t>(rho_index));
  return mix64(h ^ static_cast<std::uint64_t>(i));
}

std::vector<TrainingExample> build_training_set(const TrainingSetConfig& config) {
  if (config.per_cell < 1) throw std::invalid_argument("build_training_set: per_cell must be >= 1");
  for (int n : config.sizes) {
    if (n < 1) throw std::invalid_argument("build_training_set: sizes must be >= 1");
    if (config.labeler == Labeler::kExact && n > config.exact_max_jobs)
      throw std::invalid_argument(
          fmt::format("exact labels requested for n = {} beyond the oracle limit {}", n, config.exact_max_jobs));
  }

  struct Job {
    int n;
    int rho_index;
    int i;
  };
  std::vector<Job> jobs;
  for (int n : config.sizes)
    for (std::size_t r = 0; r < config.rhos.size(); ++r)
      for (int i = 0; i < config.per_cell; ++i) jobs.push_back({n, static_cast<int>(r), i});

  std::vector<std::optional<TrainingExample>> out(jobs.size());
  parallel_for(jobs.size(), config.threads, [&](std::size_t k) {
    const auto& job = jobs[k];
    Instance inst = generate_instance(job.n, config.rhos[job.rho_index],
                                      training_instance_seed(config.seed, job.n, job.rho_index, job.i));
    if (config.labeler == Labeler::kExact) {
      BnbResult r = bnb_solve(inst, BnbOptions{});
      out[k] = make_example(std::move(inst), std::move(r.schedule.order), r.stats.proven_optimal);
      return;
    }
    std::vector<double> p(inst.size());
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = static_cast<double>(inst.p(j));
    Schedule best = rdi(inst, ls_repair(inst, spt_order(p)), p);
    if (config.label_model) {
      ItmlhOptions opt;
      opt.m = 20;
      opt.seed = 1;
      for (const Schedule& s : {imlh(inst, *config.label_model).schedule, itmlh(inst, *config.label_model, opt).schedule})
        if (s.objective < best.objective) best = s;
    }
    out[k] = make_example(std::move(inst), std::move(best.order), false);
  });

  std::vector<TrainingExample> examples;
  examples.reserve(out.size());
  for (auto& ex : out) examples.push_back(std::move(*ex));
  return examples;
}

void save_training_set(std::span<const TrainingExample> examples, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::string labels;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    write_instance(examples[i].instance, dir / fmt::format("ex_{:05d}.txt", i));
    labels += fmt::format("{}; {}{}\n", examples[i].label_objective, format_order(examples[i].label_order),
                          examples[i].label_optimal ? "" : "; best-known");
  }
  detail::write_file(dir / "labels.txt", labels);
}

std::vector<TrainingExample> load_training_set(const std::filesystem::path& dir) {
  const auto lines = detail::content_lines(detail::read_file(dir / "labels.txt"));
  std::vector<TrainingExample> examples;
  examples.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& text = lines[i].text;
    const auto semi = text.find(';');
    if (semi == std::string::npos)
      throw std::invalid_argument(fmt::format("labels.txt line {}: expected \"objective; order\"", lines[i].number));
    const auto second = text.find(';', semi + 1);
    const Time objective = detail::parse_int(detail::split_ws(text.substr(0, semi)).at(0), lines[i].number);
    Order order = parse_order(text.substr(semi + 1, second == std::string::npos ? std::string::npos : second - semi - 1));
    const bool optimal = second == std::string::npos;
    Instance inst = read_instance(dir / fmt::format("ex_{:05d}.txt", i));
    TrainingExample ex = make_example(std::move(inst), std::move(order), optimal);
    if (ex.label_objective != objective)
      throw std::invalid_argument(fmt::format("labels.txt line {}: objective {} does not match the order ({})",
                                              lines[i].number, objective, ex.label_objective));
    examples.push_back(std::move(ex));
  }
  return examples;
}

}  // namespace mlsched
