#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mlsched/core.hpp"
#include "mlsched/encoder.hpp"
#include "mlsched/features.hpp"

namespace mlsched {

/// A hard instance with a reference sequence (optimal or best known).
struct TrainingExample {
  Instance instance;
  Order label_order;
  Time label_objective = 0;
  FeatureMatrix features;
  bool label_optimal = false;
};

/// Computes features and the label objective.
TrainingExample make_example(Instance instance, Order label, bool label_optimal);

/// Feature vector of a whole sequence: sum_i (n - i + 1) * features.row(j_i).
/// Throws std::invalid_argument if order is not a permutation of the rows.
Eigen::VectorXd phi_of_schedule(const FeatureMatrix& features, std::span<const int> order);

/// Sequence maximizing <w, phi_of_schedule(features, s)>: rows sorted by
/// descending score <w, row>, ties by ascending index.
Order argmax_schedule(const FeatureMatrix& features, const Eigen::VectorXd& w);

enum class Optimizer { kLbfgs, kSubgradient };

struct SaaConfig {
  int samples = 100;                 // M perturbations z_1..z_M shared by all examples
  std::uint64_t seed = 0;            // draws come from Rng(seed, "saa")
  double perturbation_scale = 1.0;   // z_k = scale * N(0, I); 0 removes the perturbation
  double gradient_tolerance = 1e-6;  // stop when |g| <= tol * max(1, |g_0|)
  int max_iterations = 500;
  int memory = 10;
  Optimizer optimizer = Optimizer::kLbfgs;
  bool negate = true;  // hand -theta* to the minimizing heuristics
  FeatureScaling scaling = FeatureScaling::kRaw;  // applied to the example features; recorded in the model
  int threads = 1;
};

/// Sampled objective with the Omega constant omitted:
///   value = 1/N sum_i [ 1/M sum_k max_s <theta + z_k, phi(s; x_i)> - <theta, phi(y_i; x_i)> ]
struct LossReport {
  double value = 0.0;
  Eigen::VectorXd subgradient;
  std::vector<double> per_example;
};

/// Evaluates the SAA objective for a fixed example set and fixed draws.
/// Sums run over examples (outer) then samples (inner) in ascending order, and
/// per-example terms are reduced sequentially, so results are bit-identical
/// for any thread count.
class SaaObjective {
 public:
  /// Throws std::invalid_argument on an empty example set, M < 1 or
  /// inconsistent feature dimensions.
  SaaObjective(std::span<const TrainingExample> examples, const SaaConfig& config);

  int dim() const { return dim_; }
  const Eigen::MatrixXd& draws() const { return draws_; }
  LossReport evaluate(const Eigen::VectorXd& theta) const;

 private:
  std::span<const TrainingExample> examples_;
  std::vector<FeatureMatrix> features_;  // example features under config.scaling
  Eigen::MatrixXd draws_;  // M x d
  std::vector<Eigen::VectorXd> label_phi_;
  int dim_ = 0;
  int threads_ = 1;
};

/// One-shot evaluation; draws z from config.seed on every call.
LossReport saa_loss_and_subgradient(const Eigen::VectorXd& theta, std::span<const TrainingExample> examples,
                                    const SaaConfig& config);

struct IterationLog {
  int iteration = 0;
  double value = 0.0;
  double gradient_norm = 0.0;
  double step = 0.0;
  int evaluations = 0;
};

struct TrainResult {
  Model model;               // parameters for the heuristics (sign convention applied)
  Eigen::VectorXd theta;     // raw minimizer of the SAA objective
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;    // gradient tolerance reached
  std::string stop_reason;
  std::vector<IterationLog> log;
};

using IterationCallback = std::function<void(const IterationLog&)>;

/// Minimizes the SAA objective from theta = 0. L-BFGS uses a weak Wolfe line
/// search (sufficient decrease plus curvature, by bracketing and bisection);
/// the subgradient method uses normalized steps of size 1/sqrt(k) and keeps
/// the best iterate. Throws std::invalid_argument on an empty example set and
/// std::runtime_error if the objective becomes non-finite.
TrainResult train(std::span<const TrainingExample> examples, const SaaConfig& config,
                  const IterationCallback& on_iteration = {});

enum class Labeler { kExact, kHeuristic };

struct TrainingSetConfig {
  std::vector<int> sizes;
  std::vector<double> rhos{std::begin(kRhoGrid), std::end(kRhoGrid)};
  int per_cell = 1;
  std::uint64_t seed = 0;
  Labeler labeler = Labeler::kExact;
  int exact_max_jobs = 15;
  /// Used by the heuristic labeler (imlh and itmlh with m = 20 on this model).
  const Model* label_model = nullptr;
  int threads = 1;
};

/// Seed of the i-th instance of cell (n, rho index) for a training-set seed.
std::uint64_t training_instance_seed(std::uint64_t seed, int n, int rho_index, int i);

/// Generates per_cell instances for every (size, rho) pair and labels them.
/// The exact labeler uses bnb_solve; the heuristic labeler keeps the best of
/// SPT + ls_repair + rdi and, when label_model is set, imlh and itmlh.
/// Throws std::invalid_argument if the exact labeler is asked for sizes above
/// exact_max_jobs.
std::vector<TrainingExample> build_training_set(const TrainingSetConfig& config);

/// Directory layout: ex_00000.txt, ex_00001.txt, ... instance files and
/// labels.txt holding one "objective; order" line per example (1-based jobs).
void save_training_set(std::span<const TrainingExample> examples, const std::filesystem::path& dir);
std::vector<TrainingExample> load_training_set(const std::filesystem::path& dir);

}  // namespace mlsched
