#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mlsched/features.hpp"

namespace mlsched {

/// Linear encoder parameters. sigma holds per-feature scale metadata; it is
/// stored and round-tripped but does not enter predictions. scaling names the
/// feature convention theta was fitted on.
class Model {
 public:
  Model() = default;
  /// sigma defaults to all ones. Throws std::invalid_argument on non-finite
  /// theta, non-positive sigma or a length mismatch.
  explicit Model(Eigen::VectorXd theta);
  Model(Eigen::VectorXd theta, Eigen::VectorXd sigma, FeatureScaling scaling = FeatureScaling::kRaw);

  static Model zeros(int d) { return Model(Eigen::VectorXd::Zero(d)); }
  /// Unit vector on the 0-based feature column k.
  static Model unit(int d, int k);

  int dim() const { return static_cast<int>(theta_.size()); }
  const Eigen::VectorXd& theta() const { return theta_; }
  const Eigen::VectorXd& sigma() const { return sigma_; }
  FeatureScaling scaling() const { return scaling_; }
  /// Same sigma and scaling with another theta.
  Model with_theta(Eigen::VectorXd theta) const { return Model(std::move(theta), sigma_, scaling_); }

  friend bool operator==(const Model& a, const Model& b) {
    return a.theta_ == b.theta_ && a.sigma_ == b.sigma_ && a.scaling_ == b.scaling_;
  }

 private:
  Eigen::VectorXd theta_;
  Eigen::VectorXd sigma_;
  FeatureScaling scaling_ = FeatureScaling::kRaw;
};

/// Surrogate processing times: priorities_j = <theta, features.row(j)>.
/// Throws std::invalid_argument if the dimensions differ.
std::vector<double> predict_priorities(const Model& model, const FeatureMatrix& features);

/// Features of the instance under the model's scaling convention.
FeatureMatrix model_features(const Model& model, const Instance& instance);

/// m perturbed copies theta + scale * z_k with z_k ~ N(0, I_d), all drawn
/// up-front from Rng(seed, "perturb"). scale = 0 yields exact copies; sigma
/// is carried over unchanged.
std::vector<Model> perturb_model(const Model& model, int m, std::uint64_t seed, double scale = 1.0);

/// The m x d matrix of standard normal draws used by perturb_model.
Eigen::MatrixXd perturbation_draws(int m, int d, std::uint64_t seed);

// Text model format: line 1 holds d and optionally the feature scaling
// ("raw" or "column-sum", default raw), then "theta_k sigma_k" per line
// (sigma_k optional, default 1.0).
Model parse_model(const std::string& text);
std::string format_model(const Model& model);
Model read_model(const std::filesystem::path& path);
void write_model(const Model& model, const std::filesystem::path& path);

}  // namespace mlsched
