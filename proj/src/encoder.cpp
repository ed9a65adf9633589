#include "mlsched/encoder.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "mlsched/random.hpp"
#include "text_util.hpp"

namespace mlsched {

Model::Model(Eigen::VectorXd theta) : Model(theta, Eigen::VectorXd::Ones(theta.size())) {}

Model::Model(Eigen::VectorXd theta, Eigen::VectorXd sigma, FeatureScaling scaling)
    : theta_(std::move(theta)), sigma_(std::move(sigma)), scaling_(scaling) {
  if (theta_.size() != sigma_.size()) throw std::invalid_argument("model: theta and sigma lengths differ");
  if (!theta_.allFinite()) throw std::invalid_argument("model: theta must be finite");
  for (Eigen::Index k = 0; k < sigma_.size(); ++k)
    if (!(sigma_[k] > 0.0) || !std::isfinite(sigma_[k]))
      throw std::invalid_argument(fmt::format("model: sigma_{} must be positive", k + 1));
}

Model Model::unit(int d, int k) {
  if (k < 0 || k >= d) throw std::invalid_argument("model: unit column out of range");
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
  theta[k] = 1.0;
  return Model(std::move(theta));
}

std::vector<double> predict_priorities(const Model& model, const FeatureMatrix& features) {
  if (features.cols() != model.dim())
    throw std::invalid_argument(
        fmt::format("model has {} parameters but features have {} columns", model.dim(), features.cols()));
  const Eigen::VectorXd scores = features * model.theta();
  return {scores.data(), scores.data() + scores.size()};
}

FeatureMatrix model_features(const Model& model, const Instance& instance) {
  return compute_features(instance, model.scaling());
}

Eigen::MatrixXd perturbation_draws(int m, int d, std::uint64_t seed) {
  Rng rng(seed, "perturb");
  Eigen::MatrixXd z(m, d);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < d; ++i) z(k, i) = rng.normal();
  return z;
}

std::vector<Model> perturb_model(const Model& model, int m, std::uint64_t seed, double scale) {
  if (m < 1) throw std::invalid_argument("perturb_model: m must be >= 1");
  const Eigen::MatrixXd z = perturbation_draws(m, model.dim(), seed);
  std::vector<Model> out;
  out.reserve(m);
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd theta = model.theta() + scale * z.row(k).transpose();
    out.push_back(model.with_theta(std::move(theta)));
  }
  return out;
}

Model parse_model(const std::string& text) {
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw std::invalid_argument("model file is empty");
  const auto header = detail::split_ws(lines[0].text);
  if (header.empty() || header.size() > 2)
    throw std::invalid_argument("model header must contain d and optionally the feature scaling");
  const auto d = detail::parse_int(header[0], lines[0].number);
  if (d < 1) throw std::invalid_argument("model header: d must be >= 1");
  if (lines.size() - 1 != static_cast<std::size_t>(d))
    throw std::invalid_argument(fmt::format("model declares d = {} but has {} parameter lines", d, lines.size() - 1));
  Eigen::VectorXd theta(d), sigma(d);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = detail::split_ws(lines[i].text);
    if (fields.empty() || fields.size() > 2)
      throw std::invalid_argument(fmt::format("line {}: expected \"theta [sigma]\"", lines[i].number));
    theta[i - 1] = detail::parse_double(fields[0], lines[i].number);
    sigma[i - 1] = fields.size() == 2 ? detail::parse_double(fields[1], lines[i].number) : 1.0;
  }
  const FeatureScaling scaling = header.size() == 2 ? parse_feature_scaling(header[1]) : FeatureScaling::kRaw;
  return Model(std::move(theta), std::move(sigma), scaling);
}

std::string format_model(const Model& model) {
  std::string out = model.scaling() == FeatureScaling::kRaw
                        ? fmt::format("{}\n", model.dim())
                        : fmt::format("{} {}\n", model.dim(), to_string(model.scaling()));
  for (int k = 0; k < model.dim(); ++k)
    out += detail::format_double(model.theta()[k]) + ' ' + detail::format_double(model.sigma()[k]) + '\n';
  return out;
}

Model read_model(const std::filesystem::path& path) { return parse_model(detail::read_file(path)); }

void write_model(const Model& model, const std::filesystem::path& path) {
  detail::write_file(path, format_model(model));
}

}  // namespace mlsched
