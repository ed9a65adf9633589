#include <doctest.h>

#include "mlsched/easy.hpp"
#include "mlsched/encoder.hpp"
#include "mlsched/features.hpp"
#include "support.hpp"

using namespace mlsched;
using testing::instance_i1;

TEST_CASE("predict_priorities examples") {
  const FeatureMatrix f = compute_features(instance_i1());
  const auto e10 = predict_priorities(Model::unit(27, 9), f);
  CHECK(spt_order(e10) == sort_order(std::vector<Time>{2, 1, 4}));

  const auto zero = predict_priorities(Model::zeros(27), f);
  CHECK(std::ranges::all_of(zero, [](double v) { return v == 0.0; }));
  CHECK(spt_order(zero) == Order{0, 1, 2});

  FeatureMatrix p(3, 1);
  p << 2, 1, 4;
  Eigen::VectorXd theta(1);
  theta << 2.0;
  CHECK(predict_priorities(Model(theta), p) == std::vector<double>{4, 2, 8});

  CHECK_THROWS(predict_priorities(Model::zeros(26), f));
}

TEST_CASE("predict_priorities is linear in theta") {
  Rng rng(11, "encoder-linear");
  for (int c = 0; c < 100; ++c) {
    const FeatureMatrix f = compute_features(testing::random_instance(rng, 1, 30));
    Eigen::VectorXd a(27), b(27);
    for (int k = 0; k < 27; ++k) {
      a(k) = rng.normal();
      b(k) = rng.normal();
    }
    const auto pa = predict_priorities(Model(a), f), pb = predict_priorities(Model(b), f);
    const auto pab = predict_priorities(Model(a + b), f);
    for (std::size_t j = 0; j < pa.size(); ++j) REQUIRE(pab[j] == doctest::Approx(pa[j] + pb[j]));
  }
}

TEST_CASE("model_features applies the model's scaling") {
  Rng rng(12, "encoder-scaling");
  const Instance inst = testing::random_instance(rng, 10, 10);
  const Model raw = Model::zeros(27);
  const Model cs(Eigen::VectorXd::Zero(27), Eigen::VectorXd::Ones(27), FeatureScaling::kColumnSum);
  CHECK(model_features(raw, inst) == compute_features(inst));
  CHECK(model_features(cs, inst) == compute_features(inst, FeatureScaling::kColumnSum));
}

TEST_CASE("perturb_model") {
  Eigen::VectorXd theta(27);
  for (int k = 0; k < 27; ++k) theta(k) = k;
  const Model m(theta);

  const auto forced = perturb_model(m, 1, 5, 0.0);
  REQUIRE(forced.size() == 1);
  CHECK(forced[0].theta() == theta);

  const auto a = perturb_model(m, 10, 77), b = perturb_model(m, 10, 77), c = perturb_model(m, 10, 78);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  const Eigen::MatrixXd z = perturbation_draws(10, 27, 77);
  for (int k = 0; k < 10; ++k) CHECK(a[k].theta() == theta + z.row(k).transpose());
}

TEST_CASE("perturbation sampler moments") {
  const Eigen::MatrixXd z = perturbation_draws(100000, 3, 2024);
  for (int k = 0; k < 3; ++k) {
    const double mean = z.col(k).mean();
    const double var = (z.col(k).array() - mean).square().mean();
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.02);
  }
}

TEST_CASE("joint scaling of theta and z leaves the order unchanged") {
  Rng rng(13, "encoder-scale-inv");
  for (int c = 0; c < 200; ++c) {
    const FeatureMatrix f = compute_features(testing::random_instance(rng, 2, 50));
    Eigen::VectorXd theta(27), z(27);
    for (int k = 0; k < 27; ++k) {
      theta(k) = rng.normal();
      z(k) = rng.normal();
    }
    const Order base = spt_order(predict_priorities(Model(theta + z), f));
    for (double eps : {1e-3, 0.1, 10.0, 1e3})
      REQUIRE(spt_order(predict_priorities(Model(eps * theta + eps * z), f)) == base);
  }
}
