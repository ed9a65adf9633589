#include <doctest.h>

#include <filesystem>

#include "mlsched/exact.hpp"
#include "mlsched/learn.hpp"
#include "support.hpp"

using namespace mlsched;

namespace {

// n = 2, d = 1 example with phi = (1, 2).
TrainingExample tiny_example(Order label) {
  Instance inst({{1, 0}, {2, 0}});
  FeatureMatrix f(2, 1);
  f << 1, 2;
  const Time objective = sequence_objective(inst, label);
  return {std::move(inst), std::move(label), objective, std::move(f), false};
}

SaaConfig unperturbed() {
  SaaConfig c;
  c.samples = 1;
  c.perturbation_scale = 0.0;
  return c;
}

Eigen::VectorXd vec1(double v) {
  Eigen::VectorXd x(1);
  x << v;
  return x;
}

}  // namespace

TEST_CASE("phi_of_schedule") {
  FeatureMatrix f(2, 1);
  f << 1, 2;
  CHECK(phi_of_schedule(f, Order{0, 1})(0) == 4);
  CHECK(phi_of_schedule(f, Order{1, 0})(0) == 5);
  FeatureMatrix one(1, 3);
  one << 1, 2, 3;
  CHECK(phi_of_schedule(one, Order{0}) == one.row(0).transpose());
  CHECK_THROWS(phi_of_schedule(f, Order{0, 0}));

  FeatureMatrix inc(5, 1);
  inc << 1, 2, 3, 4, 5;
  std::vector<double> values;
  Order perm{0, 1, 2, 3, 4};
  do values.push_back(phi_of_schedule(inc, perm)(0));
  while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(phi_of_schedule(inc, Order{0, 1, 2, 3, 4})(0) == *std::ranges::min_element(values));
  CHECK(phi_of_schedule(inc, Order{4, 3, 2, 1, 0})(0) == *std::ranges::max_element(values));
}

TEST_CASE("saa loss examples") {
  const std::vector<TrainingExample> a{tiny_example(Order{0, 1})};
  const LossReport la = saa_loss_and_subgradient(vec1(1.0), a, unperturbed());
  CHECK(la.value == doctest::Approx(1.0));
  CHECK(la.subgradient(0) == doctest::Approx(1.0));

  const std::vector<TrainingExample> b{tiny_example(Order{1, 0})};
  const LossReport lb = saa_loss_and_subgradient(vec1(1.0), b, unperturbed());
  CHECK(lb.value == doctest::Approx(0.0));
  CHECK(lb.subgradient(0) == doctest::Approx(0.0));
  CHECK(lb.per_example.size() == 1);
}

TEST_CASE("argmax by sorting equals enumeration") {
  Rng rng(23, "argmax");
  for (int c = 0; c < 300; ++c) {
    const int n = static_cast<int>(rng.uniform_int(1, 7));
    FeatureMatrix f(n, 4);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < 4; ++k) f(j, k) = rng.normal();
    Eigen::VectorXd w(4);
    for (auto& v : w) v = rng.normal();
    Order perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = -1e300;
    do best = std::max(best, w.dot(phi_of_schedule(f, perm)));
    while (std::next_permutation(perm.begin(), perm.end()));
    REQUIRE(w.dot(phi_of_schedule(f, argmax_schedule(f, w))) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("saa objective is convex with valid subgradients") {
  Rng rng(24, "saa-convex");
  std::vector<TrainingExample> ex;
  for (int i = 0; i < 6; ++i) {
    Instance inst = testing::random_instance(rng, 2, 8);
    Order label = testing::random_order(rng, inst.size());
    ex.push_back(make_example(std::move(inst), std::move(label), false));
  }
  SaaConfig cfg;
  cfg.samples = 7;
  cfg.seed = 9;
  const SaaObjective obj(ex, cfg);
  auto draw = [&] {
    Eigen::VectorXd v(27);
    for (auto& x : v) x = 2 * rng.normal();
    return v;
  };
  for (int probe = 0; probe < 100; ++probe) {
    const Eigen::VectorXd a = draw(), b = draw(), u = draw();
    const double lambda = rng.uniform01();
    REQUIRE(obj.evaluate(lambda * a + (1 - lambda) * b).value <=
            lambda * obj.evaluate(a).value + (1 - lambda) * obj.evaluate(b).value + 1e-9);
    const LossReport at = obj.evaluate(a);
    for (double h : {1e-3, -1e-3, 1e-2, -1e-2})
      REQUIRE(obj.evaluate(a + h * u).value >= at.value + h * at.subgradient.dot(u) - 1e-9);
  }
  // Central differences at generic points.
  for (int probe = 0; probe < 20; ++probe) {
    const Eigen::VectorXd t = draw();
    const Eigen::VectorXd g = obj.evaluate(t).subgradient;
    for (int k = 0; k < 27; ++k) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(27);
      e(k) = 1e-7;
      const double fd = (obj.evaluate(t + e).value - obj.evaluate(t - e).value) / 2e-7;
      REQUIRE(std::abs(fd - g(k)) <= 1e-5 * std::max(1.0, g.norm()));
    }
  }
  CHECK_THROWS(obj.evaluate(Eigen::VectorXd::Zero(3)));
}

TEST_CASE("evaluation is identical across thread counts") {
  Rng rng(25, "saa-threads");
  std::vector<TrainingExample> ex;
  for (int i = 0; i < 20; ++i) {
    Instance inst = testing::random_instance(rng, 3, 12);
    Order label = testing::random_order(rng, inst.size());
    ex.push_back(make_example(std::move(inst), std::move(label), false));
  }
  SaaConfig one, four;
  four.threads = 4;
  Eigen::VectorXd t(27);
  for (auto& v : t) v = rng.normal();
  const LossReport a = SaaObjective(ex, one).evaluate(t), b = SaaObjective(ex, four).evaluate(t);
  CHECK(a.value == b.value);
  CHECK(a.subgradient == b.subgradient);
}

TEST_CASE("train reaches zero when labels are attainable") {
  Rng rng(26, "train-zero");
  Eigen::VectorXd theta0(27);
  for (auto& v : theta0) v = rng.normal();
  std::vector<TrainingExample> ex;
  for (int i = 0; i < 10; ++i) {
    Instance inst = testing::random_instance(rng, 3, 10);
    const FeatureMatrix f = compute_features(inst);
    Order label = argmax_schedule(f, theta0);
    ex.push_back(make_example(std::move(inst), std::move(label), false));
  }
  const TrainResult r = train(ex, unperturbed());
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.model.theta() == -r.theta);
}

TEST_CASE("train on the two-job example decreases monotonically") {
  const std::vector<TrainingExample> ex{tiny_example(Order{1, 0})};
  SaaConfig cfg;
  cfg.samples = 20;
  cfg.seed = 4;
  std::vector<double> values;
  const TrainResult r = train(ex, cfg, [&](const IterationLog& log) { values.push_back(log.value); });
  REQUIRE(!values.empty());
  for (std::size_t i = 1; i < values.size(); ++i) CHECK(values[i] <= values[i - 1]);
  CHECK(r.value <= values.front());
  CHECK(r.theta(0) > 0.0);
  // Brute-force landscape: the loss is non-increasing in theta here and
  // flattens once theta exceeds every sampled |z|.
  const SaaObjective obj(ex, cfg);
  double prev = obj.evaluate(vec1(-5)).value;
  for (double t = -4.9; t <= 20; t += 0.1) {
    const double v = obj.evaluate(vec1(t)).value;
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
  CHECK(r.value == doctest::Approx(obj.evaluate(vec1(20)).value).epsilon(1e-6));
}

TEST_CASE("subgradient optimizer also decreases the loss") {
  const std::vector<TrainingExample> ex{tiny_example(Order{1, 0})};
  SaaConfig cfg;
  cfg.samples = 10;
  cfg.optimizer = Optimizer::kSubgradient;
  cfg.max_iterations = 200;
  const TrainResult r = train(ex, cfg);
  CHECK(r.value < saa_loss_and_subgradient(vec1(0), ex, cfg).value);
}

TEST_CASE("build_training_set") {
  TrainingSetConfig tc;
  tc.sizes = {6, 8};
  tc.per_cell = 5;
  tc.seed = 3;
  const auto ex = build_training_set(tc);
  CHECK(ex.size() == 100);
  for (const auto& e : ex) {
    REQUIRE(evaluate_schedule(e.instance, e.label_order).objective == e.label_objective);
    REQUIRE(e.label_optimal);
    REQUIRE(e.label_objective == brute_force(e.instance).objective);
  }
  const auto again = build_training_set(tc);
  CHECK(again[17].label_order == ex[17].label_order);

  tc.sizes = {16};
  CHECK_THROWS_AS(build_training_set(tc), std::invalid_argument);

  tc.sizes = {20};
  tc.per_cell = 1;
  tc.labeler = Labeler::kHeuristic;
  const auto heur = build_training_set(tc);
  CHECK(heur.size() == 10);
  CHECK_FALSE(heur[0].label_optimal);
}

TEST_CASE("exact labels on I1") {
  const TrainingExample e = make_example(testing::instance_i1(), bnb_solve(testing::instance_i1()).schedule.order, true);
  CHECK(e.label_order == Order{0, 1, 2});
  CHECK(e.label_objective == 14);
}

TEST_CASE("training set persistence") {
  TrainingSetConfig tc;
  tc.sizes = {5};
  tc.rhos = {0.4, 2.0};
  tc.per_cell = 3;
  const auto ex = build_training_set(tc);
  const auto dir = std::filesystem::temp_directory_path() / "mlsched_trainset_test";
  std::filesystem::remove_all(dir);
  save_training_set(ex, dir);
  const auto back = load_training_set(dir);
  REQUIRE(back.size() == ex.size());
  for (std::size_t i = 0; i < ex.size(); ++i) {
    CHECK(back[i].instance == ex[i].instance);
    CHECK(back[i].label_order == ex[i].label_order);
    CHECK(back[i].label_objective == ex[i].label_objective);
    CHECK(back[i].label_optimal == ex[i].label_optimal);
  }
  std::filesystem::remove_all(dir);
}
