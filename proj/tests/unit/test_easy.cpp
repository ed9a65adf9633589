#include <doctest.h>

#include "mlsched/easy.hpp"
#include "mlsched/exact.hpp"
#include "support.hpp"

using namespace mlsched;
using testing::instance_i1;

TEST_CASE("spt_order examples") {
  CHECK(spt_order(std::vector<double>{3.0, 1.0, 2.0}) == Order{1, 2, 0});
  CHECK(spt_order(std::vector<double>{1.0, 1.0}) == Order{0, 1});
  CHECK(spt_order(std::vector<double>{-5.0, 2.0}) == Order{0, 1});
}

TEST_CASE("spt_order is invariant under shifts and positive scaling") {
  Rng rng(3, "spt-inv");
  for (int c = 0; c < 500; ++c) {
    const auto prio = testing::random_priorities(rng, static_cast<std::size_t>(rng.uniform_int(1, 40)));
    const Order base = spt_order(prio);
    const double shift = 10 * rng.normal(), scale = std::exp(3 * rng.normal());
    std::vector<double> shifted = prio, scaled = prio;
    for (auto& v : shifted) v += shift;
    for (auto& v : scaled) v *= scale;
    // Shifts can merge nearly equal values in floating point; compare objectives of the surrogate.
    CHECK(spt_order(scaled) == base);
    const Order s = spt_order(shifted);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(shifted[s[i - 1]] <= shifted[s[i]]);
  }
}

TEST_CASE("srpt_trace on I1") {
  const SrptTrace t = srpt_trace(instance_i1());
  CHECK(t.completions == std::vector<Time>{2, 4, 7});
  CHECK(t.objective == 13);
  CHECK(t.first_segment[2] == 1);
  CHECK(t.preemptions[2] == 1);
  CHECK(t.total_preemptions == 1);
  CHECK(t.interruptor_p[2] == 1);
  CHECK(t.rank == std::vector<int>{1, 2, 3});
}

TEST_CASE("srpt_trace degenerate cases") {
  const Instance flat({{5, 0}, {2, 0}, {9, 0}, {2, 0}});
  const SrptTrace t = srpt_trace(flat);
  CHECK(t.total_preemptions == 0);
  for (std::size_t j = 0; j < flat.size(); ++j) CHECK(t.first_segment[j] == flat.p(j));
  CHECK(t.rank == std::vector<int>{3, 1, 4, 2});
  CHECK(t.objective == evaluate_schedule(flat, sort_order(std::vector<Time>{5, 2, 9, 2})).objective);

  const SrptTrace single = srpt_trace(Instance({{5, 7}}));
  CHECK(single.completions == std::vector<Time>{12});
  CHECK(single.total_preemptions == 0);
}

TEST_CASE("srpt_trace invariants and agreement with a unit-step simulation") {
  Rng rng(4, "srpt-prop");
  for (int c = 0; c < 400; ++c) {
    const Instance inst = testing::random_instance(rng, 1, 25);
    const SrptTrace t = srpt_trace(inst);
    REQUIRE(t.objective == testing::unit_step_srpt(inst));
    int sum = 0;
    std::vector<int> seen(inst.size(), 0);
    for (std::size_t j = 0; j < inst.size(); ++j) {
      sum += t.preemptions[j];
      REQUIRE(t.first_segment[j] >= 0);
      REQUIRE(t.first_segment[j] <= inst.p(j));
      REQUIRE((t.first_segment[j] == inst.p(j)) == (t.preemptions[j] == 0));
      REQUIRE(t.rank[j] >= 1);
      REQUIRE(t.rank[j] <= inst.n());
      ++seen[t.rank[j] - 1];
    }
    REQUIRE(sum == t.total_preemptions);
    REQUIRE(std::ranges::all_of(seen, [](int v) { return v == 1; }));
  }
}

TEST_CASE("srpt is a lower bound and spt is optimal without release dates") {
  Rng rng(5, "srpt-bound");
  for (int c = 0; c < 300; ++c) {
    const Instance inst = testing::random_instance(rng, 1, 8);
    REQUIRE(srpt_trace(inst).objective <= testing::enumerate_optimum(inst));

    std::vector<Job> jobs(inst.jobs().begin(), inst.jobs().end());
    std::vector<Time> p;
    for (auto& j : jobs) {
      j.r = 0;
      p.push_back(j.p);
    }
    const Instance flat(jobs);
    REQUIRE(evaluate_schedule(flat, sort_order(p)).objective == testing::enumerate_optimum(flat));
  }
}

TEST_CASE("srpt_objective on a subset") {
  // Jobs 2 and 3 of I1 from t = 2: job 2 runs [3,4], job 3 runs [2,3] and [4,7].
  CHECK(srpt_objective(instance_i1(), std::vector<int>{1, 2}, 2) == 11);
  CHECK(srpt_objective(instance_i1(), std::vector<int>{0, 1, 2}, 0) == 13);
}
