// Copyright 2026 The smoothgreedy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "smoothgreedy/errors.h"
#include "smoothgreedy/grad.h"
#include "smoothgreedy/greedy.h"
#include "smoothgreedy/instance_io.h"
#include "smoothgreedy/oracle.h"
#include "smoothgreedy/verify.h"
#include "test_util.h"

namespace sg = smoothgreedy;
using sg::testing::max_abs;
using sg::testing::rel_err;

namespace {

// Monte Carlo mean of f and its standard error.
std::pair<double, double> mc_mean(const sg::Instance& inst,
                                  const sg::Regularizer& reg, int runs,
                                  int sample_size = 0) {
  double mean = 0.0, m2 = 0.0;
  const sg::RngStream base(99);
  for (int j = 0; j < runs; ++j) {
    sg::RngStream rng = base.derive(j);
    const auto trace =
        sample_size > 0
            ? sg::stochastic_smoothed_greedy_with_size(
                  *inst.objective, *inst.constraint, reg, inst.theta,
                  sample_size, rng)
            : sg::smoothed_greedy(*inst.objective, *inst.constraint, reg,
                                  inst.theta, rng);
    const double x = inst.objective->eval(trace.as_set(), inst.theta);
    const double d = x - mean;
    mean += d / (j + 1);
    m2 += d * (x - mean);
  }
  return {mean, std::sqrt(m2 / (runs - 1) / runs)};
}

}  // namespace

TEST_CASE("inverse-CDF sampling") {
  const Eigen::VectorXd p = (Eigen::VectorXd(3) << 0.2, 0.0, 0.8).finished();
  CHECK(sg::sample_index(p, 0.0) == 0);
  CHECK(sg::sample_index(p, 0.1999) == 0);
  CHECK(sg::sample_index(p, 0.2) == 2);
  CHECK(sg::sample_index(p, 0.9999999) == 2);
}

TEST_CASE("tiny temperature reproduces greedy on the example") {
  const sg::Instance inst = sg::sensitivity_example();
  const sg::EntropyRegularizer reg(1e-6);
  const sg::RngStream base(5);
  int hits = 0;
  for (int j = 0; j < 10000; ++j) {
    sg::RngStream rng = base.derive(j);
    const auto trace = sg::smoothed_greedy(*inst.objective, *inst.constraint,
                                           reg, inst.theta, rng);
    hits += trace.as_set() == sg::ElementSet{0, 1};
  }
  CHECK(hits >= 9990);
  CHECK(sg::deterministic_greedy(*inst.objective, *inst.constraint,
                                 inst.theta) == sg::ElementSet{0, 1});
}

TEST_CASE("trace bookkeeping") {
  const sg::Instance inst = sg::sensitivity_example();
  const sg::EntropyRegularizer reg(0.2);
  sg::RngStream rng(7);
  const auto trace = sg::smoothed_greedy(*inst.objective, *inst.constraint,
                                         reg, inst.theta, rng);
  REQUIRE(trace.sequence.size() == 2);
  REQUIRE(trace.steps.size() == 2);
  CHECK(trace.steps[0].candidates == std::vector<sg::Element>{0, 1, 2});
  CHECK(trace.steps[1].candidates.size() == 2);
  double log_prob = 0.0;
  for (const auto& step : trace.steps) {
    log_prob += std::log(step.chosen_probability());
  }
  CHECK(trace.log_prob == doctest::Approx(log_prob).epsilon(1e-12));
  CHECK(trace.delta == doctest::Approx(0.2 * std::log(3.0)));
  CHECK(trace.delta_k == doctest::Approx(2 * 0.2 * std::log(3.0)));
  CHECK(trace.log_prob ==
        doctest::Approx(sg::replay_log_prob(trace, *inst.objective, reg,
                                            inst.theta)).epsilon(1e-14));
}

TEST_CASE("identical seeds give identical traces") {
  const sg::Instance inst = sg::sensitivity_example();
  const sg::QuadraticRegularizer reg(0.3);
  for (int j = 0; j < 20; ++j) {
    sg::RngStream a = sg::RngStream(17).derive(j);
    sg::RngStream b = sg::RngStream(17).derive(j);
    const auto ta = sg::smoothed_greedy(*inst.objective, *inst.constraint,
                                        reg, inst.theta, a);
    const auto tb = sg::smoothed_greedy(*inst.objective, *inst.constraint,
                                        reg, inst.theta, b);
    CHECK(ta.sequence == tb.sequence);
    CHECK(ta.log_prob == tb.log_prob);
  }
}

TEST_CASE("symmetric candidates have zero score") {
  // Every element covers the same item: equal gains and equal gain
  // gradients at every step.
  const sg::WeightedCoverage f(2, {{0}, {0}, {0}}, sg::ParamVector());
  const sg::CardinalityConstraint c(3, 2);
  const sg::ParamVector theta = (sg::ParamVector(2) << 0.7, 0.2).finished();
  for (const char* kind : {"entropy", "quadratic"}) {
    const auto reg = sg::make_regularizer(kind, 0.5);
    sg::RngStream rng(3);
    const auto trace = sg::smoothed_greedy(f, c, *reg, theta, rng);
    CHECK(trace.sequence.size() == 2);
    CHECK(max_abs(sg::grad_log_prob(trace, f, *reg, theta)) < 1e-12);
  }
}

TEST_CASE("singleton candidates give a probability-one chain") {
  // Feasible sets are the prefixes {0, ..., j}: one candidate per step.
  const sg::BipartiteInfluence f(3, 2);
  const sg::ExtensibleSystem c(
      3,
      [](std::span<const sg::Element> set) {
        for (std::size_t i = 0; i < set.size(); ++i) {
          if (set[i] != static_cast<sg::Element>(i)) return false;
        }
        return true;
      },
      1);
  const sg::ParamVector theta = (sg::ParamVector(6) << 0.1, 0.5, 0.3, 0.9,
                                 0.2, 0.4).finished();
  const sg::EntropyRegularizer reg(0.5);
  sg::RngStream rng(3);
  const auto trace = sg::smoothed_greedy(f, c, reg, theta, rng);
  CHECK(trace.sequence.size() == 3);
  CHECK(trace.log_prob == 0.0);
  CHECK(max_abs(sg::grad_log_prob(trace, f, reg, theta)) == 0.0);
}

TEST_CASE("Monte Carlo mean agrees with the exact expectation") {
  const sg::Instance inst = sg::sensitivity_example();
  const sg::EntropyRegularizer reg(0.2);
  const auto dist = sg::enumerate_output_distribution(
      *inst.objective, *inst.constraint, reg, inst.theta);
  CHECK(dist.paths.size() == 6);
  CHECK(dist.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  const double exact = sg::exact_expectation(
      sg::Quantity::objective_value(*inst.objective, inst.theta), dist)[0];
  const auto [mean, se] = mc_mean(inst, reg, 100000);
  CHECK(std::abs(mean - exact) <= 3 * se);
}

TEST_CASE("stochastic variant sample size and Monte Carlo agreement") {
  CHECK(sg::stochastic_sample_size(100, 10, std::exp(-1.0)) == 10);
  // The formula is reported uncapped; each step draws at most n - |S|.
  CHECK(sg::stochastic_sample_size(5, 2, 0.01) == 12);

  sg::RngStream rng(41);
  sg::RandomProblem p =
      sg::random_cardinality_problem(sg::ObjectiveKind::kInfluence, 5, 2, rng);
  sg::Instance inst{std::move(p.objective), std::move(p.constraint), p.theta};
  const sg::EntropyRegularizer reg(0.2);
  const auto dist = sg::enumerate_stochastic_distribution(
      *inst.objective, *inst.constraint, reg, inst.theta, 3);
  CHECK(dist.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  const double exact = sg::exact_expectation(
      sg::Quantity::objective_value(*inst.objective, inst.theta), dist)[0];
  const auto [mean, se] = mc_mean(inst, reg, 100000, 3);
  CHECK(std::abs(mean - exact) <= 3 * se);
}

TEST_CASE("stochastic variant requires a cardinality constraint") {
  const sg::BipartiteInfluence f(2, 1);
  const sg::PartitionMatroid c({0, 1}, {1, 1});
  const sg::EntropyRegularizer reg(0.2);
  sg::RngStream rng(1);
  CHECK_THROWS_AS(sg::stochastic_smoothed_greedy(
                      f, c, reg, sg::ParamVector::Constant(2, 0.5), 0.1, rng),
                  sg::ConfigError);
}

TEST_CASE("stochastic traces always take K steps") {
  sg::RngStream rng(42);
  for (int draw = 0; draw < 50; ++draw) {
    const int n = 3 + static_cast<int>(rng.uniform_index(10));
    const int k = 1 + static_cast<int>(rng.uniform_index(n));
    sg::RandomProblem p =
        sg::random_cardinality_problem(sg::ObjectiveKind::kCoverage, n, k, rng);
    const auto t = sg::stochastic_smoothed_greedy(
        *p.objective, *p.constraint, sg::QuadraticRegularizer(0.3), p.theta,
        0.2, rng);
    CHECK(t.sequence.size() == static_cast<std::size_t>(k));
    for (const auto& step : t.steps) {
      CHECK(std::is_sorted(step.candidates.begin(), step.candidates.end()));
    }
  }
}

TEST_CASE("expected score vanishes") {
  const sg::Instance inst = sg::sensitivity_example();
  for (const char* kind : {"entropy", "quadratic"}) {
    const auto reg = sg::make_regularizer(kind, 0.2);
    const auto dist = sg::enumerate_output_distribution(
        *inst.objective, *inst.constraint, *reg, inst.theta);
    Eigen::VectorXd total = Eigen::VectorXd::Zero(9);
    for (const auto& path : dist.paths) {
      total += path.probability *
               sg::grad_log_prob(path.trace, *inst.objective, *reg, inst.theta);
    }
    CHECK(max_abs(total) <= 1e-10);
  }
}

TEST_CASE("score matches finite differences along a fixed path") {
  sg::RngStream rng(43);
  int probes = 0;
  while (probes < 60) {
    const int n = 2 + static_cast<int>(rng.uniform_index(5));
    sg::RandomProblem p = sg::random_cardinality_problem(
        static_cast<sg::ObjectiveKind>(probes % 3), n,
        1 + static_cast<int>(rng.uniform_index(n)), rng);
    const auto reg =
        sg::make_regularizer(probes % 2 ? "quadratic" : "entropy", 0.3);
    const auto trace = sg::smoothed_greedy(*p.objective, *p.constraint, *reg,
                                           p.theta, rng);
    bool interior = true;
    for (const auto& step : trace.steps) {
      interior = interior && !step.solution.degenerate &&
                 sg::kink_distance(step.solution, 0.3) > 1e-3;
    }
    if (!interior) continue;
    ++probes;
    const Eigen::VectorXd fd = sg::finite_difference(
        [&](const Eigen::VectorXd& t) {
          return sg::replay_log_prob(trace, *p.objective, *reg, t);
        },
        p.theta, 1e-5);
    CHECK(rel_err(sg::grad_log_prob(trace, *p.objective, *reg, p.theta), fd,
                  1e-3) <= 1e-5);
  }
}

TEST_CASE("per-step expected gain is within delta of the best gain") {
  sg::RngStream rng(44);
  for (int draw = 0; draw < 40; ++draw) {
    const int n = 2 + static_cast<int>(rng.uniform_index(4));
    sg::RandomProblem p = sg::random_partition_problem(
        static_cast<sg::ObjectiveKind>(draw % 3), n, 3, rng);
    for (const char* kind : {"entropy", "quadratic"}) {
      const auto reg = sg::make_regularizer(kind, 0.5);
      const auto dist = sg::enumerate_output_distribution(
          *p.objective, *p.constraint, *reg, p.theta);
      for (const auto& path : dist.paths) {
        for (const auto& step : path.trace.steps) {
          CHECK(step.gains.dot(step.solution.p) >=
                step.gains.maxCoeff() -
                    reg->delta_bound(static_cast<int>(step.candidates.size())) -
                    1e-10);
        }
      }
    }
  }
}
