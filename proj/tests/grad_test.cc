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

namespace {

// Largest |estimate - target| / SE over all components (0 if equal).
double max_z(const sg::GradientEstimate& est, const Eigen::MatrixXd& target) {
  double z = 0.0;
  for (Eigen::Index i = 0; i < target.rows(); ++i) {
    for (Eigen::Index j = 0; j < target.cols(); ++j) {
      const double diff = std::abs(est.estimate(i, j) - target(i, j));
      if (diff <= 1e-12) continue;
      z = std::max(z, est.std_error(i, j) > 0 ? diff / est.std_error(i, j)
                                               : INFINITY);
    }
  }
  return z;
}

sg::EstimatorConfig config(int samples, sg::BaselineMode mode,
                           uint64_t seed) {
  sg::EstimatorConfig cfg;
  cfg.samples = samples;
  cfg.baseline = mode;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("baseline names") {
  CHECK(sg::parse_baseline("none") == sg::BaselineMode::kNone);
  CHECK(sg::parse_baseline("running-mean") == sg::BaselineMode::kRunningMean);
  CHECK(sg::to_string(sg::BaselineMode::kRunningMean) == "running-mean");
  CHECK_THROWS_AS(sg::parse_baseline("median"), sg::ConfigError);
}

TEST_CASE("running baseline is a strict prefix mean") {
  // Q = (1, 3, 5), unit scores: terms are 1 - 0, 3 - 1, 5 - 2.
  const std::vector<Eigen::VectorXd> q = {Eigen::VectorXd::Constant(1, 1.0),
                                          Eigen::VectorXd::Constant(1, 3.0),
                                          Eigen::VectorXd::Constant(1, 5.0)};
  const std::vector<Eigen::VectorXd> score(3, Eigen::VectorXd::Ones(1));
  const auto est = sg::combine_score_function(
      q, score, sg::BaselineMode::kRunningMean, nullptr);
  CHECK(est.estimate(0, 0) == doctest::Approx((1.0 + 2.0 + 3.0) / 3));
  const auto plain =
      sg::combine_score_function(q, score, sg::BaselineMode::kNone, nullptr);
  CHECK(plain.estimate(0, 0) == doctest::Approx(3.0));
  CHECK(plain.std_error(0, 0) == doctest::Approx(2.0 / std::sqrt(3.0)));

  // A shared baseline carries over between calls.
  sg::RunningBaseline shared(1);
  sg::combine_score_function(q, score, sg::BaselineMode::kRunningMean, &shared);
  CHECK(shared.count() == 3);
  CHECK(shared.value()[0] == doctest::Approx(3.0));
}

TEST_CASE("constant quantity has a zero-mean estimator") {
  const sg::Instance inst = sg::sensitivity_example();
  const sg::EntropyRegularizer reg(0.2);
  const auto q = sg::Quantity::scalar([](std::span<const sg::Element>) {
    return 2.5;
  });
  const auto est = sg::estimate_gradient(
      q, *inst.objective, *inst.constraint, reg, inst.theta,
      config(100000, sg::BaselineMode::kNone, 1));
  CHECK(max_z(est, Eigen::MatrixXd::Zero(1, 9)) <= 3.0);
  CHECK(max_abs(sg::exact_gradient(q, *inst.objective, *inst.constraint, reg,
                                   inst.theta)) <= 1e-10);
}

TEST_CASE("estimates agree with the exact gradient on the example") {
  const sg::Instance inst = sg::sensitivity_example();
  const sg::EntropyRegularizer reg(0.2);
  const auto f = sg::Quantity::objective_value(*inst.objective, inst.theta);
  const Eigen::MatrixXd exact_f = sg::exact_gradient(
      f, *inst.objective, *inst.constraint, reg, inst.theta);
  const Eigen::MatrixXd exact_jac =
      sg::exact_gradient(sg::Quantity::indicator(3), *inst.objective,
                         *inst.constraint, reg, inst.theta);
  for (auto mode : {sg::BaselineMode::kNone, sg::BaselineMode::kRunningMean}) {
    const auto est = sg::estimate_gradient(f, *inst.objective,
                                           *inst.constraint, reg, inst.theta,
                                           config(100000, mode, 2));
    CHECK(max_z(est, exact_f) <= 3.0);
    const auto jac = sg::sensitivity_jacobian(*inst.objective,
                                              *inst.constraint, reg,
                                              inst.theta, config(100000, mode, 3));
    CHECK(max_z(jac, exact_jac) <= 3.0);
  }
}

TEST_CASE("sensitivity columns sum to zero under cardinality") {
  const sg::Instance inst = sg::sensitivity_example();
  const sg::EntropyRegularizer reg(0.2);
  const Eigen::MatrixXd exact =
      sg::exact_gradient(sg::Quantity::indicator(3), *inst.objective,
                         *inst.constraint, reg, inst.theta);
  CHECK(exact.colwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(exact(1, 5) > 0.0);
  CHECK(exact(2, 5) < 0.0);

  // Column sums of the estimate: per-sample terms (|S| - beta) score sum to
  // zero as well, so check against a normal bound from the rows' SEs.
  const auto est = sg::sensitivity_jacobian(
      *inst.objective, *inst.constraint, reg, inst.theta,
      config(20000, sg::BaselineMode::kNone, 4));
  for (Eigen::Index j = 0; j < 9; ++j) {
    CHECK(std::abs(est.estimate.col(j).sum()) <=
          3.0 * est.std_error.col(j).sum() + 1e-12);
  }
}

TEST_CASE("running-mean baseline lowers variance over repetitions") {
  const sg::Instance inst = sg::sensitivity_example();
  const sg::EntropyRegularizer reg(0.2);
  const auto f = sg::Quantity::objective_value(*inst.objective, inst.theta);
  double var[2] = {0.0, 0.0};
  int slot = 0;
  for (auto mode : {sg::BaselineMode::kNone, sg::BaselineMode::kRunningMean}) {
    std::vector<Eigen::MatrixXd> runs;
    for (int rep = 0; rep < 30; ++rep) {
      runs.push_back(sg::estimate_gradient(f, *inst.objective,
                                           *inst.constraint, reg, inst.theta,
                                           config(100, mode, 500 + rep))
                         .estimate);
    }
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(1, 9);
    for (const auto& r : runs) mean += r / 30.0;
    for (const auto& r : runs) var[slot] += (r - mean).squaredNorm() / 29.0;
    ++slot;
  }
  CHECK(var[1] < var[0]);
}

TEST_CASE("standard errors shrink with the square root of N") {
  const sg::Instance inst = sg::sensitivity_example();
  const sg::EntropyRegularizer reg(0.2);
  const auto f = sg::Quantity::objective_value(*inst.objective, inst.theta);
  double ratio = 0.0;
  for (int rep = 0; rep < 30; ++rep) {
    const auto small = sg::estimate_gradient(
        f, *inst.objective, *inst.constraint, reg, inst.theta,
        config(500, sg::BaselineMode::kNone, 700 + rep));
    const auto large = sg::estimate_gradient(
        f, *inst.objective, *inst.constraint, reg, inst.theta,
        config(2000, sg::BaselineMode::kNone, 900 + rep));
    ratio += small.std_error.mean() / large.std_error.mean() / 30.0;
  }
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("fixed seed gives bit-identical estimates across thread counts") {
  const sg::Instance inst = sg::sensitivity_example();
  const sg::QuadraticRegularizer reg(0.3);
  auto cfg = config(500, sg::BaselineMode::kRunningMean, 8);
  cfg.threads = 1;
  const auto a = sg::sensitivity_jacobian(*inst.objective, *inst.constraint,
                                          reg, inst.theta, cfg);
  cfg.threads = 4;
  const auto b = sg::sensitivity_jacobian(*inst.objective, *inst.constraint,
                                          reg, inst.theta, cfg);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("exact mixture with a constant baseline is unbiased") {
  sg::RngStream rng(51);
  for (int draw = 0; draw < 20; ++draw) {
    const int n = 2 + static_cast<int>(rng.uniform_index(4));
    sg::RandomProblem p = sg::random_cardinality_problem(
        static_cast<sg::ObjectiveKind>(draw % 3), n,
        1 + static_cast<int>(rng.uniform_index(std::min(n, 3))), rng);
    const sg::EntropyRegularizer reg(0.4);
    const auto f = sg::Quantity::objective_value(*p.objective, p.theta);
    const auto dist = sg::enumerate_output_distribution(
        *p.objective, *p.constraint, reg, p.theta);
    const double beta = rng.uniform(-2.0, 2.0);
    Eigen::VectorXd mixture = Eigen::VectorXd::Zero(p.objective->param_dim());
    for (const auto& path : dist.paths) {
      mixture += path.probability *
                 (f.evaluate(path.trace.as_set())[0] - beta) *
                 sg::grad_log_prob(path.trace, *p.objective, reg, p.theta);
    }
    const Eigen::VectorXd exact =
        sg::exact_gradient(f, dist, *p.objective, reg, p.theta).row(0);
    CHECK(max_abs(mixture - exact) <= 1e-10);
  }
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hits(1000, 0);
  sg::parallel_for(1000, 8, [&](int i) { ++hits[i]; });
  for (int h : hits) CHECK(h == 1);
}
