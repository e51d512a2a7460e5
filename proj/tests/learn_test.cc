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
#include "smoothgreedy/greedy.h"
#include "smoothgreedy/learn.h"
#include "smoothgreedy/oracle.h"
#include "test_util.h"

namespace sg = smoothgreedy;
using sg::testing::max_abs;
using sg::testing::rel_err;

namespace {

sg::FeatureTensor random_features(int items, int targets, int dim,
                                  sg::RngStream& rng) {
  sg::FeatureTensor x;
  x.items = items;
  x.targets = targets;
  x.rows.resize(items * targets, dim);
  for (Eigen::Index i = 0; i < x.rows.size(); ++i) {
    x.rows.data()[i] = rng.uniform() < 0.4 ? 1.0 : 0.0;
  }
  return x;
}

// Model whose outputs sit inside (0, 1) for binary features.
sg::PredictiveModel interior_model(int dim, int hidden, sg::RngStream& rng) {
  sg::PredictiveModel m =
      sg::PredictiveModel::random_init(dim, hidden, rng, -0.3, 0.3);
  m.mutable_params().tail(1)[0] = 0.5;
  return m;
}

bool all_interior(const sg::PredictiveModel::Cache& cache) {
  const double pre_gap = cache.hidden_pre.cwiseAbs().minCoeff();
  const auto& out = cache.output_pre;
  return pre_gap > 1e-3 && out.minCoeff() > 1e-3 && out.maxCoeff() < 1 - 1e-3;
}

sg::CoverageInstance target() { return sg::make_leadership_coverage(5); }

double true_value(const sg::CoverageInstance& c, const sg::ElementSet& s) {
  return c.objective.eval(s, c.objective.default_weights());
}

}  // namespace

TEST_CASE("forward pass") {
  sg::RngStream rng(71);
  const sg::FeatureTensor x = random_features(3, 4, 5, rng);
  sg::PredictiveModel m(5, 6);
  CHECK(max_abs(m.forward(x)) == 0.0);

  // Only the output bias is set: pre-clip 1.7 clips to 1.
  m.mutable_params().tail(1)[0] = 1.7;
  sg::PredictiveModel::Cache cache;
  const auto theta = m.forward(x, &cache);
  CHECK(theta.minCoeff() == 1.0);
  CHECK(cache.output_pre[0] == doctest::Approx(1.7));

  sg::PredictiveModel wrong(4, 6);
  CHECK_THROWS_AS(wrong.forward(x), sg::ConfigError);
}

TEST_CASE("forward output is always a probability") {
  sg::RngStream rng(72);
  for (int probe = 0; probe < 50; ++probe) {
    const sg::FeatureTensor x = random_features(4, 3, 6, rng);
    const auto m = sg::PredictiveModel::random_init(6, 8, rng, -3.0, 3.0);
    const auto theta = m.forward(x);
    CHECK(theta.minCoeff() >= 0.0);
    CHECK(theta.maxCoeff() <= 1.0);
  }
}

TEST_CASE("backward pass") {
  sg::RngStream rng(73);
  const sg::FeatureTensor x = random_features(3, 4, 5, rng);
  const auto m = interior_model(5, 6, rng);
  sg::PredictiveModel::Cache cache;
  m.forward(x, &cache);
  CHECK(max_abs(m.backward(x, cache, Eigen::VectorXd::Zero(12))) == 0.0);

  // Saturated outputs pass no gradient.
  sg::PredictiveModel saturated(5, 6);
  saturated.mutable_params().tail(1)[0] = 1.7;
  saturated.forward(x, &cache);
  CHECK(max_abs(saturated.backward(x, cache, Eigen::VectorXd::Ones(12))) ==
        0.0);
}

TEST_CASE("backward matches finite differences at interior points") {
  sg::RngStream rng(74);
  int probes = 0;
  while (probes < 50) {
    const sg::FeatureTensor x = random_features(3, 3, 4, rng);
    const auto m = interior_model(4, 5, rng);
    sg::PredictiveModel::Cache cache;
    m.forward(x, &cache);
    if (!all_interior(cache)) continue;
    ++probes;
    Eigen::VectorXd upstream(9);
    for (int i = 0; i < 9; ++i) upstream[i] = rng.uniform(-1.0, 1.0);
    const Eigen::VectorXd fd = sg::finite_difference(
        [&](const Eigen::VectorXd& w) {
          sg::PredictiveModel probe = m;
          probe.mutable_params() = w;
          return upstream.dot(probe.forward(x));
        },
        m.params(), 1e-6);
    CHECK(rel_err(m.backward(x, cache, upstream), fd) <= 1e-4);
  }
}

TEST_CASE("full chain from weights to log-probability") {
  sg::RngStream rng(75);
  const sg::BipartiteInfluence objective(3, 2);
  const sg::CardinalityConstraint constraint(3, 2);
  const sg::EntropyRegularizer reg(0.2);
  int probes = 0;
  while (probes < 20) {
    const sg::FeatureTensor x = random_features(3, 2, 4, rng);
    const auto m = interior_model(4, 5, rng);
    sg::PredictiveModel::Cache cache;
    const auto theta = m.forward(x, &cache);
    if (!all_interior(cache)) continue;
    ++probes;
    const auto trace = sg::smoothed_greedy(objective, constraint, reg, theta,
                                           rng);
    const Eigen::VectorXd analytic = m.backward(
        x, cache, sg::grad_log_prob(trace, objective, reg, theta));
    const Eigen::VectorXd fd = sg::finite_difference(
        [&](const Eigen::VectorXd& w) {
          sg::PredictiveModel probe = m;
          probe.mutable_params() = w;
          return sg::replay_log_prob(trace, objective, reg, probe.forward(x));
        },
        m.params(), 1e-6);
    CHECK(rel_err(analytic, fd, 1e-3) <= 1e-4);
  }
}

TEST_CASE("Adam") {
  sg::AdamOptimizer adam(1);
  Eigen::VectorXd p = Eigen::VectorXd::Constant(1, 0.5);
  adam.step(p, Eigen::VectorXd::Ones(1));
  CHECK(p[0] == doctest::Approx(0.5 - 1e-3).epsilon(1e-8));
  CHECK(adam.steps() == 1);

  sg::AdamOptimizer still(3);
  Eigen::VectorXd q = Eigen::VectorXd::Constant(3, 0.25);
  still.step(q, Eigen::VectorXd::Zero(3));
  CHECK(q == Eigen::VectorXd::Constant(3, 0.25));

  CHECK_THROWS_AS(still.step(q, Eigen::VectorXd::Constant(3, NAN)),
                  sg::NumericError);
  CHECK_THROWS_AS(still.step(q, Eigen::VectorXd::Zero(2)), sg::ConfigError);
}

TEST_CASE("synthetic data shapes and determinism") {
  sg::SyntheticDflConfig cfg;
  cfg.train = 3;
  cfg.test = 2;
  cfg.seed = 9;
  const auto a = sg::make_synthetic_dfl(cfg);
  const auto b = sg::make_synthetic_dfl(cfg);
  REQUIRE(a.train.size() == 3);
  REQUIRE(a.test.size() == 2);
  for (const auto& inst : a.train) {
    CHECK(inst.features.rows.rows() == cfg.items * cfg.targets);
    CHECK(inst.features.feature_dim() == cfg.feature_dim);
    CHECK(inst.theta.minCoeff() >= 0.0);
    CHECK(inst.theta.maxCoeff() <= 1.0);
    // Binary features.
    CHECK((inst.features.rows.array() * (1.0 - inst.features.rows.array()))
              .abs()
              .maxCoeff() == 0.0);
  }
  CHECK(a.test[1].theta == b.test[1].theta);
  CHECK(a.train[0].features.rows == b.train[0].features.rows);
}

TEST_CASE("random maximal sets are maximal and roughly uniform") {
  sg::RngStream rng(76);
  const sg::CardinalityConstraint card(4, 2);
  std::map<sg::ElementSet, int> counts;
  for (int i = 0; i < 6000; ++i) {
    const auto s = sg::random_maximal_set(card, rng);
    CHECK(card.is_maximal(s));
    ++counts[s];
  }
  CHECK(counts.size() == 6);
  for (const auto& [set, count] : counts) CHECK(std::abs(count - 1000) < 150);

  const sg::PartitionMatroid m({0, 0, 0, 1, 1}, {2, 1});
  for (int i = 0; i < 100; ++i) {
    const auto s = sg::random_maximal_set(m, rng);
    CHECK(m.is_feasible(s));
    CHECK(m.is_maximal(s));
  }
}

TEST_CASE("zero epochs leave the initialization in place") {
  sg::SyntheticDflConfig data_cfg;
  data_cfg.items = 5;
  data_cfg.targets = 4;
  data_cfg.train = 2;
  data_cfg.test = 1;
  const auto data = sg::make_synthetic_dfl(data_cfg);
  const sg::BipartiteInfluence objective(5, 4);
  const sg::CardinalityConstraint constraint(5, 2);
  const sg::EntropyRegularizer reg(0.2);
  sg::TrainConfig cfg;
  cfg.epochs = 0;
  cfg.hidden = 7;
  cfg.seed = 4;
  const auto zero = sg::train_decision_focused(data, objective, constraint,
                                               reg, cfg);
  CHECK(zero.history.size() == 1);
  cfg.epochs = 1;
  cfg.batch_size = 1;
  cfg.samples = 4;
  const auto one = sg::train_decision_focused(data, objective, constraint,
                                              reg, cfg);
  const auto again = sg::train_decision_focused(data, objective, constraint,
                                                reg, cfg);
  CHECK(one.history.size() == 2);
  // Epoch 0 of a longer run is the same initialization.
  CHECK(one.history[0].test_value == zero.history[0].test_value);
  CHECK(one.model.params() != zero.model.params());
  CHECK(one.model.params() == again.model.params());
  CHECK(one.history[1].test_value == again.history[1].test_value);
  CHECK(zero.model.params().minCoeff() >= 0.0);
  CHECK(zero.model.params().maxCoeff() <= 0.01);
}

TEST_CASE("instance gradient matches the enumerated expectation") {
  sg::RngStream rng(77);
  const sg::BipartiteInfluence objective(3, 2);
  const sg::CardinalityConstraint constraint(3, 2);
  const sg::EntropyRegularizer reg(0.3);
  sg::DflInstance inst;
  sg::PredictiveModel::Cache cache;
  sg::PredictiveModel model(4, 2);
  do {
    inst.features = random_features(3, 2, 4, rng);
    model = interior_model(4, 2, rng);
    model.forward(inst.features, &cache);
  } while (!all_interior(cache));
  inst.theta = (sg::ParamVector(6) << 0.9, 0.1, 0.3, 0.6, 0.5, 0.2).finished();

  const auto predicted = model.forward(inst.features, &cache);
  const Eigen::VectorXd exact = model.backward(
      inst.features, cache,
      sg::exact_gradient(sg::Quantity::objective_value(objective, inst.theta),
                         objective, constraint, reg, predicted)
          .row(0)
          .transpose());

  constexpr int kReps = 40;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(model.num_params());
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(model.num_params());
  for (int rep = 0; rep < kReps; ++rep) {
    sg::EstimatorConfig est;
    est.samples = 2000;
    est.seed = 1000 + rep;
    const auto g = sg::instance_value_gradient(model, inst, objective,
                                               constraint, reg, est, nullptr);
    mean += g.param_grad / kReps;
    sq += g.param_grad.cwiseAbs2() / kReps;
  }
  const Eigen::VectorXd se =
      ((sq - mean.cwiseAbs2()) * kReps / (kReps - 1.0) / kReps).cwiseSqrt();
  for (int i = 0; i < model.num_params(); ++i) {
    CHECK(std::abs(mean[i] - exact[i]) <= 3.0 * se[i] + 1e-12);
  }
}

TEST_CASE("leadership coverage instance") {
  const auto c = target();
  CHECK(c.objective.size() == 20);
  CHECK(c.constraint.rank() == 4);
  CHECK(c.constraint.num_blocks() == 2);
  CHECK(c.constraint.addable(sg::ElementSet{0, 1}).size() == 10);
  CHECK(c.objective.default_weights().minCoeff() > 0.0);
}

TEST_CASE("oracle-query learning") {
  const auto c = target();
  const sg::SetOracle oracle = [&](std::span<const sg::Element> s) {
    return true_value(c, sg::ElementSet(s.begin(), s.end()));
  };
  const sg::DeepSubmodular model(20, 50);
  const sg::EntropyRegularizer reg(0.02);
  const double random = sg::random_set_value(oracle, c.constraint, 2000, 1);

  SUBCASE("zero rounds") {
    sg::OracleLearnConfig cfg;
    cfg.rounds = 0;
    const auto res =
        sg::learn_with_oracle_queries(oracle, model, c.constraint, reg, cfg);
    CHECK(res.history.size() == 1);
    CHECK(res.params.minCoeff() >= 0.0);
    CHECK(res.params.maxCoeff() <= 0.01);
  }

  SUBCASE("weights stay nonnegative and runs are reproducible") {
    sg::OracleLearnConfig cfg;
    cfg.rounds = 5;
    cfg.seed = 3;
    cfg.noisy = true;
    cfg.adam.learning_rate = 0.5;  // large steps force the projection
    const auto a =
        sg::learn_with_oracle_queries(oracle, model, c.constraint, reg, cfg);
    const auto b =
        sg::learn_with_oracle_queries(oracle, model, c.constraint, reg, cfg);
    CHECK(a.params.minCoeff() >= 0.0);
    CHECK(a.params == b.params);
    CHECK(a.history.size() == 6);
  }

  SUBCASE("beats random decisions on average") {
    for (int samples : {10, 1}) {
      double final_value = 0.0;
      for (int seed = 0; seed < 30; ++seed) {
        sg::OracleLearnConfig cfg;
        cfg.samples = samples;
        cfg.seed = seed;
        final_value += sg::learn_with_oracle_queries(oracle, model,
                                                     c.constraint, reg, cfg)
                           .history.back()
                           .true_value /
                       30.0;
      }
      INFO("N = " << samples << ", random " << random);
      CHECK(final_value >= random);
    }
  }
}
