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

#ifndef SMOOTHGREEDY_LEARN_H_
#define SMOOTHGREEDY_LEARN_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smoothgreedy/constraints.h"
#include "smoothgreedy/grad.h"
#include "smoothgreedy/objectives.h"
#include "smoothgreedy/regularizers.h"
#include "smoothgreedy/rng.h"

namespace smoothgreedy {

// Features of every (item, target) pair, one row per pair in row-major
// (v, t) order, matching the theta layout of BipartiteInfluence.
struct FeatureTensor {
  int items = 0;
  int targets = 0;
  Eigen::MatrixXd rows;

  int feature_dim() const { return static_cast<int>(rows.cols()); }
};

// Two-layer perceptron mapping a pair feature to a link probability:
//   theta = clip(w2 . relu(W1 x + b1) + b2, 0, 1).
// Parameters live in one flat vector laid out as W1 (hidden x input,
// row-major), b1, w2, b2.
class PredictiveModel {
 public:
  PredictiveModel(int input_dim, int hidden);

  // Linear-layer weights uniform in [lo, hi], biases zero.
  static PredictiveModel random_init(int input_dim, int hidden, RngStream& rng,
                                     double lo = 0.0, double hi = 0.01);

  int input_dim() const { return input_dim_; }
  int hidden() const { return hidden_; }
  int num_params() const { return static_cast<int>(params_.size()); }
  const Eigen::VectorXd& params() const { return params_; }
  Eigen::VectorXd& mutable_params() { return params_; }

  struct Cache {
    Eigen::MatrixXd hidden_pre;  // pairs x hidden
    Eigen::MatrixXd hidden_act;
    Eigen::VectorXd output_pre;  // before clipping
  };

  // Throws ConfigError on a feature-dimension mismatch.
  ParamVector forward(const FeatureTensor& x, Cache* cache = nullptr) const;
  // Gradient with respect to the flat parameters given d loss / d theta.
  Eigen::VectorXd backward(const FeatureTensor& x, const Cache& cache,
                           const Eigen::VectorXd& upstream) const;

 private:
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
  w1() const;
  int b1_offset() const { return hidden_ * input_dim_; }
  int w2_offset() const { return b1_offset() + hidden_; }
  int b2_offset() const { return w2_offset() + hidden_; }

  int input_dim_;
  int hidden_;
  Eigen::VectorXd params_;
};

// Bias-corrected adaptive-moment (Adam) updates.
class AdamOptimizer {
 public:
  struct Options {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
  };

  AdamOptimizer(int dim, Options options);
  explicit AdamOptimizer(int dim) : AdamOptimizer(dim, Options{}) {}

  // Descent step on params. Throws NumericError on a non-finite gradient.
  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);

  long steps() const { return steps_; }
  const Eigen::VectorXd& first_moment() const { return m_; }
  const Eigen::VectorXd& second_moment() const { return v_; }
  const Options& options() const { return options_; }

 private:
  Options options_;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
  long steps_ = 0;
};

// ---------------------------------------------------------------------------
// Decision-focused learning

struct DflInstance {
  FeatureTensor features;
  ParamVector theta;  // ground-truth link probabilities
};

struct DflData {
  std::vector<DflInstance> train;
  std::vector<DflInstance> test;
};

struct SyntheticDflConfig {
  int items = 20;
  int targets = 50;
  int feature_dim = 16;
  int train = 40;
  int test = 10;
  // Fraction of active entries in each binary feature vector.
  double density = 0.25;
  // Hidden width of the random ground-truth network.
  int truth_hidden = 32;
  // Hidden-unit bias mean and output scale of the ground-truth network.
  double truth_bias = -3.0;
  double truth_scale = 0.05;
  uint64_t seed = 0;
};

// Random sparse binary features split into an item half and a target half,
// with ground-truth theta produced by a hidden random two-layer network.
DflData make_synthetic_dfl(const SyntheticDflConfig& cfg);

enum class BaselineScope { kPerCall, kGlobal };

struct TrainConfig {
  int epochs = 5;
  int batch_size = 20;
  int samples = 10;
  BaselineMode baseline = BaselineMode::kRunningMean;
  BaselineScope baseline_scope = BaselineScope::kPerCall;
  int hidden = 200;
  double init_lo = 0.0;
  double init_hi = 0.01;
  AdamOptimizer::Options adam;
  uint64_t seed = 0;
  int threads = 0;
};

struct TrainRecord {
  int epoch = 0;
  double train_value = 0.0;
  double test_value = 0.0;
  double loss_estimate = 0.0;
  double wall_seconds = 0.0;
};

struct TrainResult {
  PredictiveModel model;
  std::vector<TrainRecord> history;  // epoch 0 is the initialization
};

// Mean of f(greedy(m(X_i)), theta_i) over the instances: decisions are made
// with the plain greedy on the predicted theta and scored on the true one.
double decision_quality(const PredictiveModel& model,
                        const std::vector<DflInstance>& data,
                        const BipartiteInfluence& objective,
                        const ConstraintSystem& constraint);

// Expected f(S, theta_i) for S uniform over maximal feasible sets,
// estimated with `draws` uniform draws per instance. Cardinality and
// partition constraints are supported.
double random_decision_quality(const std::vector<DflInstance>& data,
                               const BipartiteInfluence& objective,
                               const ConstraintSystem& constraint, int draws,
                               uint64_t seed);

// Uniform draw of a maximal feasible set (cardinality or partition).
ElementSet random_maximal_set(const ConstraintSystem& constraint,
                              RngStream& rng);

TrainResult train_decision_focused(const DflData& data,
                                   const BipartiteInfluence& objective,
                                   const ConstraintSystem& constraint,
                                   const Regularizer& reg,
                                   const TrainConfig& cfg);

// Gradient of the expected true decision value E[f(S, theta_i)] with
// respect to the model parameters for one instance, through the chain
// w -> theta -> ln p. `baseline` may be null.
struct InstanceGradient {
  Eigen::VectorXd param_grad;
  double mean_value = 0.0;
};
InstanceGradient instance_value_gradient(
    const PredictiveModel& model, const DflInstance& instance,
    const BipartiteInfluence& objective, const ConstraintSystem& constraint,
    const Regularizer& reg, const EstimatorConfig& est,
    RunningBaseline* baseline);

// ---------------------------------------------------------------------------
// Learning a submodular model from a limited value oracle

struct CoverageInstance {
  WeightedCoverage objective;
  PartitionMatroid constraint;
};

// 20 people leading subsets of 24 companies, odd-numbered companies
// weighted 1 and even-numbered 0.1, people split into two groups of 10 with
// at most two picks per group. Leadership links are random.
CoverageInstance make_leadership_coverage(uint64_t seed);

struct OracleLearnConfig {
  int rounds = 20;
  int samples = 10;
  BaselineMode baseline = BaselineMode::kNone;
  int hidden = 50;
  double init_lo = 0.0;
  double init_hi = 0.01;
  // Adds a standard normal perturbation to every oracle answer.
  bool noisy = false;
  AdamOptimizer::Options adam;
  uint64_t seed = 0;
  int threads = 0;
};

struct OracleRecord {
  int round = 0;
  double model_value = 0.0;
  double true_value = 0.0;
  double wall_seconds = 0.0;
};

struct OracleLearnResult {
  ParamVector params;
  std::vector<OracleRecord> history;  // round 0 is the initialization
};

using SetOracle = std::function<double(std::span<const Element>)>;

// Fits a deep submodular model from oracle answers at smoothed greedy
// outputs of the model. Each round ascends the score-function estimate of
// the expected oracle value, then clamps weights to be nonnegative.
OracleLearnResult learn_with_oracle_queries(const SetOracle& oracle,
                                            const DeepSubmodular& model,
                                            const ConstraintSystem& constraint,
                                            const Regularizer& reg,
                                            const OracleLearnConfig& cfg);

// Mean oracle value of uniform maximal feasible sets.
double random_set_value(const SetOracle& oracle,
                        const ConstraintSystem& constraint, int draws,
                        uint64_t seed);

}  // namespace smoothgreedy

#endif  // SMOOTHGREEDY_LEARN_H_
