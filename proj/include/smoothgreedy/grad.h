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

#ifndef SMOOTHGREEDY_GRAD_H_
#define SMOOTHGREEDY_GRAD_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smoothgreedy/constraints.h"
#include "smoothgreedy/greedy.h"
#include "smoothgreedy/objectives.h"
#include "smoothgreedy/regularizers.h"

namespace smoothgreedy {

// A quantity Q(S) of the greedy output, evaluated on the underlying set.
class Quantity {
 public:
  enum class Kind { kObjectiveValue, kIndicator, kScalar };
  using ScalarFn = std::function<double(std::span<const Element>)>;

  // Q(S) = f(S, theta_eval) for a fixed theta_eval.
  static Quantity objective_value(const SubmodularObjective& obj,
                                  ParamVector theta_eval);
  // Q(S) = 1_S in R^n.
  static Quantity indicator(int n);
  // Q(S) = fn(S), e.g. a lookup table or an external oracle.
  static Quantity scalar(ScalarFn fn);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  // Writes Q(set) into out (size dim()).
  void evaluate(std::span<const Element> set,
                Eigen::Ref<Eigen::VectorXd> out) const;
  Eigen::VectorXd evaluate(std::span<const Element> set) const;

 private:
  Quantity(Kind kind, int dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  int dim_;
  const SubmodularObjective* obj_ = nullptr;
  ParamVector theta_eval_;
  ScalarFn scalar_;
};

enum class BaselineMode { kNone, kRunningMean };

BaselineMode parse_baseline(const std::string& name);
std::string to_string(BaselineMode mode);

// Running mean of Q values. The baseline used for a sample is the mean of
// the samples strictly before it, so it never depends on the sample itself.
class RunningBaseline {
 public:
  explicit RunningBaseline(int dim) : mean_(Eigen::VectorXd::Zero(dim)) {}

  const Eigen::VectorXd& value() const { return mean_; }
  long count() const { return count_; }
  void push(const Eigen::VectorXd& q) {
    ++count_;
    mean_ += (q - mean_) / static_cast<double>(count_);
  }

 private:
  Eigen::VectorXd mean_;
  long count_ = 0;
};

struct EstimatorConfig {
  int samples = 100;
  BaselineMode baseline = BaselineMode::kNone;
  uint64_t seed = 0;
  // When set, traces come from stochastic smoothed greedy with this
  // subsampling parameter.
  std::optional<double> subsample_eps;
  // Extra RNG derivation keys in front of the trial index, e.g. (epoch,
  // batch, instance) during training.
  std::vector<uint64_t> stream_keys;
  // Worker threads for sampling; 0 picks the hardware concurrency.
  int threads = 0;
};

struct GradientEstimate {
  Eigen::MatrixXd estimate;   // dim Q x dim theta
  Eigen::MatrixXd std_error;  // componentwise standard errors
  Eigen::VectorXd mean_quantity;
  int samples = 0;
};

// Trace and grad ln p for each trial j = 0..N-1 of cfg, sampled with the
// stream (seed, stream_keys..., j).
struct SampledTraces {
  std::vector<GreedyTrace> traces;
  std::vector<Eigen::VectorXd> score;  // grad ln p(S_j, theta)
};

SampledTraces sample_traces(const SubmodularObjective& obj,
                            const ConstraintSystem& constraint,
                            const Regularizer& reg, const ParamVector& theta,
                            const EstimatorConfig& cfg);

// Combines per-sample quantity values and scores into
//   (1/N) sum_j (Q_j - beta_j) score_j^T
// with beta_j taken from `baseline` (updated in place, trial order) or zero.
GradientEstimate combine_score_function(
    const std::vector<Eigen::VectorXd>& quantities,
    const std::vector<Eigen::VectorXd>& scores, BaselineMode mode,
    RunningBaseline* baseline);

// Score-function estimate of grad_theta E[Q(S)].
GradientEstimate estimate_gradient(const Quantity& q,
                                   const SubmodularObjective& obj,
                                   const ConstraintSystem& constraint,
                                   const Regularizer& reg,
                                   const ParamVector& theta,
                                   const EstimatorConfig& cfg);

// Estimate of grad_theta E[1_S]: row v is the sensitivity of P(v in S).
GradientEstimate sensitivity_jacobian(const SubmodularObjective& obj,
                                      const ConstraintSystem& constraint,
                                      const Regularizer& reg,
                                      const ParamVector& theta,
                                      const EstimatorConfig& cfg);

// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace smoothgreedy

#endif  // SMOOTHGREEDY_GRAD_H_
