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

#ifndef SMOOTHGREEDY_ORACLE_H_
#define SMOOTHGREEDY_ORACLE_H_

#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "smoothgreedy/constraints.h"
#include "smoothgreedy/grad.h"
#include "smoothgreedy/greedy.h"
#include "smoothgreedy/objectives.h"
#include "smoothgreedy/regularizers.h"

namespace smoothgreedy {

struct EnumerationCaps {
  int max_n = 7;
  int max_rank = 4;
};

// One leaf of the greedy decision tree and its probability. For the
// stochastic variant the probability includes the subset-draw weights
// while trace.log_prob only covers the element choices.
struct WeightedPath {
  GreedyTrace trace;
  double probability = 0.0;
};

// Exact output distribution of (stochastic) smoothed greedy, as the list of
// all reachable decision paths.
struct OutputDistribution {
  std::vector<WeightedPath> paths;

  double total_mass() const;
  // Probability of each output sequence, summed over paths.
  std::map<std::vector<Element>, double> sequence_masses() const;
  // Probability of each output set.
  std::map<ElementSet, double> set_masses() const;
  // max over paths of the run-level delta * K.
  double max_delta_k() const;
};

OutputDistribution enumerate_output_distribution(
    const SubmodularObjective& obj, const ConstraintSystem& constraint,
    const Regularizer& reg, const ParamVector& theta,
    const EnumerationCaps& caps = {});

// Enumerates every candidate-subset draw (each weighted 1 / C(|V \ S|, n_k))
// and every element choice of stochastic smoothed greedy.
OutputDistribution enumerate_stochastic_distribution(
    const SubmodularObjective& obj, const ConstraintSystem& constraint,
    const Regularizer& reg, const ParamVector& theta, int sample_size,
    const EnumerationCaps& caps = {});

// sum_S p(S) Q(S).
Eigen::VectorXd exact_expectation(const Quantity& q,
                                  const OutputDistribution& dist);

// sum_S p(S) Q(S) grad ln p(S)^T, i.e. the exact gradient of E[Q(S)] for a
// Q that does not depend on theta. Shape dim Q x dim theta.
Eigen::MatrixXd exact_gradient(const Quantity& q,
                               const OutputDistribution& dist,
                               const SubmodularObjective& obj,
                               const Regularizer& reg,
                               const ParamVector& theta);
Eigen::MatrixXd exact_gradient(const Quantity& q,
                               const SubmodularObjective& obj,
                               const ConstraintSystem& constraint,
                               const Regularizer& reg,
                               const ParamVector& theta,
                               const EnumerationCaps& caps = {});

// Exact maximizer over feasible sets, ties broken toward the
// lexicographically smallest sorted set.
struct OptimalSet {
  ElementSet set;
  double value = 0.0;
};
OptimalSet brute_force_opt(const SubmodularObjective& obj,
                           const ConstraintSystem& constraint,
                           const ParamVector& theta, int max_n = 20);

// Central differences of fn at theta with step h. NumericError when fn
// returns a non-finite value.
Eigen::VectorXd finite_difference(
    const std::function<double(const Eigen::VectorXd&)>& fn,
    const Eigen::VectorXd& theta, double h);

}  // namespace smoothgreedy

#endif  // SMOOTHGREEDY_ORACLE_H_
