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

#ifndef SMOOTHGREEDY_GREEDY_H_
#define SMOOTHGREEDY_GREEDY_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "smoothgreedy/constraints.h"
#include "smoothgreedy/objectives.h"
#include "smoothgreedy/regularizers.h"
#include "smoothgreedy/rng.h"

namespace smoothgreedy {

// One iteration of the smoothed greedy loop.
struct GreedyStep {
  std::vector<Element> candidates;  // U_k, ascending
  Eigen::VectorXd gains;            // g_k, aligned with candidates
  SimplexSolution solution;         // p_k
  int chosen_index = -1;

  Element chosen() const { return candidates[chosen_index]; }
  double chosen_probability() const { return solution.p[chosen_index]; }
};

// A sampled (or enumerated) run of smoothed greedy.
struct GreedyTrace {
  std::vector<Element> sequence;
  std::vector<GreedyStep> steps;
  // sum_k ln p_k(s_k).
  double log_prob = 0.0;
  // max_k delta_bound(reg, n_k).
  double delta = 0.0;
  // delta * K, the smoothing term in the approximation bounds.
  double delta_k = 0.0;
  uint64_t seed = 0;
  uint64_t trial = 0;

  // Chosen elements in ascending order.
  ElementSet as_set() const;
};

// Draws an index from `p` by inverse CDF with a single uniform `u`; the
// first index whose cumulative mass exceeds u wins.
int sample_index(const Eigen::VectorXd& p, double u);

// Builds step k: gains of `candidates` under `state` and the regularized
// argmax over them. Shared by the samplers and the enumeration oracle.
GreedyStep make_step(std::vector<Element> candidates, const GainState& state,
                     const Regularizer& reg);

// Smoothed greedy over an arbitrary feasibility system. Stops exactly when
// the current set is maximal.
GreedyTrace smoothed_greedy(const SubmodularObjective& obj,
                            const ConstraintSystem& constraint,
                            const Regularizer& reg, const ParamVector& theta,
                            RngStream& rng);

// ceil((n / K) ln(1 / subsample_eps)), subsample_eps in (0, 1).
int stochastic_sample_size(int n, int k, double subsample_eps);

// Stochastic smoothed greedy: at every step the candidates are a uniform
// random subset of V \ S of size min(sample_size, |V \ S|). Runs exactly K
// steps. Only cardinality constraints are accepted (ConfigError otherwise).
GreedyTrace stochastic_smoothed_greedy(const SubmodularObjective& obj,
                                       const ConstraintSystem& constraint,
                                       const Regularizer& reg,
                                       const ParamVector& theta,
                                       double subsample_eps, RngStream& rng);
GreedyTrace stochastic_smoothed_greedy_with_size(
    const SubmodularObjective& obj, const ConstraintSystem& constraint,
    const Regularizer& reg, const ParamVector& theta, int sample_size,
    RngStream& rng);

// Gradient of ln p(S, theta) along the recorded decision path:
//   sum_k (1 / p_k(s_k)) [d p_k / d g_k]_{s_k, :} d g_k / d theta.
// Candidate sets are held fixed, so stochastic traces are differentiated
// conditionally on their sampled subsets.
Eigen::VectorXd grad_log_prob(const GreedyTrace& trace,
                              const SubmodularObjective& obj,
                              const Regularizer& reg,
                              const ParamVector& theta);

// ln p of the recorded decision path (candidate sets and choices) replayed
// at a different theta. Used for finite-difference checks.
double replay_log_prob(const GreedyTrace& trace,
                       const SubmodularObjective& obj, const Regularizer& reg,
                       const ParamVector& theta);

// Plain greedy: argmax of the marginal gain at each step, ties to the
// smallest element.
ElementSet deterministic_greedy(const SubmodularObjective& obj,
                                const ConstraintSystem& constraint,
                                const ParamVector& theta);

}  // namespace smoothgreedy

#endif  // SMOOTHGREEDY_GREEDY_H_
