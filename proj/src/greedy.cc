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

#include "smoothgreedy/greedy.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "smoothgreedy/errors.h"

namespace smoothgreedy {

ElementSet GreedyTrace::as_set() const {
  ElementSet set(sequence);
  std::sort(set.begin(), set.end());
  return set;
}

int sample_index(const Eigen::VectorXd& p, double u) {
  double cumulative = 0.0;
  int last_positive = -1;
  for (int i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    cumulative += p[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  // Rounding left u above the accumulated mass.
  return last_positive;
}

GreedyStep make_step(std::vector<Element> candidates, const GainState& state,
                     const Regularizer& reg) {
  GreedyStep step;
  step.gains.resize(static_cast<Eigen::Index>(candidates.size()));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    step.gains[i] = state.gain(candidates[i]);
  }
  step.candidates = std::move(candidates);
  step.solution = reg.solve(step.gains);
  return step;
}

namespace {

void record_choice(GreedyTrace& trace, GreedyStep step, GainState& state,
                   const Regularizer& reg) {
  const Element chosen = step.chosen();
  trace.log_prob += step.solution.log_p[step.chosen_index];
  trace.delta = std::max(
      trace.delta, reg.delta_bound(static_cast<int>(step.candidates.size())));
  trace.sequence.push_back(chosen);
  trace.steps.push_back(std::move(step));
  state.add(chosen);
}

const CardinalityConstraint& require_cardinality(
    const ConstraintSystem& constraint) {
  const auto* card = dynamic_cast<const CardinalityConstraint*>(&constraint);
  if (card == nullptr) {
    throw ConfigError(
        "stochastic smoothed greedy supports cardinality constraints only, "
        "got '" + constraint.kind() + "'");
  }
  return *card;
}

}  // namespace

GreedyTrace smoothed_greedy(const SubmodularObjective& obj,
                            const ConstraintSystem& constraint,
                            const Regularizer& reg, const ParamVector& theta,
                            RngStream& rng) {
  if (constraint.size() != obj.size()) {
    throw ConfigError("constraint and objective ground sets differ");
  }
  GreedyTrace trace;
  trace.seed = rng.master_seed();
  auto state = obj.start_run(theta);
  while (true) {
    std::vector<Element> candidates = constraint.addable(trace.sequence);
    if (candidates.empty()) break;
    GreedyStep step = make_step(std::move(candidates), *state, reg);
    step.chosen_index = sample_index(step.solution.p, rng.uniform());
    record_choice(trace, std::move(step), *state, reg);
  }
  trace.delta_k = trace.delta * constraint.rank();
  return trace;
}

int stochastic_sample_size(int n, int k, double subsample_eps) {
  if (!(subsample_eps > 0.0 && subsample_eps < 1.0)) {
    throw ConfigError("subsample epsilon must lie in (0, 1)");
  }
  if (k < 1 || n < 1) throw ConfigError("n and K must be positive");
  const double size = static_cast<double>(n) / static_cast<double>(k) *
                      std::log(1.0 / subsample_eps);
  // Guard against ceil() jumping over an exact integer through rounding.
  const double rounded = std::round(size);
  if (std::abs(size - rounded) < 1e-9) return static_cast<int>(rounded);
  return static_cast<int>(std::ceil(size));
}

GreedyTrace stochastic_smoothed_greedy(const SubmodularObjective& obj,
                                       const ConstraintSystem& constraint,
                                       const Regularizer& reg,
                                       const ParamVector& theta,
                                       double subsample_eps, RngStream& rng) {
  const auto& card = require_cardinality(constraint);
  return stochastic_smoothed_greedy_with_size(
      obj, card, reg, theta,
      stochastic_sample_size(card.size(), card.k(), subsample_eps), rng);
}

GreedyTrace stochastic_smoothed_greedy_with_size(
    const SubmodularObjective& obj, const ConstraintSystem& constraint,
    const Regularizer& reg, const ParamVector& theta, int sample_size,
    RngStream& rng) {
  const auto& card = require_cardinality(constraint);
  if (card.size() != obj.size()) {
    throw ConfigError("constraint and objective ground sets differ");
  }
  if (card.size() < card.k()) {
    throw ConfigError("stochastic smoothed greedy needs n >= K");
  }
  if (sample_size < 1) throw ConfigError("subsample size must be positive");

  GreedyTrace trace;
  trace.seed = rng.master_seed();
  auto state = obj.start_run(theta);
  std::vector<Element> remaining(card.size());
  for (int v = 0; v < card.size(); ++v) remaining[v] = v;

  for (int k = 0; k < card.k(); ++k) {
    // Partial Fisher-Yates over V \ S; the first `take` slots are U_k.
    const std::size_t take =
        std::min(static_cast<std::size_t>(sample_size), remaining.size());
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + rng.uniform_index(remaining.size() - i);
      std::swap(remaining[i], remaining[j]);
    }
    std::vector<Element> candidates(remaining.begin(),
                                    remaining.begin() + take);
    std::sort(candidates.begin(), candidates.end());
    GreedyStep step = make_step(std::move(candidates), *state, reg);
    step.chosen_index = sample_index(step.solution.p, rng.uniform());
    const Element chosen = step.chosen();
    record_choice(trace, std::move(step), *state, reg);
    remaining.erase(std::find(remaining.begin(), remaining.end(), chosen));
    std::sort(remaining.begin(), remaining.end());
  }
  trace.delta_k = trace.delta * card.k();
  return trace;
}

Eigen::VectorXd grad_log_prob(const GreedyTrace& trace,
                              const SubmodularObjective& obj,
                              const Regularizer& reg,
                              const ParamVector& theta) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(obj.param_dim());
  ElementSet prefix;
  for (const GreedyStep& step : trace.steps) {
    const int n_k = static_cast<int>(step.candidates.size());
    if (n_k > 1) {
      const double p_chosen = step.chosen_probability();
      if (!(p_chosen >= 1e-300)) {
        throw NumericError("chosen candidate has probability " +
                           std::to_string(p_chosen));
      }
      const SimplexJacobian jac = reg.jacobian(step.solution);
      // Row s_k of dp/dg, scaled by 1 / p_k(s_k).
      const Eigen::VectorXd coeff =
          jac.matrix.row(step.chosen_index).transpose() / p_chosen;
      // d g_k(u) / d theta = grad f(S + u) - grad f(S).
      ElementSet with(prefix);
      with.push_back(0);
      for (int i = 0; i < n_k; ++i) {
        if (coeff[i] == 0.0) continue;
        with.back() = step.candidates[i];
        obj.accumulate_grad(with, theta, coeff[i], grad);
      }
      obj.accumulate_grad(prefix, theta, -coeff.sum(), grad);
    }
    prefix.push_back(step.chosen());
  }
  return grad;
}

double replay_log_prob(const GreedyTrace& trace,
                       const SubmodularObjective& obj, const Regularizer& reg,
                       const ParamVector& theta) {
  auto state = obj.start_run(theta);
  double total = 0.0;
  for (const GreedyStep& step : trace.steps) {
    const GreedyStep replay = make_step(step.candidates, *state, reg);
    total += replay.solution.log_p[step.chosen_index];
    state->add(step.chosen());
  }
  return total;
}

ElementSet deterministic_greedy(const SubmodularObjective& obj,
                                const ConstraintSystem& constraint,
                                const ParamVector& theta) {
  auto state = obj.start_run(theta);
  ElementSet chosen;
  while (true) {
    const std::vector<Element> candidates = constraint.addable(chosen);
    if (candidates.empty()) break;
    Element best = candidates.front();
    double best_gain = state->gain(best);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
      const double gain = state->gain(candidates[i]);
      if (gain > best_gain) {
        best_gain = gain;
        best = candidates[i];
      }
    }
    chosen.push_back(best);
    state->add(best);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace smoothgreedy
