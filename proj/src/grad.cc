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

#include "smoothgreedy/grad.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

#include "smoothgreedy/errors.h"

namespace smoothgreedy {

Quantity Quantity::objective_value(const SubmodularObjective& obj,
                                   ParamVector theta_eval) {
  obj.validate_params(theta_eval);
  Quantity q(Kind::kObjectiveValue, 1);
  q.obj_ = &obj;
  q.theta_eval_ = std::move(theta_eval);
  return q;
}

Quantity Quantity::indicator(int n) {
  if (n < 1) throw ConfigError("indicator quantity needs n >= 1");
  return Quantity(Kind::kIndicator, n);
}

Quantity Quantity::scalar(ScalarFn fn) {
  if (!fn) throw ConfigError("scalar quantity needs a callable");
  Quantity q(Kind::kScalar, 1);
  q.scalar_ = std::move(fn);
  return q;
}

void Quantity::evaluate(std::span<const Element> set,
                        Eigen::Ref<Eigen::VectorXd> out) const {
  switch (kind_) {
    case Kind::kObjectiveValue:
      out[0] = obj_->eval(set, theta_eval_);
      break;
    case Kind::kIndicator:
      out.setZero();
      for (Element v : set) out[v] = 1.0;
      break;
    case Kind::kScalar:
      out[0] = scalar_(set);
      break;
  }
}

Eigen::VectorXd Quantity::evaluate(std::span<const Element> set) const {
  Eigen::VectorXd out(dim_);
  evaluate(set, out);
  return out;
}

BaselineMode parse_baseline(const std::string& name) {
  if (name == "none") return BaselineMode::kNone;
  if (name == "running-mean" || name == "running_mean") {
    return BaselineMode::kRunningMean;
  }
  throw ConfigError("unknown baseline mode '" + name + "'");
}

std::string to_string(BaselineMode mode) {
  return mode == BaselineMode::kNone ? "none" : "running-mean";
}

void parallel_for(int count, int threads,
                  const std::function<void(int)>& fn) {
  if (threads <= 0) {
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& worker : workers) worker.join();
  if (failure) std::rethrow_exception(failure);
}

SampledTraces sample_traces(const SubmodularObjective& obj,
                            const ConstraintSystem& constraint,
                            const Regularizer& reg, const ParamVector& theta,
                            const EstimatorConfig& cfg) {
  if (cfg.samples < 1) throw ConfigError("sample count must be positive");
  obj.validate_params(theta);
  SampledTraces out;
  out.traces.resize(cfg.samples);
  out.score.resize(cfg.samples);
  const RngStream base(cfg.seed, cfg.stream_keys);
  parallel_for(cfg.samples, cfg.threads, [&](int j) {
    RngStream rng = base.derive(static_cast<uint64_t>(j));
    GreedyTrace trace =
        cfg.subsample_eps
            ? stochastic_smoothed_greedy(obj, constraint, reg, theta,
                                         *cfg.subsample_eps, rng)
            : smoothed_greedy(obj, constraint, reg, theta, rng);
    trace.seed = cfg.seed;
    trace.trial = static_cast<uint64_t>(j);
    out.score[j] = grad_log_prob(trace, obj, reg, theta);
    out.traces[j] = std::move(trace);
  });
  return out;
}

GradientEstimate combine_score_function(
    const std::vector<Eigen::VectorXd>& quantities,
    const std::vector<Eigen::VectorXd>& scores, BaselineMode mode,
    RunningBaseline* baseline) {
  const int n = static_cast<int>(scores.size());
  if (n < 1 || quantities.size() != scores.size()) {
    throw ConfigError("need matching, nonempty quantity and score lists");
  }
  const int m = static_cast<int>(quantities.front().size());
  const int d = static_cast<int>(scores.front().size());
  RunningBaseline local(m);
  RunningBaseline& running = baseline != nullptr ? *baseline : local;

  // Welford accumulation of the per-sample terms (Q_j - beta_j) score_j^T.
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(m, d);
  Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(m, d);
  Eigen::VectorXd q_mean = Eigen::VectorXd::Zero(m);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd centered = quantities[j];
    if (mode == BaselineMode::kRunningMean) {
      centered -= running.value();
      running.push(quantities[j]);
    }
    const Eigen::MatrixXd term = centered * scores[j].transpose();
    const Eigen::MatrixXd diff = term - mean;
    mean += diff / static_cast<double>(j + 1);
    m2.array() += diff.array() * (term - mean).array();
    q_mean += (quantities[j] - q_mean) / static_cast<double>(j + 1);
  }
  GradientEstimate out;
  out.estimate = std::move(mean);
  out.samples = n;
  out.mean_quantity = q_mean;
  if (n > 1) {
    out.std_error =
        (m2.array() / static_cast<double>(n - 1) / static_cast<double>(n))
            .sqrt();
  } else {
    out.std_error = Eigen::MatrixXd::Zero(m, d);
  }
  return out;
}

GradientEstimate estimate_gradient(const Quantity& q,
                                   const SubmodularObjective& obj,
                                   const ConstraintSystem& constraint,
                                   const Regularizer& reg,
                                   const ParamVector& theta,
                                   const EstimatorConfig& cfg) {
  const SampledTraces sampled = sample_traces(obj, constraint, reg, theta, cfg);
  std::vector<Eigen::VectorXd> values(sampled.traces.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    values[j] = q.evaluate(sampled.traces[j].as_set());
  }
  return combine_score_function(values, sampled.score, cfg.baseline, nullptr);
}

GradientEstimate sensitivity_jacobian(const SubmodularObjective& obj,
                                      const ConstraintSystem& constraint,
                                      const Regularizer& reg,
                                      const ParamVector& theta,
                                      const EstimatorConfig& cfg) {
  return estimate_gradient(Quantity::indicator(obj.size()), obj, constraint,
                           reg, theta, cfg);
}

}  // namespace smoothgreedy
