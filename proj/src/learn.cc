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

#include "smoothgreedy/learn.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "smoothgreedy/errors.h"
#include "smoothgreedy/greedy.h"

namespace smoothgreedy {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Key tags keep the sub-streams of one master seed apart.
constexpr uint64_t kInitStream = 0x696e6974;     // "init"
constexpr uint64_t kShuffleStream = 0x73687566;  // "shuf"
constexpr uint64_t kSampleStream = 0x736d706c;   // "smpl"
constexpr uint64_t kNoiseStream = 0x6e6f6973;    // "nois"

}  // namespace

// ---------------------------------------------------------------------------
// PredictiveModel

PredictiveModel::PredictiveModel(int input_dim, int hidden)
    : input_dim_(input_dim), hidden_(hidden) {
  if (input_dim < 1 || hidden < 1) {
    throw ConfigError("model dimensions must be positive");
  }
  params_ = Eigen::VectorXd::Zero(hidden * input_dim + 2 * hidden + 1);
}

PredictiveModel PredictiveModel::random_init(int input_dim, int hidden,
                                             RngStream& rng, double lo,
                                             double hi) {
  PredictiveModel model(input_dim, hidden);
  for (int i = 0; i < model.b1_offset(); ++i) {
    model.params_[i] = rng.uniform(lo, hi);
  }
  for (int i = model.w2_offset(); i < model.b2_offset(); ++i) {
    model.params_[i] = rng.uniform(lo, hi);
  }
  return model;
}

Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::RowMajor>>
PredictiveModel::w1() const {
  return {params_.data(), hidden_, input_dim_};
}

ParamVector PredictiveModel::forward(const FeatureTensor& x,
                                     Cache* cache) const {
  if (x.feature_dim() != input_dim_) {
    throw ConfigError("feature dimension " + std::to_string(x.feature_dim()) +
                      " does not match model input " +
                      std::to_string(input_dim_));
  }
  if (x.rows.rows() != static_cast<Eigen::Index>(x.items) * x.targets) {
    throw ConfigError("feature tensor rows do not match items x targets");
  }
  const auto b1 = params_.segment(b1_offset(), hidden_);
  const auto w2 = params_.segment(w2_offset(), hidden_);
  const double b2 = params_[b2_offset()];

  Eigen::MatrixXd pre = x.rows * w1().transpose();
  pre.rowwise() += b1.transpose();
  Eigen::MatrixXd act = pre.cwiseMax(0.0);
  Eigen::VectorXd out = (act * w2).array() + b2;
  ParamVector theta = out.cwiseMax(0.0).cwiseMin(1.0);
  if (cache != nullptr) {
    cache->hidden_pre = std::move(pre);
    cache->hidden_act = std::move(act);
    cache->output_pre = std::move(out);
  }
  return theta;
}

Eigen::VectorXd PredictiveModel::backward(
    const FeatureTensor& x, const Cache& cache,
    const Eigen::VectorXd& upstream) const {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(num_params());
  // Clip passes gradients only strictly inside (0, 1).
  Eigen::VectorXd d_out = upstream;
  for (Eigen::Index i = 0; i < d_out.size(); ++i) {
    const double o = cache.output_pre[i];
    if (!(o > 0.0 && o < 1.0)) d_out[i] = 0.0;
  }
  const auto w2 = params_.segment(w2_offset(), hidden_);
  grad.segment(w2_offset(), hidden_) = cache.hidden_act.transpose() * d_out;
  grad[b2_offset()] = d_out.sum();

  Eigen::MatrixXd d_hidden = d_out * w2.transpose();
  d_hidden.array() *= (cache.hidden_pre.array() > 0.0).cast<double>();
  grad.segment(b1_offset(), hidden_) = d_hidden.colwise().sum().transpose();
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                           Eigen::RowMajor>>(grad.data(), hidden_,
                                             input_dim_) =
      d_hidden.transpose() * x.rows;
  return grad;
}

// ---------------------------------------------------------------------------
// AdamOptimizer

AdamOptimizer::AdamOptimizer(int dim, Options options)
    : options_(options),
      m_(Eigen::VectorXd::Zero(dim)),
      v_(Eigen::VectorXd::Zero(dim)) {}

void AdamOptimizer::step(Eigen::VectorXd& params,
                         const Eigen::VectorXd& grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw ConfigError("optimizer shape mismatch");
  }
  if (!grad.allFinite()) {
    throw NumericError("non-finite gradient passed to the optimizer at step " +
                       std::to_string(steps_ + 1));
  }
  ++steps_;
  m_ = options_.beta1 * m_ + (1.0 - options_.beta1) * grad;
  v_ = options_.beta2 * v_ + (1.0 - options_.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(steps_));
  params.array() -= options_.learning_rate * (m_.array() / c1) /
                    ((v_.array() / c2).sqrt() + options_.epsilon);
}

// ---------------------------------------------------------------------------
// Synthetic decision-focused data

DflData make_synthetic_dfl(const SyntheticDflConfig& cfg) {
  if (cfg.items < 1 || cfg.targets < 1 || cfg.feature_dim < 2 ||
      cfg.train < 1 || cfg.test < 0) {
    throw ConfigError("invalid synthetic data sizes");
  }
  RngStream rng(cfg.seed, {kInitStream});
  const int item_dim = cfg.feature_dim / 2;
  const int target_dim = cfg.feature_dim - item_dim;

  // Hidden truth network, shared by every instance.
  Eigen::MatrixXd a(cfg.truth_hidden, cfg.feature_dim);
  Eigen::VectorXd c(cfg.truth_hidden);
  Eigen::VectorXd w(cfg.truth_hidden);
  for (int h = 0; h < cfg.truth_hidden; ++h) {
    for (int j = 0; j < cfg.feature_dim; ++j) a(h, j) = rng.normal();
    c[h] = cfg.truth_bias + 0.5 * rng.normal();
    w[h] = std::abs(rng.normal());
  }

  auto make_instance = [&](RngStream& irng) {
    Eigen::MatrixXd items(cfg.items, item_dim);
    Eigen::MatrixXd targets(cfg.targets, target_dim);
    for (int v = 0; v < cfg.items; ++v) {
      for (int j = 0; j < item_dim; ++j) {
        items(v, j) = irng.uniform() < cfg.density ? 1.0 : 0.0;
      }
    }
    for (int t = 0; t < cfg.targets; ++t) {
      for (int j = 0; j < target_dim; ++j) {
        targets(t, j) = irng.uniform() < cfg.density ? 1.0 : 0.0;
      }
    }
    DflInstance inst;
    inst.features.items = cfg.items;
    inst.features.targets = cfg.targets;
    inst.features.rows.resize(cfg.items * cfg.targets, cfg.feature_dim);
    for (int v = 0; v < cfg.items; ++v) {
      for (int t = 0; t < cfg.targets; ++t) {
        auto row = inst.features.rows.row(v * cfg.targets + t);
        row.head(item_dim) = items.row(v);
        row.tail(target_dim) = targets.row(t);
      }
    }
    const Eigen::MatrixXd hidden =
        ((inst.features.rows * a.transpose()).rowwise() + c.transpose())
            .cwiseMax(0.0);
    inst.theta = (cfg.truth_scale * (hidden * w)).cwiseMin(1.0);
    return inst;
  };

  DflData data;
  for (int i = 0; i < cfg.train + cfg.test; ++i) {
    RngStream irng = rng.derive(static_cast<uint64_t>(i));
    (i < cfg.train ? data.train : data.test).push_back(make_instance(irng));
  }
  return data;
}

// ---------------------------------------------------------------------------
// Decision evaluation

ElementSet random_maximal_set(const ConstraintSystem& constraint,
                              RngStream& rng) {
  auto pick = [&rng](std::vector<Element> pool, int count, ElementSet& out) {
    count = std::min<int>(count, static_cast<int>(pool.size()));
    for (int i = 0; i < count; ++i) {
      const std::size_t j = i + rng.uniform_index(pool.size() - i);
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
  };
  ElementSet out;
  if (const auto* card =
          dynamic_cast<const CardinalityConstraint*>(&constraint)) {
    std::vector<Element> pool(card->size());
    std::iota(pool.begin(), pool.end(), 0);
    pick(std::move(pool), card->k(), out);
  } else if (const auto* part =
                 dynamic_cast<const PartitionMatroid*>(&constraint)) {
    std::vector<std::vector<Element>> blocks(part->num_blocks());
    for (Element v = 0; v < part->size(); ++v) {
      blocks[part->block_of()[v]].push_back(v);
    }
    for (int b = 0; b < part->num_blocks(); ++b) {
      pick(std::move(blocks[b]), part->capacities()[b], out);
    }
  } else {
    throw ConfigError("uniform maximal sets need a cardinality or partition "
                      "constraint, got '" + constraint.kind() + "'");
  }
  std::sort(out.begin(), out.end());
  return out;
}

double decision_quality(const PredictiveModel& model,
                        const std::vector<DflInstance>& data,
                        const BipartiteInfluence& objective,
                        const ConstraintSystem& constraint) {
  if (data.empty()) return 0.0;
  double total = 0.0;
  for (const DflInstance& inst : data) {
    const ParamVector predicted = model.forward(inst.features);
    const ElementSet chosen =
        deterministic_greedy(objective, constraint, predicted);
    total += objective.eval(chosen, inst.theta);
  }
  return total / static_cast<double>(data.size());
}

double random_decision_quality(const std::vector<DflInstance>& data,
                               const BipartiteInfluence& objective,
                               const ConstraintSystem& constraint, int draws,
                               uint64_t seed) {
  if (data.empty()) return 0.0;
  if (draws < 1) throw ConfigError("need at least one random draw");
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    RngStream rng(seed, {static_cast<uint64_t>(i)});
    double sum = 0.0;
    for (int d = 0; d < draws; ++d) {
      sum += objective.eval(random_maximal_set(constraint, rng), data[i].theta);
    }
    total += sum / draws;
  }
  return total / static_cast<double>(data.size());
}

// ---------------------------------------------------------------------------
// Decision-focused training

InstanceGradient instance_value_gradient(
    const PredictiveModel& model, const DflInstance& instance,
    const BipartiteInfluence& objective, const ConstraintSystem& constraint,
    const Regularizer& reg, const EstimatorConfig& est,
    RunningBaseline* baseline) {
  PredictiveModel::Cache cache;
  const ParamVector predicted = model.forward(instance.features, &cache);
  const SampledTraces sampled =
      sample_traces(objective, constraint, reg, predicted, est);
  std::vector<Eigen::VectorXd> values(sampled.traces.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    values[j] = Eigen::VectorXd::Constant(
        1, objective.eval(sampled.traces[j].as_set(), instance.theta));
  }
  const GradientEstimate g =
      combine_score_function(values, sampled.score, est.baseline, baseline);
  InstanceGradient out;
  out.param_grad =
      model.backward(instance.features, cache, g.estimate.row(0).transpose());
  out.mean_value = g.mean_quantity[0];
  return out;
}

TrainResult train_decision_focused(const DflData& data,
                                   const BipartiteInfluence& objective,
                                   const ConstraintSystem& constraint,
                                   const Regularizer& reg,
                                   const TrainConfig& cfg) {
  if (data.train.empty()) throw ConfigError("no training instances");
  if (cfg.epochs < 0 || cfg.batch_size < 1 || cfg.samples < 1) {
    throw ConfigError("invalid training configuration");
  }
  const int input_dim = data.train.front().features.feature_dim();
  for (const auto* split : {&data.train, &data.test}) {
    for (const DflInstance& inst : *split) {
      if (inst.features.items != objective.size() ||
          inst.features.targets != objective.targets() ||
          inst.features.feature_dim() != input_dim) {
        throw ConfigError("instance shapes are inconsistent");
      }
      objective.validate_params(inst.theta);
    }
  }

  const auto start = Clock::now();
  RngStream init_rng(cfg.seed, {kInitStream});
  TrainResult result{PredictiveModel::random_init(input_dim, cfg.hidden,
                                                  init_rng, cfg.init_lo,
                                                  cfg.init_hi),
                     {}};
  AdamOptimizer adam(result.model.num_params(), cfg.adam);
  RunningBaseline global_baseline(1);

  auto record = [&](int epoch, double loss) {
    result.history.push_back(
        {epoch, decision_quality(result.model, data.train, objective,
                                 constraint),
         decision_quality(result.model, data.test, objective, constraint),
         loss, seconds_since(start)});
  };
  record(0, 0.0);

  const int m = static_cast<int>(data.train.size());
  std::vector<int> order(m);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    RngStream shuffle(cfg.seed, {kShuffleStream, static_cast<uint64_t>(epoch)});
    for (int i = m - 1; i > 0; --i) {
      std::swap(order[i], order[shuffle.uniform_index(i + 1)]);
    }
    double loss_sum = 0.0;
    int batch = 0;
    for (int begin = 0; begin < m; begin += cfg.batch_size, ++batch) {
      const int end = std::min(m, begin + cfg.batch_size);
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(result.model.num_params());
      for (int b = begin; b < end; ++b) {
        EstimatorConfig est;
        est.samples = cfg.samples;
        est.baseline = cfg.baseline;
        est.seed = cfg.seed;
        est.threads = cfg.threads;
        est.stream_keys = {kSampleStream, static_cast<uint64_t>(epoch),
                           static_cast<uint64_t>(batch),
                           static_cast<uint64_t>(order[b])};
        RunningBaseline local(1);
        const InstanceGradient g = instance_value_gradient(
            result.model, data.train[order[b]], objective, constraint, reg,
            est,
            cfg.baseline_scope == BaselineScope::kGlobal ? &global_baseline
                                                         : &local);
        // The loss is -E[f], so descend along -grad E[f].
        grad -= g.param_grad;
        loss_sum -= g.mean_value;
      }
      grad /= static_cast<double>(end - begin);
      adam.step(result.model.mutable_params(), grad);
    }
    record(epoch, loss_sum / m);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Oracle-query learning

CoverageInstance make_leadership_coverage(uint64_t seed) {
  constexpr int kPeople = 20;
  constexpr int kCompanies = 24;
  RngStream rng(seed, {kInitStream});
  std::vector<std::vector<int>> leads(kPeople);
  for (int p = 0; p < kPeople; ++p) {
    const int count = 1 + static_cast<int>(rng.uniform_index(3));
    while (static_cast<int>(leads[p].size()) < count) {
      const int c = static_cast<int>(rng.uniform_index(kCompanies));
      if (std::find(leads[p].begin(), leads[p].end(), c) == leads[p].end()) {
        leads[p].push_back(c);
      }
    }
  }
  // Companies are numbered from 1: odd ones weigh 1, even ones 0.1.
  ParamVector weights(kCompanies);
  for (int i = 0; i < kCompanies; ++i) weights[i] = (i % 2 == 0) ? 1.0 : 0.1;
  std::vector<int> block_of(kPeople);
  for (int p = 0; p < kPeople; ++p) block_of[p] = p < kPeople / 2 ? 0 : 1;
  return {WeightedCoverage(kCompanies, std::move(leads), std::move(weights)),
          PartitionMatroid(std::move(block_of), {2, 2})};
}

double random_set_value(const SetOracle& oracle,
                        const ConstraintSystem& constraint, int draws,
                        uint64_t seed) {
  if (draws < 1) throw ConfigError("need at least one random draw");
  RngStream rng(seed);
  double total = 0.0;
  for (int d = 0; d < draws; ++d) {
    total += oracle(random_maximal_set(constraint, rng));
  }
  return total / draws;
}

OracleLearnResult learn_with_oracle_queries(const SetOracle& oracle,
                                            const DeepSubmodular& model,
                                            const ConstraintSystem& constraint,
                                            const Regularizer& reg,
                                            const OracleLearnConfig& cfg) {
  if (cfg.rounds < 0 || cfg.samples < 1) {
    throw ConfigError("invalid oracle-learning configuration");
  }
  if (cfg.hidden != model.hidden()) {
    throw ConfigError("model hidden width does not match configuration");
  }
  const auto start = Clock::now();
  RngStream init_rng(cfg.seed, {kInitStream});
  OracleLearnResult result;
  result.params.resize(model.param_dim());
  for (Eigen::Index i = 0; i < result.params.size(); ++i) {
    result.params[i] = init_rng.uniform(cfg.init_lo, cfg.init_hi);
  }
  AdamOptimizer adam(model.param_dim(), cfg.adam);

  auto record = [&](int round) {
    const ElementSet chosen =
        deterministic_greedy(model, constraint, result.params);
    result.history.push_back({round, model.eval(chosen, result.params),
                              oracle(chosen), seconds_since(start)});
  };
  record(0);

  for (int round = 1; round <= cfg.rounds; ++round) {
    EstimatorConfig est;
    est.samples = cfg.samples;
    est.baseline = cfg.baseline;
    est.seed = cfg.seed;
    est.threads = cfg.threads;
    est.stream_keys = {kSampleStream, static_cast<uint64_t>(round)};
    const SampledTraces sampled =
        sample_traces(model, constraint, reg, result.params, est);

    RngStream noise(cfg.seed, {kNoiseStream, static_cast<uint64_t>(round)});
    std::vector<Eigen::VectorXd> answers(sampled.traces.size());
    for (std::size_t j = 0; j < answers.size(); ++j) {
      const ElementSet set = sampled.traces[j].as_set();
      if (!constraint.is_feasible(set)) {
        throw InputError("oracle queried at an infeasible set");
      }
      double value = oracle(set);
      if (cfg.noisy) value += noise.normal();
      answers[j] = Eigen::VectorXd::Constant(1, value);
    }
    const GradientEstimate g =
        combine_score_function(answers, sampled.score, cfg.baseline, nullptr);
    // Ascend E[oracle(S)], then project back onto nonnegative weights.
    const Eigen::VectorXd descent = -g.estimate.row(0).transpose();
    adam.step(result.params, descent);
    result.params = result.params.cwiseMax(0.0);
    record(round);
  }
  return result;
}

}  // namespace smoothgreedy
