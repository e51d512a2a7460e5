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

#include "smoothgreedy/regularizers.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "smoothgreedy/errors.h"

namespace smoothgreedy {

namespace {

void check_gains(const Eigen::VectorXd& g) {
  if (g.size() == 0) {
    throw InputError("regularized argmax over an empty candidate set");
  }
  if (!g.allFinite()) throw InputError("gain vector has non-finite entries");
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("regularizer epsilon must be positive and finite");
  }
}

}  // namespace

Eigen::MatrixXd kkt_simplex_jacobian(const Eigen::MatrixXd& hessian,
                                     const std::vector<char>& face) {
  const int n = static_cast<int>(hessian.rows());
  std::vector<int> idx;
  for (int i = 0; i < n; ++i) {
    if (face[i]) idx.push_back(i);
  }
  const int m = static_cast<int>(idx.size());
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) kkt(a, b) = hessian(idx[a], idx[b]);
    kkt(a, m) = 1.0;
    kkt(m, a) = 1.0;
  }
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m + 1, m);
  rhs.topRows(m).setIdentity();
  const Eigen::MatrixXd sol = kkt.fullPivLu().solve(rhs);

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) jac(idx[a], idx[b]) = sol(a, b);
  }
  return jac;
}

double simplex_projection_threshold(const Eigen::VectorXd& y) {
  std::vector<double> sorted(y.data(), y.data() + y.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) tau = candidate;
  }
  return tau;
}

// ---------------------------------------------------------------------------

EntropyRegularizer::EntropyRegularizer(double epsilon) : epsilon_(epsilon) {
  check_epsilon(epsilon);
}

SimplexSolution EntropyRegularizer::solve(const Eigen::VectorXd& g) const {
  check_gains(g);
  const Eigen::VectorXd scaled = g / epsilon_;
  const double top = scaled.maxCoeff();
  const double log_norm =
      top + std::log((scaled.array() - top).exp().sum());

  SimplexSolution sol;
  sol.log_p = scaled.array() - log_norm;
  sol.p = sol.log_p.array().exp();
  sol.p /= sol.p.sum();
  sol.in_face.assign(g.size(), 1);
  // eps (ln p + 1) - g + mu = 0.
  sol.mu = epsilon_ * (log_norm - 1.0);
  sol.lambda = Eigen::VectorXd::Zero(g.size());
  return sol;
}

SimplexJacobian EntropyRegularizer::jacobian(
    const SimplexSolution& sol) const {
  SimplexJacobian out;
  out.matrix = (Eigen::MatrixXd(sol.p.asDiagonal()) - sol.p * sol.p.transpose()) /
               epsilon_;
  return out;
}

double EntropyRegularizer::delta_bound(int n_k) const {
  if (n_k < 1) throw InputError("delta_bound needs at least one candidate");
  return epsilon_ * std::log(static_cast<double>(n_k));
}

double EntropyRegularizer::value(const Eigen::VectorXd& p) const {
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) total += p[i] * std::log(p[i]);
  }
  return epsilon_ * total;
}

// ---------------------------------------------------------------------------

QuadraticRegularizer::QuadraticRegularizer(double epsilon)
    : epsilon_(epsilon) {
  check_epsilon(epsilon);
}

SimplexSolution QuadraticRegularizer::solve(const Eigen::VectorXd& g) const {
  check_gains(g);
  const int n = static_cast<int>(g.size());
  const Eigen::VectorXd y = g / (2.0 * epsilon_);
  const double tau = simplex_projection_threshold(y);

  SimplexSolution sol;
  sol.p.resize(n);
  sol.log_p.resize(n);
  sol.lambda.resize(n);
  sol.in_face.assign(n, 0);
  // 2 eps p - g - lambda + mu = 0 with mu = 2 eps tau.
  sol.mu = 2.0 * epsilon_ * tau;
  for (int i = 0; i < n; ++i) {
    const double slack = y[i] - tau;
    sol.p[i] = std::max(slack, 0.0);
    sol.lambda[i] = std::max(-2.0 * epsilon_ * slack, 0.0);
    const bool boundary = sol.p[i] <= kComplementarityTol &&
                          sol.lambda[i] <= kComplementarityTol;
    if (boundary) sol.degenerate = true;
    sol.in_face[i] = (sol.p[i] > 0.0 || boundary) ? 1 : 0;
  }
  const double total = sol.p.sum();
  sol.p /= total;
  for (int i = 0; i < n; ++i) {
    sol.log_p[i] = sol.p[i] > 0.0 ? std::log(sol.p[i])
                                  : -std::numeric_limits<double>::infinity();
  }
  return sol;
}

SimplexJacobian QuadraticRegularizer::jacobian(
    const SimplexSolution& sol) const {
  const int n = sol.size();
  const Eigen::MatrixXd hessian =
      2.0 * epsilon_ * Eigen::MatrixXd::Identity(n, n);
  return {kkt_simplex_jacobian(hessian, sol.in_face), sol.degenerate};
}

double QuadraticRegularizer::delta_bound(int n_k) const {
  if (n_k < 1) throw InputError("delta_bound needs at least one candidate");
  return epsilon_ * (1.0 - 1.0 / static_cast<double>(n_k));
}

double QuadraticRegularizer::value(const Eigen::VectorXd& p) const {
  return epsilon_ * p.squaredNorm();
}

std::unique_ptr<Regularizer> make_regularizer(const std::string& kind,
                                              double epsilon) {
  if (kind == "entropy") return std::make_unique<EntropyRegularizer>(epsilon);
  if (kind == "quadratic") {
    return std::make_unique<QuadraticRegularizer>(epsilon);
  }
  throw ConfigError("unknown regularizer kind '" + kind + "'");
}

}  // namespace smoothgreedy
