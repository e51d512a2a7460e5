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
#include "smoothgreedy/regularizers.h"
#include "smoothgreedy/rng.h"
#include "test_util.h"

namespace sg = smoothgreedy;
using sg::testing::max_abs;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(xs.size());
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  return (Eigen::MatrixXd(2, 2) << a, b, c, d).finished();
}

Eigen::VectorXd random_gains(int n, sg::RngStream& rng) {
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) g[i] = rng.uniform(-1.0, 1.0);
  return g;
}

}  // namespace

TEST_CASE("entropy solve closed forms") {
  const sg::EntropyRegularizer reg(1.0);
  CHECK(max_abs(reg.solve(vec({std::log(2.0), 0.0})).p - vec({2.0 / 3, 1.0 / 3})) <
        1e-15);
  for (double c : {-5.0, 0.0, 3.0}) {
    for (double eps : {0.01, 1.0}) {
      const auto p = sg::EntropyRegularizer(eps).solve(vec({c, c, c})).p;
      CHECK(max_abs(p - Eigen::VectorXd::Constant(3, 1.0 / 3)) < 1e-15);
    }
  }
}

TEST_CASE("entropy is stable for huge gains and reports log-probabilities") {
  const sg::EntropyRegularizer reg(1e-6);
  const auto sol = reg.solve(vec({1000.0, 999.0, -1000.0}));
  CHECK(sol.p.allFinite());
  CHECK(sol.p[0] == doctest::Approx(1.0));
  CHECK(sol.log_p[1] == doctest::Approx(-1.0 / 1e-6));
  CHECK(std::isfinite(sol.log_p[2]));
}

TEST_CASE("quadratic solve") {
  const sg::QuadraticRegularizer reg(0.5);
  const auto sol = reg.solve(vec({0.4, 0.0}));
  CHECK(max_abs(sol.p - vec({0.7, 0.3})) < 1e-15);
  // A dominant gain leaves the others at exactly zero.
  const auto sparse = reg.solve(vec({3.0, 0.0, 0.1}));
  CHECK(sparse.p[0] == 1.0);
  CHECK(sparse.p[1] == 0.0);
  CHECK(sparse.lambda[1] > 0.0);
  CHECK_FALSE(sparse.in_face[1]);
}

TEST_CASE("solve rejects empty and non-finite gains") {
  const sg::EntropyRegularizer e(1.0);
  const sg::QuadraticRegularizer q(1.0);
  CHECK_THROWS_AS(e.solve(Eigen::VectorXd()), sg::InputError);
  CHECK_THROWS_AS(q.solve(Eigen::VectorXd()), sg::InputError);
  CHECK_THROWS_AS(e.solve(vec({NAN, 0.0})), sg::InputError);
  CHECK_THROWS_AS(q.solve(vec({INFINITY, 0.0})), sg::InputError);
  CHECK_THROWS(sg::EntropyRegularizer(0.0));
  CHECK_THROWS(sg::make_regularizer("cubic", 1.0));
}

TEST_CASE("closed-form Jacobians") {
  const sg::EntropyRegularizer e(1.0);
  CHECK(max_abs(e.jacobian(e.solve(vec({0.0, 0.0}))).matrix -
                mat2(0.25, -0.25, -0.25, 0.25)) < 1e-15);
  CHECK(max_abs(e.jacobian(e.solve(vec({std::log(2.0), 0.0}))).matrix -
                mat2(2.0 / 9, -2.0 / 9, -2.0 / 9, 2.0 / 9)) < 1e-15);
  const sg::QuadraticRegularizer q(0.5);
  CHECK(max_abs(q.jacobian(q.solve(vec({0.1, 0.0}))).matrix -
                mat2(0.5, -0.5, -0.5, 0.5)) < 1e-14);
}

TEST_CASE("degenerate complementarity is flagged") {
  // y = g / (2 eps) = (1, 0): p = (1, 0) and the multiplier of the second
  // coordinate vanishes as well.
  const sg::QuadraticRegularizer q(0.5);
  const auto sol = q.solve(vec({1.0, 0.0}));
  CHECK(sol.p[1] == 0.0);
  CHECK(sol.degenerate);
  CHECK(sol.in_face[1]);
  CHECK(q.jacobian(sol).degenerate);
}

TEST_CASE("delta bounds") {
  CHECK(sg::EntropyRegularizer(0.2).delta_bound(3) ==
        doctest::Approx(0.2 * std::log(3.0)));
  CHECK(sg::EntropyRegularizer(0.2).delta_bound(3) ==
        doctest::Approx(0.21972).epsilon(1e-5));
  CHECK(sg::EntropyRegularizer(0.7).delta_bound(1) == 0.0);
  CHECK(sg::QuadraticRegularizer(1.0).delta_bound(4) == doctest::Approx(0.75));
}

TEST_CASE("feasibility and optimality on random gains") {
  sg::RngStream rng(31);
  for (int probe = 0; probe < 200; ++probe) {
    const int n = 1 + static_cast<int>(rng.uniform_index(8));
    const double eps = rng.uniform(0.05, 2.0);
    const auto reg = sg::make_regularizer(probe % 2 ? "quadratic" : "entropy",
                                          eps);
    const Eigen::VectorXd g = random_gains(n, rng);
    const Eigen::VectorXd p = reg->solve(g).p;
    CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
    CHECK(p.minCoeff() >= 0.0);
    const double best = g.dot(p) - reg->value(p);
    for (int d = 0; d < 100 && n > 1; ++d) {
      // Feasible direction: move mass between two coordinates.
      const int i = static_cast<int>(rng.uniform_index(n));
      int j = static_cast<int>(rng.uniform_index(n - 1));
      if (j >= i) ++j;
      const double step = std::min(1e-4 / std::sqrt(2.0), p[j]);
      if (step <= 0.0) continue;
      Eigen::VectorXd q = p;
      q[i] += step;
      q[j] -= step;
      CHECK(g.dot(q) - reg->value(q) <= best + 1e-12);
    }
  }
}

TEST_CASE("Jacobians match finite differences and conserve probability") {
  sg::RngStream rng(32);
  int probes = 0;
  while (probes < 100) {
    const int n = 1 + static_cast<int>(rng.uniform_index(7));
    const double eps = rng.uniform(0.05, 2.0);
    const auto reg = sg::make_regularizer(probes % 2 ? "quadratic" : "entropy",
                                          eps);
    const Eigen::VectorXd g = random_gains(n, rng);
    const auto sol = reg->solve(g);
    if (sol.degenerate) continue;
    ++probes;
    const Eigen::MatrixXd jac = reg->jacobian(sol).matrix;
    Eigen::MatrixXd fd(n, n);
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd up = g, down = g;
      up[j] += 1e-6;
      down[j] -= 1e-6;
      fd.col(j) = (reg->solve(up).p - reg->solve(down).p) / 2e-6;
    }
    CHECK(max_abs(jac - fd) <= 1e-6);
    CHECK(jac.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("generic KKT Jacobian matches the softmax closed form") {
  // Entropy Hessian is eps * diag(1/p); the bordered system must reproduce
  // eps^-1 (diag p - p p^T).
  const sg::EntropyRegularizer reg(0.3);
  const auto sol = reg.solve(vec({0.2, -0.4, 0.9}));
  const Eigen::MatrixXd hessian =
      (0.3 * sol.p.cwiseInverse()).asDiagonal().toDenseMatrix();
  const Eigen::MatrixXd kkt =
      sg::kkt_simplex_jacobian(hessian, std::vector<char>(3, 1));
  CHECK(max_abs(kkt - reg.jacobian(sol).matrix) < 1e-12);
}

TEST_CASE("small temperature concentrates on the argmax") {
  sg::RngStream rng(33);
  const sg::EntropyRegularizer reg(1e-6);
  for (int probe = 0; probe < 50; ++probe) {
    const int n = 2 + static_cast<int>(rng.uniform_index(6));
    Eigen::VectorXd g = random_gains(n, rng);
    Eigen::Index arg;
    g.maxCoeff(&arg);
    for (int i = 0; i < n; ++i) {
      if (i != arg) g[i] = std::min(g[i], g[arg] - 1e-3);
    }
    CHECK(reg.solve(g).p[arg] >= 1.0 - 1e-9);
  }
}

TEST_CASE("simplex projection threshold") {
  // Projection of (1.5, 1.3, 0.8) has support on the first two coordinates.
  CHECK(sg::simplex_projection_threshold(vec({1.5, 1.3, 0.8})) ==
        doctest::Approx(0.9));
}
