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

#ifndef SMOOTHGREEDY_REGULARIZERS_H_
#define SMOOTHGREEDY_REGULARIZERS_H_

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace smoothgreedy {

// Maximizer of <g, p> - Omega(p) over the probability simplex together with
// its KKT multipliers:  grad Omega(p) - g - lambda + mu * 1 = 0.
struct SimplexSolution {
  Eigen::VectorXd p;
  // ln p, computed without taking the log of a rounded probability where the
  // regularizer allows it. -inf on zero entries.
  Eigen::VectorXd log_p;
  // Entries that take part in the Jacobian (p_i > 0, or flagged boundary).
  std::vector<char> in_face;
  double mu = 0.0;
  Eigen::VectorXd lambda;
  // Strict complementarity failed for at least one entry.
  bool degenerate = false;

  int size() const { return static_cast<int>(p.size()); }
};

struct SimplexJacobian {
  Eigen::MatrixXd matrix;  // d p / d g, n_k x n_k
  bool degenerate = false;
};

// Strictly convex regularizer Omega on the simplex.
class Regularizer {
 public:
  virtual ~Regularizer() = default;

  virtual std::string kind() const = 0;
  virtual double epsilon() const = 0;

  // Throws InputError on empty or non-finite g.
  virtual SimplexSolution solve(const Eigen::VectorXd& g) const = 0;
  virtual SimplexJacobian jacobian(const SimplexSolution& sol) const = 0;
  // delta with Omega(p) - Omega(q) <= delta for all p, q in the simplex.
  virtual double delta_bound(int n_k) const = 0;
  // Omega(p); used by optimality checks.
  virtual double value(const Eigen::VectorXd& p) const = 0;
};

// Omega(p) = eps * sum_i p_i ln p_i. The maximizer is softmax(g / eps).
class EntropyRegularizer final : public Regularizer {
 public:
  explicit EntropyRegularizer(double epsilon);

  std::string kind() const override { return "entropy"; }
  double epsilon() const override { return epsilon_; }
  SimplexSolution solve(const Eigen::VectorXd& g) const override;
  SimplexJacobian jacobian(const SimplexSolution& sol) const override;
  double delta_bound(int n_k) const override;
  double value(const Eigen::VectorXd& p) const override;

 private:
  double epsilon_;
};

// Omega(p) = eps * ||p||^2. The maximizer is the Euclidean projection of
// g / (2 eps) onto the simplex.
class QuadraticRegularizer final : public Regularizer {
 public:
  explicit QuadraticRegularizer(double epsilon);

  std::string kind() const override { return "quadratic"; }
  double epsilon() const override { return epsilon_; }
  SimplexSolution solve(const Eigen::VectorXd& g) const override;
  SimplexJacobian jacobian(const SimplexSolution& sol) const override;
  double delta_bound(int n_k) const override;
  double value(const Eigen::VectorXd& p) const override;

 private:
  double epsilon_;
};

// Tolerance for declaring p_i = 0 and lambda_i = 0 simultaneously.
inline constexpr double kComplementarityTol = 1e-10;

// Differentiates the KKT system of a simplex-constrained problem restricted
// to `face` by solving the bordered system
//   [ H_FF  1 ] [ dp/dg_F ]   [ I ]
//   [ 1^T   0 ] [ dmu/dg  ] = [ 0 ]
// where H is the Hessian of Omega at the solution. Rows and columns outside
// the face are zero.
Eigen::MatrixXd kkt_simplex_jacobian(const Eigen::MatrixXd& hessian,
                                     const std::vector<char>& face);

// Euclidean projection of y onto the probability simplex (sort and
// threshold). Returns the threshold tau with p = max(y - tau, 0).
double simplex_projection_threshold(const Eigen::VectorXd& y);

std::unique_ptr<Regularizer> make_regularizer(const std::string& kind,
                                              double epsilon);

}  // namespace smoothgreedy

#endif  // SMOOTHGREEDY_REGULARIZERS_H_
