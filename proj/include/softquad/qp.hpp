// Copyright 2026 The softquad Authors
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

#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace softquad {

// Bounds at or beyond this magnitude are treated as infinite.
inline constexpr double kQpInfinity = 1e20;

// min 1/2 x'Px + q'x  s.t.  l <= Ax <= u  (l_j = u_j encodes an equality).
struct QuadraticProgram {
  Eigen::MatrixXd P;
  Eigen::VectorXd q;
  Eigen::MatrixXd A;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int num_variables() const { return static_cast<int>(q.size()); }
  int num_constraints() const { return static_cast<int>(lower.size()); }
  double objective(const Eigen::VectorXd& x) const;
  void validate() const;
};

enum class QpStatus { kSolved, kMaxIter, kPrimalInfeasible, kDualInfeasible };

std::string to_string(QpStatus status);

struct QpSolution {
  Eigen::VectorXd x;
  Eigen::VectorXd y;  // constraint multipliers
  QpStatus status = QpStatus::kMaxIter;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective = 0.0;
};

struct QpSettings {
  double rho = 0.1;        // ADMM penalty (fixed)
  double sigma = 1e-6;     // proximal regularization
  double alpha = 1.6;      // over-relaxation
  int ruiz_sweeps = 10;    // diagonal equilibration sweeps
  double eps_abs = 1e-5;
  double eps_rel = 1e-5;
  double eps_infeasible = 1e-7;
  int max_iter = 4000;
  int check_interval = 10;  // residual/certificate test period
  bool polish = true;       // active-set refinement of the ADMM solution
};

// Operator-splitting solver; the factorization is built once at setup and
// reused across iterations and across warm-started re-solves that change
// only q, l, u.
class QpSolver {
 public:
  explicit QpSolver(const QuadraticProgram& qp, const QpSettings& settings = {});

  // Replaces the cost vector and bounds, keeping P, A and the factorization.
  void update_vectors(const Eigen::VectorXd& q, const Eigen::VectorXd& lower,
                      const Eigen::VectorXd& upper);
  void warm_start(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

  QpSolution solve();

 private:
  void equilibrate();
  void factor();
  bool polish(QpSolution& solution) const;

  QuadraticProgram qp_;        // original (unscaled) data
  QpSettings settings_;
  Eigen::VectorXd d_, e_;      // variable / constraint scalings
  Eigen::MatrixXd scaled_p_, scaled_a_;
  Eigen::VectorXd scaled_q_, scaled_l_, scaled_u_;
  Eigen::VectorXd rho_;        // per-row penalty weights
  double rho_scale_ = 1.0;     // residual-balancing global penalty scale
  Eigen::LDLT<Eigen::MatrixXd> kkt_;
  Eigen::VectorXd x_, z_, y_;  // scaled iterates
};

QpSolution solve(const QuadraticProgram& qp, double eps_abs = 1e-5,
                 double eps_rel = 1e-5, int max_iter = 4000);

struct KktReport {
  double stationarity = 0.0;
  double feasibility = 0.0;
  double complementarity = 0.0;

  bool passes(double tol) const {
    return stationarity <= tol && feasibility <= tol && complementarity <= tol;
  }
};

// Residuals of the KKT conditions at x, with multipliers fit on the rows
// active at x (least squares).
KktReport kkt_check(const QuadraticProgram& qp, const Eigen::VectorXd& x,
                    double tol);

// Plain-text dump for offline cross-checking.
void dump_qp(const QuadraticProgram& qp, std::ostream& out);

}  // namespace softquad
