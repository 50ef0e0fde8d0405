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

#include "softquad/qp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace softquad {

namespace {

double inf_norm(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

bool is_finite_bound(double b) { return std::abs(b) < kQpInfinity; }

}  // namespace

double QuadraticProgram::objective(const Eigen::VectorXd& x) const {
  return 0.5 * x.dot(P * x) + q.dot(x);
}

void QuadraticProgram::validate() const {
  const int n = num_variables();
  const int m = num_constraints();
  if (P.rows() != n || P.cols() != n)
    throw std::invalid_argument("cost matrix dimension mismatch");
  if (A.rows() != m || (m > 0 && A.cols() != n))
    throw std::invalid_argument("constraint matrix dimension mismatch");
  if (upper.size() != m)
    throw std::invalid_argument("bound dimension mismatch");
  const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
  if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw std::invalid_argument("cost matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P,
                                                    Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8 * scale)
    throw std::invalid_argument("cost matrix must be positive semidefinite");
  for (int j = 0; j < m; ++j)
    if (lower[j] > upper[j])
      throw std::invalid_argument("lower bound exceeds upper bound");
}

std::string to_string(QpStatus status) {
  switch (status) {
    case QpStatus::kSolved: return "solved";
    case QpStatus::kMaxIter: return "max_iter";
    case QpStatus::kPrimalInfeasible: return "primal_infeasible";
    case QpStatus::kDualInfeasible: return "dual_infeasible";
  }
  throw std::logic_error("unhandled status");
}

QpSolver::QpSolver(const QuadraticProgram& qp, const QpSettings& settings)
    : qp_(qp), settings_(settings) {
  qp_.validate();
  equilibrate();
  // Fixed per-row penalty: equality rows take a stiffer weight and rows
  // without finite bounds a loose one, as is conventional for this solver
  // family.
  const int m = qp_.num_constraints();
  rho_.resize(m);
  for (int i = 0; i < m; ++i) {
    if (qp_.lower[i] == qp_.upper[i])
      rho_[i] = 1e3 * settings_.rho;
    else if (!is_finite_bound(qp_.lower[i]) && !is_finite_bound(qp_.upper[i]))
      rho_[i] = 1e-6 * settings_.rho;
    else
      rho_[i] = settings_.rho;
  }
  rho_scale_ = 1.0;
  factor();
  x_ = Eigen::VectorXd::Zero(qp_.num_variables());
  z_ = Eigen::VectorXd::Zero(qp_.num_constraints());
  y_ = Eigen::VectorXd::Zero(qp_.num_constraints());
}

void QpSolver::factor() {
  const Eigen::MatrixXd reduced =
      scaled_p_ +
      settings_.sigma * Eigen::MatrixXd::Identity(qp_.num_variables(),
                                                  qp_.num_variables()) +
      scaled_a_.transpose() * (rho_scale_ * rho_).asDiagonal() * scaled_a_;
  kkt_.compute(reduced);
  if (kkt_.info() != Eigen::Success)
    throw std::runtime_error("failed to factor the ADMM linear system");
}

void QpSolver::equilibrate() {
  const int n = qp_.num_variables();
  const int m = qp_.num_constraints();
  d_ = Eigen::VectorXd::Ones(n);
  e_ = Eigen::VectorXd::Ones(m);
  scaled_p_ = qp_.P;
  scaled_a_ = qp_.A;
  for (int sweep = 0; sweep < settings_.ruiz_sweeps; ++sweep) {
    for (int j = 0; j < n; ++j) {
      double norm = inf_norm(scaled_p_.col(j));
      if (m > 0) norm = std::max(norm, inf_norm(scaled_a_.col(j)));
      const double delta = norm > 1e-12 ? 1.0 / std::sqrt(norm) : 1.0;
      d_[j] *= delta;
      scaled_p_.col(j) *= delta;
      scaled_p_.row(j) *= delta;
      scaled_a_.col(j) *= delta;
    }
    for (int i = 0; i < m; ++i) {
      const double norm = inf_norm(scaled_a_.row(i).transpose());
      const double delta = norm > 1e-12 ? 1.0 / std::sqrt(norm) : 1.0;
      e_[i] *= delta;
      scaled_a_.row(i) *= delta;
    }
  }
  scaled_q_ = d_.cwiseProduct(qp_.q);
  scaled_l_.resize(m);
  scaled_u_.resize(m);
  for (int i = 0; i < m; ++i) {
    scaled_l_[i] =
        is_finite_bound(qp_.lower[i]) ? e_[i] * qp_.lower[i] : qp_.lower[i];
    scaled_u_[i] =
        is_finite_bound(qp_.upper[i]) ? e_[i] * qp_.upper[i] : qp_.upper[i];
  }
}

void QpSolver::update_vectors(const Eigen::VectorXd& q,
                              const Eigen::VectorXd& lower,
                              const Eigen::VectorXd& upper) {
  if (q.size() != qp_.q.size() || lower.size() != qp_.lower.size() ||
      upper.size() != qp_.upper.size())
    throw std::invalid_argument("vector update dimension mismatch");
  qp_.q = q;
  qp_.lower = lower;
  qp_.upper = upper;
  for (int j = 0; j < lower.size(); ++j)
    if (lower[j] > upper[j])
      throw std::invalid_argument("lower bound exceeds upper bound");
  scaled_q_ = d_.cwiseProduct(q);
  for (int i = 0; i < lower.size(); ++i) {
    scaled_l_[i] = is_finite_bound(lower[i]) ? e_[i] * lower[i] : lower[i];
    scaled_u_[i] = is_finite_bound(upper[i]) ? e_[i] * upper[i] : upper[i];
  }
}

void QpSolver::warm_start(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != x_.size() || y.size() != y_.size())
    throw std::invalid_argument("warm start dimension mismatch");
  x_ = d_.cwiseInverse().cwiseProduct(x);
  y_ = e_.cwiseInverse().cwiseProduct(y);
  z_ = scaled_a_ * x_;
}

QpSolution QpSolver::solve() {
  const int n = qp_.num_variables();
  const int m = qp_.num_constraints();
  const double sigma = settings_.sigma;
  const double alpha = settings_.alpha;
  QpSolution solution;
  solution.status = QpStatus::kMaxIter;

  Eigen::VectorXd x_prev_u = d_.cwiseProduct(x_);
  Eigen::VectorXd y_prev_u = e_.cwiseProduct(y_);
  int iter = 0;
  for (iter = 1; iter <= settings_.max_iter; ++iter) {
    const Eigen::VectorXd rho_vec = rho_scale_ * rho_;
    const Eigen::VectorXd rhs =
        sigma * x_ - scaled_q_ +
        scaled_a_.transpose() * (rho_vec.cwiseProduct(z_) - y_);
    const Eigen::VectorXd x_tilde = kkt_.solve(rhs);
    const Eigen::VectorXd z_tilde = scaled_a_ * x_tilde;
    x_ = alpha * x_tilde + (1.0 - alpha) * x_;
    const Eigen::VectorXd z_relaxed = alpha * z_tilde + (1.0 - alpha) * z_;
    const Eigen::VectorXd z_new =
        (z_relaxed + y_.cwiseQuotient(rho_vec)).cwiseMax(scaled_l_).cwiseMin(
            scaled_u_);
    y_ += rho_vec.cwiseProduct(z_relaxed - z_new);
    z_ = z_new;

    if (iter % settings_.check_interval != 0 && iter != settings_.max_iter)
      continue;

    // Unscaled iterates for termination and certificate tests.
    const Eigen::VectorXd x_u = d_.cwiseProduct(x_);
    const Eigen::VectorXd z_u = e_.cwiseInverse().cwiseProduct(z_);
    const Eigen::VectorXd y_u = e_.cwiseProduct(y_);
    const Eigen::VectorXd ax = qp_.A * x_u;
    const Eigen::VectorXd px = qp_.P * x_u;
    const Eigen::VectorXd aty = qp_.A.transpose() * y_u;
    const double r_prim = m > 0 ? inf_norm(ax - z_u) : 0.0;
    const double r_dual = inf_norm(px + qp_.q + aty);
    const double eps_prim =
        settings_.eps_abs +
        settings_.eps_rel * std::max(inf_norm(ax), inf_norm(z_u));
    const double eps_dual =
        settings_.eps_abs +
        settings_.eps_rel *
            std::max({inf_norm(px), inf_norm(aty), inf_norm(qp_.q)});
    solution.primal_residual = r_prim;
    solution.dual_residual = r_dual;
    if (r_prim <= eps_prim && r_dual <= eps_dual) {
      solution.status = QpStatus::kSolved;
      solution.x = x_u;
      solution.y = y_u;
      break;
    }
    // Periodic exact-finish attempt: if the active set guessed from the
    // current iterate yields a signed KKT point, it is the global optimum.
    if (settings_.polish && iter % (5 * settings_.check_interval) == 0) {
      QpSolution candidate;
      candidate.x = x_u;
      candidate.y = y_u;
      if (polish(candidate)) {
        solution = candidate;
        solution.status = QpStatus::kSolved;
        break;
      }
    }

    // Primal infeasibility certificate from the dual-variable drift.
    const Eigen::VectorXd dy = y_u - y_prev_u;
    const double dy_norm = inf_norm(dy);
    if (dy_norm > settings_.eps_infeasible) {
      bool certificate =
          inf_norm(qp_.A.transpose() * dy) <= settings_.eps_infeasible * dy_norm;
      double support = 0.0;
      for (int i = 0; i < m && certificate; ++i) {
        if (dy[i] > 0.0) {
          if (!is_finite_bound(qp_.upper[i])) {
            certificate = dy[i] <= settings_.eps_infeasible * dy_norm;
          } else {
            support += qp_.upper[i] * dy[i];
          }
        } else if (dy[i] < 0.0) {
          if (!is_finite_bound(qp_.lower[i])) {
            certificate = -dy[i] <= settings_.eps_infeasible * dy_norm;
          } else {
            support += qp_.lower[i] * dy[i];
          }
        }
      }
      if (certificate && support <= -settings_.eps_infeasible * dy_norm) {
        solution.status = QpStatus::kPrimalInfeasible;
        solution.x = x_u;
        solution.y = dy;
        break;
      }
    }

    // Dual infeasibility certificate from the primal-variable drift.
    const Eigen::VectorXd dx = x_u - x_prev_u;
    const double dx_norm = inf_norm(dx);
    if (dx_norm > settings_.eps_infeasible) {
      const double eps = settings_.eps_infeasible * dx_norm;
      bool certificate = inf_norm(qp_.P * dx) <= eps && qp_.q.dot(dx) <= -eps;
      const Eigen::VectorXd adx = qp_.A * dx;
      for (int i = 0; i < m && certificate; ++i) {
        const bool lo = is_finite_bound(qp_.lower[i]);
        const bool hi = is_finite_bound(qp_.upper[i]);
        if (lo && hi)
          certificate = std::abs(adx[i]) <= eps;
        else if (lo)
          certificate = adx[i] >= -eps;
        else if (hi)
          certificate = adx[i] <= eps;
      }
      if (certificate) {
        solution.status = QpStatus::kDualInfeasible;
        solution.x = dx;
        solution.y = y_u;
        break;
      }
    }
    // Residual balancing: scale the penalty toward whichever residual lags
    // and refactor when the imbalance is substantial.
    if (m > 0) {
      const double prim_rel =
          r_prim / std::max({inf_norm(ax), inf_norm(z_u), 1e-12});
      const double dual_rel =
          r_dual /
          std::max({inf_norm(px), inf_norm(aty), inf_norm(qp_.q), 1e-12});
      if (prim_rel > 0.0 && dual_rel > 0.0) {
        const double ratio = std::sqrt(prim_rel / dual_rel);
        if (ratio > 5.0 || ratio < 0.2) {
          rho_scale_ = std::clamp(rho_scale_ * std::min(std::max(ratio, 1e-3),
                                                        1e3),
                                  1e-6, 1e6);
          factor();
        }
      }
    }
    x_prev_u = x_u;
    y_prev_u = y_u;
  }

  solution.iterations = std::min(iter, settings_.max_iter);
  if (solution.x.size() == 0) {
    solution.x = d_.cwiseProduct(x_);
    solution.y = e_.cwiseProduct(y_);
  }
  if (solution.status == QpStatus::kSolved && settings_.polish)
    polish(solution);
  solution.objective = qp_.objective(solution.x);
  return solution;
}

bool QpSolver::polish(QpSolution& solution) const {
  const int n = qp_.num_variables();
  const int m = qp_.num_constraints();
  const Eigen::VectorXd ax = qp_.A * solution.x;

  double bound_scale = 1.0;
  for (int i = 0; i < m; ++i) {
    if (is_finite_bound(qp_.lower[i]))
      bound_scale = std::max(bound_scale, std::abs(qp_.lower[i]));
    if (is_finite_bound(qp_.upper[i]))
      bound_scale = std::max(bound_scale, std::abs(qp_.upper[i]));
  }
  const double slack = 1e-7 * bound_scale;

  // Working set: -1 free, 0 pinned at lower, 1 pinned at upper. Refined by
  // adding violated rows and dropping rows with wrong-signed multipliers
  // until the equality-constrained KKT point certifies the optimum.
  const auto refine = [&](std::vector<int> side) -> bool {
    for (int pass = 0; pass < 30; ++pass) {
      std::vector<int> active;
      for (int i = 0; i < m; ++i)
        if (side[i] >= 0) active.push_back(i);
      const int k = static_cast<int>(active.size());
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + k, n + k);
      kkt.topLeftCorner(n, n) =
          qp_.P + 1e-12 * Eigen::MatrixXd::Identity(n, n);
      Eigen::VectorXd rhs(n + k);
      rhs.head(n) = -qp_.q;
      for (int r = 0; r < k; ++r) {
        const int i = active[r];
        kkt.block(n + r, 0, 1, n) = qp_.A.row(i);
        kkt.block(0, n + r, n, 1) = qp_.A.row(i).transpose();
        kkt(n + r, n + r) = -1e-12;
        rhs[n + r] = side[i] == 1 ? qp_.upper[i] : qp_.lower[i];
      }
      const Eigen::VectorXd sol = kkt.colPivHouseholderQr().solve(rhs);
      if (!sol.allFinite()) return false;
      const Eigen::VectorXd x_new = sol.head(n);
      const Eigen::VectorXd ax_new = qp_.A * x_new;

      bool changed = false;
      // Drop active inequality rows whose multiplier has the wrong sign.
      for (int r = 0; r < k; ++r) {
        const int i = active[r];
        if (qp_.lower[i] == qp_.upper[i]) continue;
        const double y_r = sol[n + r];
        if (side[i] == 1 ? y_r < -1e-9 : y_r > 1e-9) {
          side[i] = -1;
          changed = true;
        }
      }
      // Add rows the candidate violates.
      for (int i = 0; i < m; ++i) {
        if (side[i] >= 0) continue;
        if (is_finite_bound(qp_.lower[i]) && ax_new[i] < qp_.lower[i] - slack) {
          side[i] = 0;
          changed = true;
        } else if (is_finite_bound(qp_.upper[i]) &&
                   ax_new[i] > qp_.upper[i] + slack) {
          side[i] = 1;
          changed = true;
        }
      }
      if (changed) continue;

      // Stationary working set: certify feasibility and multiplier signs.
      for (int i = 0; i < m; ++i) {
        if (is_finite_bound(qp_.lower[i]) && ax_new[i] < qp_.lower[i] - slack)
          return false;
        if (is_finite_bound(qp_.upper[i]) && ax_new[i] > qp_.upper[i] + slack)
          return false;
      }
      for (int r = 0; r < k; ++r) {
        const int i = active[r];
        if (qp_.lower[i] == qp_.upper[i]) continue;
        const double y_r = sol[n + r];
        if (side[i] == 1 ? y_r < -1e-7 : y_r > 1e-7) return false;
      }
      solution.x = x_new;
      Eigen::VectorXd y_new = Eigen::VectorXd::Zero(m);
      for (int r = 0; r < k; ++r) y_new[active[r]] = sol[n + r];
      solution.y = y_new;
      solution.dual_residual =
          inf_norm(qp_.P * x_new + qp_.q + qp_.A.transpose() * y_new);
      double viol = 0.0;
      for (int i = 0; i < m; ++i) {
        if (is_finite_bound(qp_.lower[i]))
          viol = std::max(viol, qp_.lower[i] - ax_new[i]);
        if (is_finite_bound(qp_.upper[i]))
          viol = std::max(viol, ax_new[i] - qp_.upper[i]);
      }
      solution.primal_residual = viol;
      return true;
    }
    return false;
  };

  // Seed the working set from the current iterate at a few detection widths.
  const double base = 10.0 * (settings_.eps_abs + settings_.eps_rel);
  for (double tol : {base, 0.1 * base}) {
    std::vector<int> side(m, -1);
    for (int i = 0; i < m; ++i) {
      if (qp_.lower[i] == qp_.upper[i]) {
        side[i] = 0;
        continue;
      }
      const bool lo = is_finite_bound(qp_.lower[i]) &&
                      (ax[i] - qp_.lower[i] <= tol || solution.y[i] < -tol);
      const bool hi = is_finite_bound(qp_.upper[i]) &&
                      (qp_.upper[i] - ax[i] <= tol || solution.y[i] > tol);
      if (lo && hi)  // ambiguous tight box: pin to the closer side
        side[i] = qp_.upper[i] - ax[i] < ax[i] - qp_.lower[i] ? 1 : 0;
      else if (hi)
        side[i] = 1;
      else if (lo)
        side[i] = 0;
    }
    if (refine(side)) return true;
  }
  return false;
}

QpSolution solve(const QuadraticProgram& qp, double eps_abs, double eps_rel,
                 int max_iter) {
  QpSettings settings;
  settings.eps_abs = eps_abs;
  settings.eps_rel = eps_rel;
  settings.max_iter = max_iter;
  QpSolver solver(qp, settings);
  return solver.solve();
}

KktReport kkt_check(const QuadraticProgram& qp, const Eigen::VectorXd& x,
                    double tol) {
  if (x.size() != qp.num_variables())
    throw std::invalid_argument("candidate dimension mismatch");
  const int m = qp.num_constraints();
  KktReport report;
  const Eigen::VectorXd ax = qp.A * x;
  for (int i = 0; i < m; ++i) {
    if (is_finite_bound(qp.lower[i]))
      report.feasibility = std::max(report.feasibility, qp.lower[i] - ax[i]);
    if (is_finite_bound(qp.upper[i]))
      report.feasibility = std::max(report.feasibility, ax[i] - qp.upper[i]);
  }
  // Fit multipliers on the rows active at x (least squares) and measure the
  // stationarity and complementarity residuals they leave.
  std::vector<int> active;
  for (int i = 0; i < m; ++i) {
    const bool lo = is_finite_bound(qp.lower[i]) &&
                    std::abs(ax[i] - qp.lower[i]) <= std::max(tol, 1e-9);
    const bool hi = is_finite_bound(qp.upper[i]) &&
                    std::abs(ax[i] - qp.upper[i]) <= std::max(tol, 1e-9);
    if (lo || hi) active.push_back(i);
  }
  const Eigen::VectorXd grad = qp.P * x + qp.q;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  if (!active.empty()) {
    Eigen::MatrixXd at(qp.num_variables(), active.size());
    for (size_t r = 0; r < active.size(); ++r)
      at.col(r) = qp.A.row(active[r]).transpose();
    const Eigen::VectorXd fit =
        at.colPivHouseholderQr().solve(-grad);
    for (size_t r = 0; r < active.size(); ++r) y[active[r]] = fit[r];
  }
  report.stationarity = inf_norm(grad + qp.A.transpose() * y);
  for (int i = 0; i < m; ++i) {
    double slack = kQpInfinity;
    if (is_finite_bound(qp.lower[i]))
      slack = std::min(slack, std::abs(ax[i] - qp.lower[i]));
    if (is_finite_bound(qp.upper[i]))
      slack = std::min(slack, std::abs(qp.upper[i] - ax[i]));
    if (slack < kQpInfinity)
      report.complementarity =
          std::max(report.complementarity, std::abs(y[i]) * slack);
  }
  return report;
}

void dump_qp(const QuadraticProgram& qp, std::ostream& out) {
  const Eigen::IOFormat fmt(Eigen::FullPrecision, 0, " ", "\n");
  out << "n " << qp.num_variables() << "\nm " << qp.num_constraints() << "\n";
  out << "P\n" << qp.P.format(fmt) << "\nq\n" << qp.q.transpose().format(fmt)
      << "\nA\n" << qp.A.format(fmt) << "\nl\n"
      << qp.lower.transpose().format(fmt) << "\nu\n"
      << qp.upper.transpose().format(fmt) << "\n";
}

}  // namespace softquad
