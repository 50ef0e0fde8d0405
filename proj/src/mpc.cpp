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

#include "softquad/mpc.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace softquad {

namespace {

constexpr double kBoundInf = kQpInfinity * 10.0;
constexpr int kRowsPerStage = 21;  // 1 equality + 4 bounds + 16 friction

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d s;
  s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return s;
}

}  // namespace

MpcState mpc_state_from_torso(const TorsoState& torso) {
  MpcState x;
  x.segment<3>(0) = torso.attitude;
  x.segment<3>(3) = torso.position;
  x.segment<3>(6) = torso.angular_velocity;
  x.segment<3>(9) = torso.velocity;
  x[12] = kMpcGravity;
  return x;
}

MpcConfig::MpcConfig() {
  q_diag << 0.1, 0.1, 0.1, 0.0, 0.0, 100.0, 0.01, 0.01, 0.01, 20.0, 0.1, 0.0,
      0.0;
  q_diag /= 1000.0;
}

void MpcConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (dt <= 0.0) throw std::invalid_argument("tick must be positive");
  if ((q_diag.array() < 0.0).any() || r_weight < 0.0)
    throw std::invalid_argument("weights must be nonnegative");
  if (f_max <= 0.0 || total_mass <= 0.0 || gravity <= 0.0)
    throw std::invalid_argument("force bound, mass, gravity must be positive");
}

MpcModel linearize(const MpcState& x, const TorsoBody& body,
                   const std::array<Eigen::Vector3d, 4>& foot_offsets,
                   const MpcConfig& config) {
  config.validate();
  body.validate();
  Eigen::Matrix<double, 13, 13> a_c = Eigen::Matrix<double, 13, 13>::Zero();
  Eigen::Matrix<double, 13, 12> b_c = Eigen::Matrix<double, 13, 12>::Zero();
  // Attitude kinematics: Euler rates ~ yaw-rotated body rates (roll/pitch
  // small per the gyroscopic-neglect regime).
  const double yaw = x[2];
  Eigen::Matrix3d rz;
  rz << std::cos(yaw), std::sin(yaw), 0.0, -std::sin(yaw), std::cos(yaw), 0.0,
      0.0, 0.0, 1.0;
  a_c.block<3, 3>(0, 6) = rz;
  a_c.block<3, 3>(3, 9) = Eigen::Matrix3d::Identity();
  a_c(11, 12) = 1.0;  // gravity augmentation feeds vertical acceleration
  const Eigen::Matrix3d inv_inertia = body.inertia.inverse();
  for (int leg = 0; leg < 4; ++leg) {
    b_c.block<3, 3>(6, 3 * leg) = inv_inertia * skew(foot_offsets[leg]);
    b_c.block<3, 3>(9, 3 * leg) =
        Eigen::Matrix3d::Identity() / body.mass;
  }
  MpcModel model;
  if (config.exact_discretization) {
    Eigen::Matrix<double, 25, 25> block = Eigen::Matrix<double, 25, 25>::Zero();
    block.topLeftCorner<13, 13>() = a_c * config.dt;
    block.topRightCorner<13, 12>() = b_c * config.dt;
    const Eigen::Matrix<double, 25, 25> expm = block.exp();
    model.a = expm.topLeftCorner<13, 13>();
    model.b = expm.topRightCorner<13, 12>();
  } else {
    model.a =
        Eigen::Matrix<double, 13, 13>::Identity() + a_c * config.dt;
    model.b = b_c * config.dt;
  }
  return model;
}

QuadraticProgram build_qp(const MpcState& x, const std::vector<MpcState>& refs,
                          const MpcModel& model, const MpcConfig& config,
                          const std::vector<StagePhase>& phases) {
  config.validate();
  const int h = config.horizon;
  if (static_cast<int>(refs.size()) != h)
    throw std::invalid_argument("reference horizon mismatch");
  if (static_cast<int>(phases.size()) != h)
    throw std::invalid_argument("phase horizon mismatch");
  const int nu = kMpcInputDim * h;
  const int nx = kMpcStateDim;

  // Stacked prediction: X = F x + S U with X = [x_1; ...; x_H].
  Eigen::MatrixXd f(nx * h, nx);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(nx * h, nu);
  Eigen::Matrix<double, 13, 13> a_pow = model.a;
  for (int k = 0; k < h; ++k) {
    f.middleRows(nx * k, nx) = a_pow;
    if (k + 1 < h) a_pow = model.a * a_pow;
  }
  for (int k = 0; k < h; ++k) {
    s.block(nx * k, kMpcInputDim * k, nx, kMpcInputDim) = model.b;
    for (int j = k + 1; j < h; ++j)
      s.block(nx * j, kMpcInputDim * k, nx, kMpcInputDim) =
          f.middleRows(nx * (j - k - 1), nx) * model.b;
  }
  Eigen::VectorXd q_stack(nx * h);
  for (int k = 0; k < h; ++k)
    for (int i = 0; i < nx; ++i) q_stack[nx * k + i] = config.q_diag[i];
  Eigen::VectorXd ref_stack(nx * h);
  for (int k = 0; k < h; ++k) ref_stack.segment(nx * k, nx) = refs[k];
  const Eigen::VectorXd err0 = f * x - ref_stack;

  QuadraticProgram qp;
  qp.P = 2.0 * (s.transpose() * q_stack.asDiagonal() * s +
                config.r_weight *
                    Eigen::MatrixXd::Identity(nu, nu));
  qp.P = 0.5 * (qp.P + qp.P.transpose()).eval();
  qp.q = 2.0 * s.transpose() * (q_stack.asDiagonal() * err0);

  const int m = kRowsPerStage * h;
  qp.A = Eigen::MatrixXd::Zero(m, nu);
  qp.lower.resize(m);
  qp.upper.resize(m);
  const double weight = config.total_mass * config.gravity;
  for (int k = 0; k < h; ++k) {
    const int row0 = kRowsPerStage * k;
    const int col0 = kMpcInputDim * k;
    // Total vertical support equals the robot weight.
    for (int leg = 0; leg < 4; ++leg) qp.A(row0, col0 + 3 * leg + 2) = 1.0;
    qp.lower[row0] = weight;
    qp.upper[row0] = weight;
    for (int leg = 0; leg < 4; ++leg) {
      const int fx = col0 + 3 * leg;
      const int fy = fx + 1;
      const int fz = fx + 2;
      const double mu = phases[k].mu[leg];
      const int r = row0 + 1 + 5 * leg;  // 1 bound + 4 friction rows per leg
      qp.A(r, fz) = 1.0;
      qp.lower[r] = 0.0;
      qp.upper[r] = phases[k].stance[leg] ? config.f_max : 0.0;
      qp.A(r + 1, fx) = 1.0;
      qp.A(r + 1, fz) = -mu;  // fx - mu fz <= 0
      qp.lower[r + 1] = -kBoundInf;
      qp.upper[r + 1] = 0.0;
      qp.A(r + 2, fx) = 1.0;
      qp.A(r + 2, fz) = mu;  // fx + mu fz >= 0
      qp.lower[r + 2] = 0.0;
      qp.upper[r + 2] = kBoundInf;
      qp.A(r + 3, fy) = 1.0;
      qp.A(r + 3, fz) = -mu;
      qp.lower[r + 3] = -kBoundInf;
      qp.upper[r + 3] = 0.0;
      qp.A(r + 4, fy) = 1.0;
      qp.A(r + 4, fz) = mu;
      qp.lower[r + 4] = 0.0;
      qp.upper[r + 4] = kBoundInf;
    }
  }
  return qp;
}

double stage_cost(const MpcState& x, const MpcState& ref,
                  const Eigen::Matrix<double, 13, 1>& q_diag) {
  const MpcState err = x - ref;
  return err.dot(q_diag.asDiagonal() * err);
}

std::array<double, 4> force_commands_to_angles(
    const Eigen::Matrix<double, 12, 1>& u, const ForceAngleMap& map) {
  std::array<double, 4> angles{};
  for (int leg = 0; leg < 4; ++leg)
    angles[leg] = force_to_angle(map, u[3 * leg + 2]);
  return angles;
}

MpcController::MpcController(const MpcConfig& config, const TorsoBody& body)
    : config_(config), body_(body) {
  config_.validate();
  body_.validate();
  last_feasible_ = Eigen::Matrix<double, 12, 1>::Zero();
  const double quarter = config_.total_mass * config_.gravity / 4.0;
  for (int leg = 0; leg < 4; ++leg) last_feasible_[3 * leg + 2] = quarter;
}

MpcSolution MpcController::solve_step(
    const MpcState& x, const std::vector<MpcState>& refs,
    const std::array<Eigen::Vector3d, 4>& foot_offsets,
    const std::vector<StagePhase>& phases) {
  const MpcModel model = linearize(x, body_, foot_offsets, config_);
  const QuadraticProgram qp = build_qp(x, refs, model, config_, phases);
  QpSolver solver(qp, config_.solver);
  if (warm_x_ && warm_x_->size() == qp.num_variables() && warm_y_ &&
      warm_y_->size() == qp.num_constraints())
    solver.warm_start(*warm_x_, *warm_y_);
  const QpSolution sol = solver.solve();

  MpcSolution out;
  out.status = sol.status;
  out.iterations = sol.iterations;
  out.feasible = sol.status == QpStatus::kSolved;
  if (out.feasible) {
    out.u = sol.x.head<12>();
    out.u_plan = sol.x;
    last_feasible_ = out.u;
    // Shift the plan one stage for the next warm start.
    Eigen::VectorXd shifted_x(sol.x.size());
    shifted_x.head(sol.x.size() - kMpcInputDim) = sol.x.tail(sol.x.size() - kMpcInputDim);
    shifted_x.tail(kMpcInputDim) = sol.x.tail(kMpcInputDim);
    Eigen::VectorXd shifted_y(sol.y.size());
    shifted_y.head(sol.y.size() - kRowsPerStage) =
        sol.y.tail(sol.y.size() - kRowsPerStage);
    shifted_y.tail(kRowsPerStage) = sol.y.tail(kRowsPerStage);
    warm_x_ = shifted_x;
    warm_y_ = shifted_y;
  } else {
    out.u = last_feasible_;
    out.u_plan.resize(kMpcInputDim * config_.horizon);
    for (int k = 0; k < config_.horizon; ++k)
      out.u_plan.segment<kMpcInputDim>(kMpcInputDim * k) = last_feasible_;
    warm_x_.reset();
    warm_y_.reset();
  }
  // Per-leg verdict on the input actually applied this tick.
  const double tol = 1e-6;
  const StagePhase& now = phases.front();
  for (int leg = 0; leg < 4; ++leg) {
    const double fx = out.u[3 * leg];
    const double fy = out.u[3 * leg + 1];
    const double fz = out.u[3 * leg + 2];
    const double fz_max = now.stance[leg] ? config_.f_max : 0.0;
    const double cone = now.mu[leg] * fz + tol;
    out.leg_feasible[leg] = fz >= -tol && fz <= fz_max + tol &&
                            std::abs(fx) <= cone && std::abs(fy) <= cone;
  }
  out.cost = stage_cost(x, refs.front(), config_.q_diag);
  return out;
}

}  // namespace softquad
