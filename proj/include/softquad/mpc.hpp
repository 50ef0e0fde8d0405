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

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "softquad/gait.hpp"
#include "softquad/qp.hpp"
#include "softquad/tendon.hpp"
#include "softquad/torso.hpp"

namespace softquad {

// Prediction state: [roll, pitch, yaw, px, py, pz, wx, wy, wz, vx, vy, vz,
// g_z] with the constant gravity augmentation as the 13th entry.
using MpcState = Eigen::Matrix<double, 13, 1>;

inline constexpr int kMpcStateDim = 13;
inline constexpr int kMpcInputDim = 12;  // [fx, fy, fz] per leg
inline constexpr double kMpcGravity = -9.81;

MpcState mpc_state_from_torso(const TorsoState& torso);

struct MpcConfig {
  int horizon = 15;
  double dt = 0.033;                          // [s]
  Eigen::Matrix<double, 13, 1> q_diag;        // tracking weights
  double r_weight = 1e-8;                     // input weight (R = r * I12)
  double f_max = 6.0;                         // vertical force bound [N]
  double total_mass = 2.16;                   // robot mass for sum(fz) [kg]
  double gravity = 9.81;                      // [m/s^2]
  bool exact_discretization = false;          // matrix-exponential hook
  QpSettings solver;

  MpcConfig();
  void validate() const;
};

// Gravity-augmented linear prediction model discretized over one tick.
struct MpcModel {
  Eigen::Matrix<double, 13, 13> a;
  Eigen::Matrix<double, 13, 12> b;
};

MpcModel linearize(const MpcState& x, const TorsoBody& body,
                   const std::array<Eigen::Vector3d, 4>& foot_offsets,
                   const MpcConfig& config);

// Friction and loading assignment for one prediction stage.
struct StagePhase {
  std::array<double, 4> mu{0.1, 0.1, 0.1, 0.1};
  std::array<bool, 4> stance{true, true, true, true};
};

// Condensed QP over the stacked input U in R^{12H}; phases has one entry per
// stage (phase-correct friction across the horizon).
QuadraticProgram build_qp(const MpcState& x, const std::vector<MpcState>& refs,
                          const MpcModel& model, const MpcConfig& config,
                          const std::vector<StagePhase>& phases);

double stage_cost(const MpcState& x, const MpcState& ref,
                  const Eigen::Matrix<double, 13, 1>& q_diag);

struct MpcSolution {
  Eigen::Matrix<double, 12, 1> u = Eigen::Matrix<double, 12, 1>::Zero();
  bool feasible = false;                       // this tick's QP solved
  std::array<bool, 4> leg_feasible{};          // applied input, per leg block
  double cost = 0.0;                           // stage tracking cost at x
  QpStatus status = QpStatus::kMaxIter;
  int iterations = 0;
  Eigen::VectorXd u_plan;                      // full stacked plan (12 * H)
};

// Per-leg servo pulling angles from the first-stage vertical forces.
std::array<double, 4> force_commands_to_angles(
    const Eigen::Matrix<double, 12, 1>& u, const ForceAngleMap& map);

// Receding-horizon controller with warm starting and a last-feasible-input
// fallback when a tick's QP cannot be solved.
class MpcController {
 public:
  MpcController(const MpcConfig& config, const TorsoBody& body);

  MpcSolution solve_step(const MpcState& x, const std::vector<MpcState>& refs,
                         const std::array<Eigen::Vector3d, 4>& foot_offsets,
                         const std::vector<StagePhase>& phases);

  const MpcConfig& config() const { return config_; }

 private:
  MpcConfig config_;
  TorsoBody body_;
  Eigen::Matrix<double, 12, 1> last_feasible_;
  std::optional<Eigen::VectorXd> warm_x_;
  std::optional<Eigen::VectorXd> warm_y_;
};

}  // namespace softquad
