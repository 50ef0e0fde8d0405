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
#include <array>
#include <stdexcept>

namespace softquad {

enum LegIndex { kFrontLeft = 0, kFrontRight = 1, kBackLeft = 2, kBackRight = 3 };

// Rigid-body torso state: CoM position/velocity, roll-pitch-yaw attitude,
// and body angular velocity.
struct TorsoState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d attitude = Eigen::Vector3d::Zero();  // roll, pitch, yaw
  Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();

  bool all_finite() const;
};

struct TorsoBody {
  double mass = 2.0;                                   // [kg]
  Eigen::Vector3d dims{0.1255, 0.0855, 0.034};         // [m] cuboid a, b, c
  Eigen::Matrix3d inertia;                             // [kg m^2] about CoM
  // Leg attachment offsets from the CoM, at the bottom corners.
  std::array<Eigen::Vector3d, 4> attachments;
  double gravity = 9.81;                               // magnitude [m/s^2]

  TorsoBody();
  void validate() const;
};

// Diagonal inertia of a solid cuboid with side lengths (a, b, c).
Eigen::Matrix3d cuboid_inertia(const Eigen::Vector3d& dims, double mass);

// Spatial wrench at an attachment, expressed in the torso frame.
struct Wrench3 {
  Eigen::Vector3d force = Eigen::Vector3d::Zero();
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();
};

// Net force and CoM torque from the four attachment wrenches. Couples are
// included unless include_couples is false (sum of r_i x F_i only).
Wrench3 aggregate_wrenches(const std::array<Wrench3, 4>& reactions,
                           const std::array<Eigen::Vector3d, 4>& attachments,
                           bool include_couples = true);

// Semi-implicit Euler update of the torso under the net wrench; gyroscopic
// term dropped and small-angle Euler-rate mapping (exact mapping optional).
TorsoState torso_step(const TorsoState& state, const TorsoBody& body,
                      const Wrench3& net, double dt,
                      bool exact_euler_rates = false);

}  // namespace softquad
