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
#include <functional>
#include <memory>
#include <vector>

#include "softquad/leg.hpp"
#include "softquad/torso.hpp"

namespace softquad {

// Whole robot: rigid torso plus four independent planar rod legs, coupled
// only through the attachment reaction wrenches (decoupled model).
struct RobotDefinition {
  TorsoBody body;
  std::array<LegDefinition, 4> legs;
  // Yaw of each leg's planar (XZ) frame about the world z axis.
  std::array<double, 4> leg_yaw{0.0, 0.0, M_PI, M_PI};
  double macro_dt = 0.033;  // torso update period [s]
  bool include_couples = true;      // clamp couples into the torso torque
  bool exact_euler_rates = false;
  double initial_height = 0.04;     // CoM start height [m]

  RobotDefinition();
  void validate() const;
};

struct BodyFrame {
  double t;
  TorsoState torso;
  Wrench3 net;                       // aggregated leg wrench on the torso
  std::array<BaseWrench, 4> reactions;  // per-leg, leg frame
  std::array<double, 4> tip_z;       // world tip heights
};

struct BodyTrajectory {
  std::vector<BodyFrame> frames;
};

using LegTensionSchedule = std::function<double(int leg, double t)>;

class WholeBodySim {
 public:
  explicit WholeBodySim(const RobotDefinition& def);

  // Advances one macro step: legs advance at the rod step with bases clamped
  // to the attachment motion, reactions are averaged, the torso integrates
  // the aggregate wrench plus the optional extra world-frame wrench.
  BodyFrame macro_step(const std::array<double, 4>& tensions,
                       const Wrench3& extra = {});

  const TorsoState& torso() const { return torso_; }
  TorsoState& mutable_torso() { return torso_; }
  const LegSimulator& leg(int i) const { return *legs_[i]; }
  double time() const { return time_; }
  // World position of the attachment point of leg i.
  Eigen::Vector3d attachment_world(int i) const;
  // World position of the tip of leg i.
  Eigen::Vector3d tip_world(int i) const;
  // Current world-frame foot offsets from the CoM (for MPC torque arms).
  std::array<Eigen::Vector3d, 4> foot_offsets() const;

 private:
  RobotDefinition def_;
  TorsoState torso_;
  std::array<std::unique_ptr<LegSimulator>, 4> legs_;
  double time_ = 0.0;
  int rod_steps_per_macro_ = 0;
};

// Passive (or scheduled) whole-body roll-out recorded at macro rate.
BodyTrajectory whole_body_simulate(const RobotDefinition& robot,
                                   const LegTensionSchedule& schedule,
                                   double duration);

}  // namespace softquad
