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

#include <functional>
#include <vector>

#include "softquad/rod.hpp"
#include "softquad/tendon.hpp"

namespace softquad {

// Planar wrench at the leg attachment, in the leg frame.
struct BaseWrench {
  double fx = 0.0;
  double fz = 0.0;
  double my = 0.0;

  BaseWrench& operator+=(const BaseWrench& o) {
    fx += o.fx;
    fz += o.fz;
    my += o.my;
    return *this;
  }
  BaseWrench operator*(double s) const { return {fx * s, fz * s, my * s}; }
};

struct LegDefinition {
  RodGeometry geometry;
  RodMaterial material;
  ContactParams contact;
  StabilizationParams stabilization;
  TendonRouting routing;
  double base_x = 0.0;   // attachment position in the leg frame [m]
  double base_z = 0.023;
  double pitch = 0.0;    // reference rod pitch [rad]; <0 slopes toward ground
  double dt = 1e-4;      // control/recording step [s]
  // Largest internally stable integration step; dt is split into
  // ceil(dt / max_substep) equal substeps.
  double max_substep = 1e-5;
  IntegrationMode integration = IntegrationMode::kSemiImplicit;

  void validate() const;
  // Pitch that puts the reference tip at the requested height.
  static double pitch_for_tip_height(const RodGeometry& geom, double base_z,
                                     double tip_z);
};

struct RodFrame {
  double t;
  RodState state;
  BaseWrench reaction;  // leg-on-mount, leg frame
  double tip_x, tip_z;
};

struct RodTrajectory {
  std::vector<RodFrame> frames;
};

using TensionSchedule = std::function<double(double t)>;

// Steps one rod leg and tracks the wrench the leg assembly (clamp, restoring
// spring anchors, tendon pulley) transmits to its mount.
class LegSimulator {
 public:
  explicit LegSimulator(const LegDefinition& def);

  // Advances one rod time step under the given tendon tension; returns the
  // leg-on-mount reaction wrench about the attachment for this step.
  BaseWrench step(double tension);

  // Rigidly translates the clamped base (and the anchored reference
  // configuration) and prescribes its velocity for the coming steps.
  void move_base(double base_x, double base_z, double base_vx, double base_vz);

  const RodState& state() const { return state_; }
  int substeps_per_step() const;
  RodState& mutable_state() { return state_; }
  const LegDefinition& definition() const { return def_; }
  double time() const { return time_; }
  double tip_x() const { return state_.x[state_.size() - 1]; }
  double tip_z() const { return state_.z[state_.size() - 1]; }

 private:
  BaseWrench substep(double tension, double dt);

  LegDefinition def_;
  RodState state_;
  NodalLoads loads_;
  double time_ = 0.0;
  double base_vx_ = 0.0;
  double base_vz_ = 0.0;
  long step_index_ = 0;
};

RodTrajectory simulate_leg(const LegDefinition& leg,
                           const TensionSchedule& tendon_schedule,
                           double duration, int record_stride);

}  // namespace softquad
