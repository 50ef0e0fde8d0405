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

#include "softquad/rod.hpp"

namespace softquad {

struct TendonRouting {
  double pulley_angle = 168.0 * M_PI / 180.0;  // from horizontal [rad]
  double pulley_radius_offset = 0.03;          // [m]
  double routed_fraction = 2.0 / 3.0;          // of leg length, from the base

  int routed_node_count(const RodGeometry& geom) const;
  void validate() const;
};

// Sine ramp to max tension, hold, cosine decay back to zero.
struct TendonProfile {
  double t_ramp = 0.5;   // [s]
  double t_hold = 0.5;   // [s]
  double t_decay = 0.5;  // [s]
  double t_max = 1.5;    // commanded resultant tension [N]

  double duration() const { return t_ramp + t_hold + t_decay; }
  void validate() const;
};

double tension_at(const TendonProfile& profile, double t);

// Affine servo pulling-angle map, degrees in and out.
struct ForceAngleMap {
  double offset = 6.91;      // [N]
  double slope = 0.107;      // [N/deg]
  double angle_max = 116.28; // [deg]
};

// theta = (f_z + offset) / slope, clamped to [0, angle_max].
double force_to_angle(const ForceAngleMap& map, double f_z);
// f_z = slope * theta - offset, clamped to >= 0.
double angle_to_force(const ForceAngleMap& map, double theta_deg);

// Resultant of the distributed tendon force plus where it reacts.
struct TendonAction {
  double fx_total = 0.0;
  double fz_total = 0.0;
  double pulley_x = 0.0;
  double pulley_z = 0.0;
};

// Distributes `tension` over the routed nodes, each pulled toward the virtual
// pulley, with the weights renormalized so the resultant magnitude equals the
// commanded tension. Returns the resultant for reaction bookkeeping.
TendonAction apply_tendon(const RodState& state, const RodGeometry& geom,
                          const TendonRouting& routing, double tension,
                          NodalLoads& loads);

}  // namespace softquad
