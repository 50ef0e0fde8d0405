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

#include "softquad/tendon.hpp"

#include <algorithm>
#include <cmath>

namespace softquad {

int TendonRouting::routed_node_count(const RodGeometry& geom) const {
  return static_cast<int>(std::floor(routed_fraction * (geom.node_count - 1))) +
         1;
}

void TendonRouting::validate() const {
  if (routed_fraction <= 0.0 || routed_fraction > 1.0)
    throw std::invalid_argument("routed fraction outside (0, 1]");
  if (pulley_angle <= 0.0 || pulley_angle >= 2.0 * M_PI)
    throw std::invalid_argument("pulley angle outside (0, 2*pi)");
}

void TendonProfile::validate() const {
  if (t_ramp < 0.0 || t_hold < 0.0 || t_decay < 0.0 || t_max < 0.0)
    throw std::invalid_argument("tendon profile parameters must be >= 0");
}

double tension_at(const TendonProfile& p, double t) {
  if (t < 0.0) throw std::invalid_argument("tension queried at negative time");
  if (t < p.t_ramp) return p.t_max * std::sin(0.5 * M_PI * t / p.t_ramp);
  if (t < p.t_ramp + p.t_hold) return p.t_max;
  const double td = t - p.t_ramp - p.t_hold;
  if (td < p.t_decay) return p.t_max * 0.5 * (1.0 + std::cos(M_PI * td / p.t_decay));
  return 0.0;
}

double force_to_angle(const ForceAngleMap& map, double f_z) {
  if (f_z < 0.0) throw std::invalid_argument("negative vertical force");
  return std::clamp((f_z + map.offset) / map.slope, 0.0, map.angle_max);
}

double angle_to_force(const ForceAngleMap& map, double theta_deg) {
  if (theta_deg < 0.0 || theta_deg > map.angle_max)
    throw std::invalid_argument("pulling angle outside servo range");
  return std::max(map.slope * theta_deg - map.offset, 0.0);
}

TendonAction apply_tendon(const RodState& state, const RodGeometry& geom,
                          const TendonRouting& routing, double tension,
                          NodalLoads& loads) {
  if (tension < 0.0) throw std::invalid_argument("tendon tension < 0");
  TendonAction action;
  // Pulley is fixed in the base frame, offset from the base node.
  action.pulley_x =
      state.x_ref[0] + routing.pulley_radius_offset * std::cos(routing.pulley_angle);
  action.pulley_z =
      state.z_ref[0] + routing.pulley_radius_offset * std::sin(routing.pulley_angle);
  if (tension == 0.0) return action;

  const int routed = routing.routed_node_count(geom);
  Eigen::VectorXd dir_x(routed), dir_z(routed);
  double sum_x = 0.0, sum_z = 0.0;
  for (int k = 0; k < routed; ++k) {
    double dx = action.pulley_x - state.x[k];
    double dz = action.pulley_z - state.z[k];
    const double d = std::hypot(dx, dz);
    if (d > 0.0) {
      dx /= d;
      dz /= d;
    }
    dir_x[k] = dx;
    dir_z[k] = dz;
    sum_x += dx;
    sum_z += dz;
  }
  const double resultant = std::hypot(sum_x, sum_z);
  if (resultant == 0.0) return action;  // directions cancel, no net pull
  const double scale = tension / resultant;
  for (int k = 0; k < routed; ++k) {
    loads.fx[k] += scale * dir_x[k];
    loads.fz[k] += scale * dir_z[k];
  }
  action.fx_total = scale * sum_x;
  action.fz_total = scale * sum_z;
  return action;
}

}  // namespace softquad
