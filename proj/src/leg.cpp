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

#include "softquad/leg.hpp"

#include <cmath>

namespace softquad {
namespace {

// Torque about the out-of-plane axis of a force applied at offset r.
double torque_y(double rx, double rz, double fx, double fz) {
  return rz * fx - rx * fz;
}

}  // namespace

void LegDefinition::validate() const {
  geometry.validate();
  material.validate();
  contact.validate();
  stabilization.validate();
  routing.validate();
  if (dt <= 0.0) throw std::invalid_argument("rod time step must be positive");
  if (max_substep <= 0.0)
    throw std::invalid_argument("max substep must be positive");
}

double LegDefinition::pitch_for_tip_height(const RodGeometry& geom,
                                           double base_z, double tip_z) {
  const double drop = (tip_z - base_z) / geom.length;
  if (std::abs(drop) > 1.0)
    throw std::invalid_argument("tip height unreachable for this leg length");
  return std::asin(drop);
}

LegSimulator::LegSimulator(const LegDefinition& def)
    : def_(def),
      state_(RodState::straight(def.geometry, def.base_x, def.base_z,
                                def.pitch)),
      loads_(def.geometry.node_count) {
  def_.validate();
}

BaseWrench LegSimulator::step(double tension) {
  // The stiffest axial and angular modes of this rod sit beyond the
  // semi-implicit Euler stability limit at the nominal control step, so the
  // pipeline runs on internal substeps and reports the averaged reaction.
  const int substeps =
      std::max(1, static_cast<int>(std::ceil(def_.dt / def_.max_substep)));
  const double dt = def_.dt / substeps;
  BaseWrench avg;
  for (int s = 0; s < substeps; ++s) avg += substep(tension, dt);
  return avg * (1.0 / substeps);
}

BaseWrench LegSimulator::substep(double tension, double dt) {
  const int n = state_.size();
  loads_.set_zero();
  try {
    internal_forces(state_, def_.geometry, def_.material, loads_);
    const TendonAction tendon =
        apply_tendon(state_, def_.geometry, def_.routing, tension, loads_);
    contact_forces(state_, def_.contact, loads_);
    friction_forces(state_, def_.contact, loads_);
    restoring_forces(state_, def_.stabilization, loads_);
    damping_forces(state_, def_.stabilization, loads_);

    // Reaction transmitted to the mount: clamp load on node 0, plus the
    // reactions of the restoring-spring anchors and the tendon pulley, all
    // of which are fixed in the base frame.
    const double att_x = state_.x[0];
    const double att_z = state_.z[0];
    const double m0 = cross_section(def_.geometry, def_.material, 0).mass;
    BaseWrench w;
    w.fx = loads_.fx[0];
    w.fz = loads_.fz[0] - m0 * def_.contact.gravity;
    w.my = loads_.my[0];
    const double k = def_.stabilization.restoring_k;
    for (int i = 0; i < n; ++i) {
      const double rest_x = -k * (state_.x[i] - state_.x_ref[i]);
      const double rest_z = -k * (state_.z[i] - state_.z_ref[i]);
      w.fx -= rest_x;
      w.fz -= rest_z;
      w.my += torque_y(state_.x_ref[i] - att_x, state_.z_ref[i] - att_z,
                       -rest_x, -rest_z);
    }
    w.fx -= tendon.fx_total;
    w.fz -= tendon.fz_total;
    w.my += torque_y(tendon.pulley_x - att_x, tendon.pulley_z - att_z,
                     -tendon.fx_total, -tendon.fz_total);

    const NodalAccelerations acc = assemble_accelerations(
        state_, loads_, def_.geometry, def_.material, def_.contact);
    euler_step(state_, acc, dt, def_.integration);
    // Anchors ride along with the base frame.
    if (base_vx_ != 0.0 || base_vz_ != 0.0) {
      state_.x_ref.array() += base_vx_ * dt;
      state_.z_ref.array() += base_vz_ * dt;
    }
    time_ += dt;
    ++step_index_;
    return w;
  } catch (const RodError& e) {
    throw RodError("leg step " + std::to_string(step_index_) + " (t=" +
                   std::to_string(time_) + " s): " + e.what());
  }
}

int LegSimulator::substeps_per_step() const {
  return std::max(1, static_cast<int>(std::ceil(def_.dt / def_.max_substep)));
}

void LegSimulator::move_base(double base_x, double base_z, double base_vx,
                             double base_vz) {
  const double dx = base_x - state_.x[0];
  const double dz = base_z - state_.z[0];
  state_.x[0] = base_x;
  state_.z[0] = base_z;
  state_.x_ref.array() += dx;
  state_.z_ref.array() += dz;
  state_.vx[0] = base_vx;
  state_.vz[0] = base_vz;
  base_vx_ = base_vx;
  base_vz_ = base_vz;
}

RodTrajectory simulate_leg(const LegDefinition& leg,
                           const TensionSchedule& tendon_schedule,
                           double duration, int record_stride) {
  if (duration <= 0.0) throw std::invalid_argument("duration must be positive");
  if (record_stride < 1) throw std::invalid_argument("record stride < 1");
  LegSimulator sim(leg);
  RodTrajectory traj;
  traj.frames.push_back(
      {0.0, sim.state(), BaseWrench{}, sim.tip_x(), sim.tip_z()});
  const long steps = static_cast<long>(std::llround(duration / leg.dt));
  for (long s = 0; s < steps; ++s) {
    const BaseWrench w = sim.step(tendon_schedule(sim.time()));
    if ((s + 1) % record_stride == 0)
      traj.frames.push_back(
          {sim.time(), sim.state(), w, sim.tip_x(), sim.tip_z()});
  }
  return traj;
}

}  // namespace softquad
