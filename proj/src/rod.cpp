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

#include "softquad/rod.hpp"

#include <cmath>

namespace softquad {

void RodGeometry::validate() const {
  if (node_count < 3) throw std::invalid_argument("rod needs at least 3 nodes");
  if (length <= 0.0) throw std::invalid_argument("rod length must be positive");
  if (width <= 0.0) throw std::invalid_argument("rod width must be positive");
  if (thickness_base <= 0.0 || thickness_tip <= 0.0)
    throw std::invalid_argument("rod thickness must be positive");
}

void RodMaterial::validate() const {
  if (youngs_modulus <= 0.0 || density <= 0.0)
    throw std::invalid_argument("material constants must be positive");
}

void ContactParams::validate() const {
  if (stiffness <= 0.0) throw std::invalid_argument("contact stiffness <= 0");
  if (damping < 0.0) throw std::invalid_argument("contact damping < 0");
  if (friction_mu < 0.0 || friction_mu > 1.0)
    throw std::invalid_argument("friction coefficient outside [0, 1]");
}

void StabilizationParams::validate() const {
  if (damping_c < 0.0 || restoring_k < 0.0)
    throw std::invalid_argument("stabilization constants must be >= 0");
}

bool RodState::all_finite() const {
  return x.allFinite() && z.allFinite() && theta.allFinite() &&
         vx.allFinite() && vz.allFinite() && omega.allFinite();
}

RodState RodState::straight(const RodGeometry& geom, double base_x,
                            double base_z, double pitch) {
  geom.validate();
  const int n = geom.node_count;
  RodState s;
  s.x.resize(n);
  s.z.resize(n);
  s.theta = Eigen::VectorXd::Constant(n, pitch);
  s.vx = Eigen::VectorXd::Zero(n);
  s.vz = Eigen::VectorXd::Zero(n);
  s.omega = Eigen::VectorXd::Zero(n);
  const double ds = geom.segment_length();
  for (int i = 0; i < n; ++i) {
    s.x[i] = base_x + ds * i * std::cos(pitch);
    s.z[i] = base_z + ds * i * std::sin(pitch);
  }
  s.x_ref = s.x;
  s.z_ref = s.z;
  s.theta_ref = pitch;
  return s;
}

double node_thickness(const RodGeometry& geom, int i) {
  if (i < 0 || i >= geom.node_count)
    throw std::out_of_range("node index outside rod");
  const double f = static_cast<double>(i) / (geom.node_count - 1);
  return geom.thickness_base + (geom.thickness_tip - geom.thickness_base) * f;
}

SectionProperties cross_section(const RodGeometry& geom,
                                const RodMaterial& material, int i) {
  const double h = node_thickness(geom, i);
  const double ds = geom.segment_length();
  SectionProperties p;
  p.area = geom.width * h;
  p.second_moment = geom.width * h * h * h / 12.0;
  p.mass = material.density * p.area * ds;
  p.rot_inertia = 0.5 * material.density * p.area * ds * ds;
  return p;
}

SegmentKinematics segment_kinematics(const RodState& state, int i) {
  if (i < 0 || i + 1 >= state.size())
    throw std::out_of_range("segment index outside rod");
  const double dx = state.x[i + 1] - state.x[i];
  const double dz = state.z[i + 1] - state.z[i];
  const double l = std::hypot(dx, dz);
  if (l == 0.0)
    throw RodError("coincident nodes at segment " + std::to_string(i) +
                   ": rod configuration degenerate");
  return {l, std::atan2(dz, dx)};
}

namespace {

// Wraps an angle difference into (-pi, pi].
double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace

void internal_forces(const RodState& state, const RodGeometry& geom,
                     const RodMaterial& material, NodalLoads& loads) {
  const int n = state.size();
  const double ds = geom.segment_length();
  const double e = material.youngs_modulus;
  std::vector<SegmentKinematics> seg(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    seg[i] = segment_kinematics(state, i);
    const SectionProperties sec = cross_section(geom, material, i);
    const double strain = (seg[i].length - ds) / ds;
    const double f_axial = e * sec.area * strain;
    if (!std::isfinite(f_axial))
      throw RodError("non-finite axial force at segment " + std::to_string(i));
    const double fx = f_axial * std::cos(seg[i].angle);
    const double fz = f_axial * std::sin(seg[i].angle);
    // Positive strain pulls the pair together.
    loads.fx[i] += fx;
    loads.fz[i] += fz;
    loads.fx[i + 1] -= fx;
    loads.fz[i + 1] -= fz;
  }
  // Bending: a couple m_bend = (E*I_i/ds) * (segment angle difference) acts
  // between adjacent segments, realized at the nodes as the exact negative
  // gradient of the turning-angle elastic energy with respect to positions.
  for (int i = 0; i + 2 < n; ++i) {
    const SectionProperties sec = cross_section(geom, material, i);
    const double kappa = wrap_angle(seg[i + 1].angle - seg[i].angle);
    const double m_bend = e * sec.second_moment / ds * kappa;
    if (!std::isfinite(m_bend))
      throw RodError("non-finite bending moment at segment " +
                     std::to_string(i));
    // d(angle_j)/d(end point) = perp(chord_j)/l_j^2; opposite at the start.
    const double ax = -(state.z[i + 1] - state.z[i]) /
                      (seg[i].length * seg[i].length);
    const double az =
        (state.x[i + 1] - state.x[i]) / (seg[i].length * seg[i].length);
    const double bx = -(state.z[i + 2] - state.z[i + 1]) /
                      (seg[i + 1].length * seg[i + 1].length);
    const double bz = (state.x[i + 2] - state.x[i + 1]) /
                      (seg[i + 1].length * seg[i + 1].length);
    loads.fx[i] -= m_bend * ax;
    loads.fz[i] -= m_bend * az;
    loads.fx[i + 1] += m_bend * (ax + bx);
    loads.fz[i + 1] += m_bend * (az + bz);
    loads.fx[i + 2] -= m_bend * bx;
    loads.fz[i + 2] -= m_bend * bz;
  }
}

void contact_forces(const RodState& state, const ContactParams& params,
                    NodalLoads& loads) {
  for (int i = 0; i < state.size(); ++i) {
    if (state.z[i] >= 0.0) continue;
    const double depth = -state.z[i];
    const double depth_rate = -state.vz[i];
    const double f = params.stiffness * depth + params.damping * depth_rate;
    // Unilateral contact: never pull the rod down.
    loads.fz[i] += std::max(f, 0.0);
  }
}

void friction_forces(const RodState& state, const ContactParams& params,
                     NodalLoads& loads) {
  const double normal_load =
      (params.leg_mass + params.robot_mass / 4.0) * params.gravity;
  for (int i = 0; i < state.size(); ++i) {
    if (state.z[i] > 0.0) continue;
    const double vx = state.vx[i];
    if (std::abs(vx) < params.stiction_velocity) continue;
    loads.fx[i] -= params.friction_mu * normal_load * (vx > 0.0 ? 1.0 : -1.0);
  }
}

void restoring_forces(const RodState& state, const StabilizationParams& stab,
                      NodalLoads& loads) {
  loads.fx -= stab.restoring_k * (state.x - state.x_ref);
  loads.fz -= stab.restoring_k * (state.z - state.z_ref);
}

void damping_forces(const RodState& state, const StabilizationParams& stab,
                    NodalLoads& loads) {
  loads.fx -= stab.damping_c * state.vx;
  loads.fz -= stab.damping_c * state.vz;
  loads.my -= stab.damping_c * state.omega;
}

NodalAccelerations assemble_accelerations(const RodState& state,
                                          const NodalLoads& loads,
                                          const RodGeometry& geom,
                                          const RodMaterial& material,
                                          const ContactParams& params,
                                          const BaseMotion& base) {
  const int n = state.size();
  NodalAccelerations acc;
  acc.ax.resize(n);
  acc.az.resize(n);
  acc.alpha.resize(n);
  for (int i = 0; i < n; ++i) {
    const SectionProperties sec = cross_section(geom, material, i);
    if (sec.mass <= 0.0)
      throw std::invalid_argument("zero node mass: degenerate cross-section");
    acc.ax[i] = loads.fx[i] / sec.mass;
    acc.az[i] = (loads.fz[i] - sec.mass * params.gravity) / sec.mass;
    acc.alpha[i] = loads.my[i] / sec.rot_inertia;
  }
  // Base node is kinematically clamped to the attachment.
  acc.ax[0] = base.ax;
  acc.az[0] = base.az;
  acc.alpha[0] = base.alpha;
  return acc;
}

void euler_step(RodState& state, const NodalAccelerations& accel, double dt,
                IntegrationMode mode) {
  if (dt <= 0.0) throw std::invalid_argument("time step must be positive");
  if (mode == IntegrationMode::kExplicit) {
    state.x += dt * state.vx;
    state.z += dt * state.vz;
    state.theta += dt * state.omega;
    state.vx += dt * accel.ax;
    state.vz += dt * accel.az;
    state.omega += dt * accel.alpha;
  } else {
    state.vx += dt * accel.ax;
    state.vz += dt * accel.az;
    state.omega += dt * accel.alpha;
    state.x += dt * state.vx;
    state.z += dt * state.vz;
    state.theta += dt * state.omega;
  }
  if (!state.all_finite()) throw RodError("rod state went non-finite");
}

}  // namespace softquad
