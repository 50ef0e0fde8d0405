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
#include <stdexcept>
#include <string>

namespace softquad {

// Discrete planar rod: N nodes in the XZ plane, each carrying position,
// orientation about the out-of-plane axis, and the matching velocities.

struct RodGeometry {
  double length = 0.19;        // [m]
  int node_count = 31;
  double width = 0.02;         // [m]
  double thickness_base = 0.0135;  // [m]
  double thickness_tip = 0.0035;   // [m]

  double segment_length() const { return length / (node_count - 1); }
  void validate() const;
};

struct RodMaterial {
  double youngs_modulus = 1e7;  // [Pa]
  double density = 1200.0;      // [kg/m^3]
  void validate() const;
};

struct ContactParams {
  double stiffness = 1e5;    // [N/m]
  double damping = 10.0;     // [N s/m]
  double friction_mu = 0.1;
  double leg_mass = 0.04;    // [kg]
  double robot_mass = 2.16;  // [kg]
  double gravity = 9.81;     // magnitude [m/s^2], applied in -z
  // Sliding speeds below this are treated as stiction (no Coulomb force).
  double stiction_velocity = 1e-4;  // [m/s]
  void validate() const;
};

struct StabilizationParams {
  double damping_c = 0.1;       // [N s/m], also [N m s/rad] on the angular DOF
  double restoring_k = 800.0;   // [N/m]
  void validate() const;
};

struct RodState {
  Eigen::VectorXd x, z, theta;     // configuration
  Eigen::VectorXd vx, vz, omega;   // velocities
  Eigen::VectorXd x_ref, z_ref;    // reference (initial) configuration
  double theta_ref = 0.0;          // natural orientation (straight rod)

  int size() const { return static_cast<int>(x.size()); }
  bool all_finite() const;

  // Straight rod from (base_x, base_z) at the given pitch, at rest.
  static RodState straight(const RodGeometry& geom, double base_x,
                           double base_z, double pitch);
};

// Additive per-node force/moment accumulator, zeroed before each force pass.
struct NodalLoads {
  Eigen::VectorXd fx, fz, my;

  explicit NodalLoads(int n) : fx(n), fz(n), my(n) { set_zero(); }
  void set_zero() {
    fx.setZero();
    fz.setZero();
    my.setZero();
  }
};

struct SectionProperties {
  double area;           // [m^2]
  double second_moment;  // [m^4]
  double mass;           // lumped node mass [kg]
  double rot_inertia;    // node rotational inertia [kg m^2]
};

struct NodalAccelerations {
  Eigen::VectorXd ax, az, alpha;
};

// Prescribed motion of the clamped base node (zero in single-leg mode).
struct BaseMotion {
  double ax = 0.0, az = 0.0, alpha = 0.0;
};

class RodError : public std::runtime_error {
 public:
  explicit RodError(const std::string& what) : std::runtime_error(what) {}
};

double node_thickness(const RodGeometry& geom, int i);
SectionProperties cross_section(const RodGeometry& geom,
                                const RodMaterial& material, int i);

struct SegmentKinematics {
  double length;  // current length [m]
  double angle;   // atan2 of the chord [rad]
};
// Throws RodError on coincident nodes (degenerate segment).
SegmentKinematics segment_kinematics(const RodState& state, int i);

// Axial and bending elasticity. Axial forces act along the deformed segment
// direction; bending couples between adjacent segments are realized as nodal
// forces, the exact negative gradient of the turning-angle elastic energy.
void internal_forces(const RodState& state, const RodGeometry& geom,
                     const RodMaterial& material, NodalLoads& loads);

// Penalty ground contact, vertical only, clamped to be non-adhesive.
void contact_forces(const RodState& state, const ContactParams& params,
                    NodalLoads& loads);

// Coulomb friction on grounded nodes with a stiction band around zero speed.
void friction_forces(const RodState& state, const ContactParams& params,
                     NodalLoads& loads);

void restoring_forces(const RodState& state, const StabilizationParams& stab,
                      NodalLoads& loads);

void damping_forces(const RodState& state, const StabilizationParams& stab,
                    NodalLoads& loads);

NodalAccelerations assemble_accelerations(const RodState& state,
                                          const NodalLoads& loads,
                                          const RodGeometry& geom,
                                          const RodMaterial& material,
                                          const ContactParams& params,
                                          const BaseMotion& base = {});

enum class IntegrationMode {
  kSemiImplicit,  // velocity update before position update (default)
  kExplicit,      // literal explicit Euler
};

// Advances the state in place; throws RodError if the state goes non-finite.
void euler_step(RodState& state, const NodalAccelerations& accel, double dt,
                IntegrationMode mode = IntegrationMode::kSemiImplicit);

}  // namespace softquad
