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

// Test-side oracles, independent of the library force-assembly code paths.

#pragma once

#include <cmath>
#include <vector>
#include <random>

#include "softquad/leg.hpp"
#include "softquad/rod.hpp"

namespace softquad::testing {

// Total elastic energy of the discrete rod: axial stretch plus bending.
inline double elastic_energy(const RodState& s, const RodGeometry& g,
                             const RodMaterial& m) {
  const double ds = g.segment_length();
  double energy = 0.0;
  std::vector<double> phi(g.node_count - 1);
  for (int i = 0; i + 1 < s.size(); ++i) {
    const double h =
        g.thickness_base +
        (g.thickness_tip - g.thickness_base) * i / (g.node_count - 1);
    const double area = g.width * h;
    const double l = std::hypot(s.x[i + 1] - s.x[i], s.z[i + 1] - s.z[i]);
    const double strain = (l - ds) / ds;
    phi[i] = std::atan2(s.z[i + 1] - s.z[i], s.x[i + 1] - s.x[i]);
    energy += 0.5 * m.youngs_modulus * area * strain * strain * ds;
  }
  for (int i = 0; i + 2 < s.size(); ++i) {
    const double h =
        g.thickness_base +
        (g.thickness_tip - g.thickness_base) * i / (g.node_count - 1);
    const double second_moment = g.width * h * h * h / 12.0;
    double dphi = phi[i + 1] - phi[i];
    while (dphi > M_PI) dphi -= 2.0 * M_PI;
    while (dphi <= -M_PI) dphi += 2.0 * M_PI;
    energy += 0.5 * m.youngs_modulus * second_moment / ds * dphi * dphi;
  }
  return energy;
}

// Kinetic + elastic + gravitational + restoring-spring energy.
inline double total_energy(const RodState& s, const RodGeometry& g,
                           const RodMaterial& m, const StabilizationParams& st,
                           double gravity) {
  const double ds = g.segment_length();
  double energy = elastic_energy(s, g, m);
  for (int i = 0; i < s.size(); ++i) {
    const double h =
        g.thickness_base +
        (g.thickness_tip - g.thickness_base) * i / (g.node_count - 1);
    const double mass = m.density * g.width * h * ds;
    const double rot = 0.5 * m.density * g.width * h * ds * ds * ds;
    energy += 0.5 * mass * (s.vx[i] * s.vx[i] + s.vz[i] * s.vz[i]);
    energy += 0.5 * rot * s.omega[i] * s.omega[i];
    energy += mass * gravity * s.z[i];
    const double dx = s.x[i] - s.x_ref[i];
    const double dz = s.z[i] - s.z_ref[i];
    energy += 0.5 * st.restoring_k * (dx * dx + dz * dz);
  }
  return energy;
}

inline LegDefinition table1_leg() {
  LegDefinition leg;  // defaults mirror the reference parameter set
  return leg;
}

// Smooth random transverse deformation that avoids exciting stiff axial modes.
inline void deform_smooth(RodState& s, std::mt19937_64& rng, double amplitude) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int n = s.size();
  const double a1 = amplitude * unif(rng);
  const double a2 = amplitude * unif(rng);
  const double p1 = unif(rng) * M_PI;
  for (int i = 1; i < n; ++i) {
    const double u = static_cast<double>(i) / (n - 1);
    s.z[i] += a1 * std::sin(M_PI * u + p1) * u + a2 * u * u;
    s.theta[i] += (a1 + a2) * u / 0.19;
  }
}

}  // namespace softquad::testing
