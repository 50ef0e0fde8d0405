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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "softquad/leg.hpp"
#include "softquad/tendon.hpp"
#include "test_util.hpp"

using namespace softquad;
using doctest::Approx;

TEST_CASE("tension profile: ramp, hold, decay") {
  TendonProfile p;  // 0.5 s each, peak 1.5
  CHECK_THROWS_AS(tension_at(p, -1.0), std::invalid_argument);
  CHECK(tension_at(p, 0.0) == Approx(0.0));
  CHECK(tension_at(p, 0.25) == Approx(1.5 * std::sin(M_PI / 4)));
  CHECK(tension_at(p, 0.5) == Approx(1.5));
  CHECK(tension_at(p, 0.75) == Approx(1.5));
  CHECK(tension_at(p, 1.0) == Approx(1.5));
  CHECK(tension_at(p, 1.25) == Approx(1.5 * 0.5 * (1 + std::cos(M_PI / 2))));
  CHECK(tension_at(p, 1.5) == Approx(0.0));
  CHECK(tension_at(p, 2.0) == 0.0);
}

TEST_CASE("tension profile is continuous") {
  TendonProfile p;
  for (double t = 0.0; t < 1.6; t += 0.01) {
    const double a = tension_at(p, t);
    const double b = tension_at(p, t + 1e-7);
    CHECK(std::abs(a - b) < 1e-5);
  }
}

TEST_CASE("routing covers the proximal two thirds of the rod") {
  RodGeometry g;
  TendonRouting r;
  CHECK(r.routed_node_count(g) == 21);
  r.routed_fraction = 1.0;
  CHECK(r.routed_node_count(g) == 31);
}

TEST_CASE("tendon resultant magnitude equals the applied tension") {
  RodGeometry g;
  RodMaterial m;
  TendonRouting r;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    RodState s = RodState::straight(g, 0.0, 0.05, 0.3 * unif(rng));
    for (int i = 1; i < s.size(); ++i) {
      s.x[i] += 2e-3 * unif(rng);
      s.z[i] += 2e-3 * unif(rng);
    }
    const double tension = 0.5 + unif(rng);
    NodalLoads loads(g.node_count);
    TendonAction act = apply_tendon(s, g, r, tension, loads);
    CHECK(std::hypot(act.fx_total, act.fz_total) == Approx(tension));
    CHECK(loads.fx.sum() == Approx(act.fx_total));
    CHECK(loads.fz.sum() == Approx(act.fz_total));
    // Pulley sits above-behind the base for the reference 168 deg angle.
    CHECK(act.pulley_x < s.x_ref[0]);
    CHECK(act.pulley_z > s.z_ref[0]);
  }
}

TEST_CASE("zero tension leaves the loads untouched") {
  RodGeometry g;
  TendonRouting r;
  RodState s = RodState::straight(g, 0.0, 0.05, 0.0);
  NodalLoads loads(g.node_count);
  apply_tendon(s, g, r, 0.0, loads);
  CHECK(loads.fx.cwiseAbs().maxCoeff() == 0.0);
  CHECK(loads.fz.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("force-to-angle map") {
  ForceAngleMap map;
  CHECK(force_to_angle(map, 0.0) == Approx(64.5794).epsilon(1e-4));
  CHECK(force_to_angle(map, 5.531) == Approx(116.2710).epsilon(1e-4));
  CHECK(force_to_angle(map, 6.0) == Approx(116.28));    // clamped at max
  CHECK(force_to_angle(map, 100.0) == Approx(116.28));  // clamped at max
  CHECK_THROWS_AS(force_to_angle(map, -0.1), std::invalid_argument);
}

TEST_CASE("angle-to-force map and roundtrip") {
  ForceAngleMap map;
  CHECK(angle_to_force(map, 64.5794) == Approx(0.0).epsilon(1e-3));
  CHECK(angle_to_force(map, 10.0) == 0.0);  // clamped at zero force
  CHECK_THROWS_AS(angle_to_force(map, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(angle_to_force(map, 120.0), std::invalid_argument);
  for (double f = 0.0; f < 5.5; f += 0.37) {
    CHECK(angle_to_force(map, force_to_angle(map, f)) == Approx(f).epsilon(1e-9));
  }
}

TEST_CASE("gravity-only static base reaction equals the rod weight") {
  LegDefinition leg = testing::table1_leg();
  leg.base_z = 0.3;  // hang free of the ground
  LegSimulator sim(leg);
  // Settle, then average the reaction over a window.
  for (int i = 0; i < 60000; ++i) sim.step(0.0);
  BaseWrench avg;
  const int window = 5000;
  for (int i = 0; i < window; ++i) avg += sim.step(0.0);
  avg = avg * (1.0 / window);

  double weight = 0.0;
  for (int i = 0; i < leg.geometry.node_count; ++i)
    weight += cross_section(leg.geometry, leg.material, i).mass *
              leg.contact.gravity;
  CHECK(avg.fz == Approx(-weight).epsilon(1e-6));
  CHECK(std::abs(avg.fx) < 1e-6 * weight);
}

TEST_CASE("zero gravity and zero tension give a zero wrench") {
  LegDefinition leg = testing::table1_leg();
  leg.contact.gravity = 0.0;
  leg.base_z = 0.3;
  LegSimulator sim(leg);
  BaseWrench w = sim.step(0.0);
  CHECK(w.fx == Approx(0.0));
  CHECK(w.fz == Approx(0.0));
  CHECK(w.my == Approx(0.0));
}

TEST_CASE("grounded leg statics: reaction plus ground support carries weight") {
  LegDefinition leg = testing::table1_leg();
  leg.pitch = LegDefinition::pitch_for_tip_height(leg.geometry, leg.base_z, 0.0);
  LegSimulator sim(leg);
  for (int i = 0; i < 60000; ++i) sim.step(0.0);
  BaseWrench avg;
  const int window = 5000;
  double ground = 0.0;
  for (int i = 0; i < window; ++i) {
    avg += sim.step(0.0);
    NodalLoads contact(leg.geometry.node_count);
    contact_forces(sim.state(), leg.contact, contact);
    ground += contact.fz.sum();
  }
  avg = avg * (1.0 / window);
  ground /= window;

  double weight = 0.0;
  for (int i = 0; i < leg.geometry.node_count; ++i)
    weight += cross_section(leg.geometry, leg.material, i).mass *
              leg.contact.gravity;
  // The mount reaction and the ground reaction together carry the rod.
  CHECK(-avg.fz + ground == Approx(weight).epsilon(1e-3));
}
