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
#include <cmath>

#include "doctest.h"
#include "softquad/whole_body.hpp"

using namespace softquad;
using doctest::Approx;

namespace {

// Total ground contact force currently acting on one leg (oracle recomputed
// from the rod state with the plain contact law).
double leg_ground_force(const LegSimulator& leg) {
  const LegDefinition& def = leg.definition();
  const RodState& state = leg.state();
  double total = 0.0;
  for (int i = 0; i < state.size(); ++i) {
    if (state.z[i] >= 0.0) continue;
    const double f = -def.contact.stiffness * state.z[i] -
                     def.contact.damping * state.vz[i];
    total += std::max(f, 0.0);
  }
  return total;
}

double passive(int, double) { return 0.0; }

}  // namespace

TEST_CASE("robot construction places leg bases under the attachments") {
  const RobotDefinition robot;
  WholeBodySim sim(robot);
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector3d att = sim.attachment_world(i);
    CHECK(att.z() == Approx(0.04 - 0.017).epsilon(1e-12));
    // The planar leg base sits at the attachment height.
    CHECK(sim.leg(i).state().z[0] == Approx(att.z()).epsilon(1e-12));
    // Reference tips start on the ground.
    CHECK(sim.leg(i).tip_z() == Approx(0.0).epsilon(1e-6));
  }
  // Front legs point forward, back legs point backward in world x.
  CHECK(sim.tip_world(kFrontLeft).x() > sim.attachment_world(kFrontLeft).x());
  CHECK(sim.tip_world(kBackRight).x() < sim.attachment_world(kBackRight).x());
  // Tips keep the lateral coordinate of their attachment.
  for (int i = 0; i < 4; ++i)
    CHECK(sim.tip_world(i).y() ==
          Approx(sim.attachment_world(i).y()).epsilon(1e-12));
}

TEST_CASE("passive standing settles within two seconds") {
  const RobotDefinition robot;
  const BodyTrajectory traj = whole_body_simulate(robot, passive, 3.0);
  REQUIRE(!traj.frames.empty());
  // The bounce decays through ~1e-3 m/s around the 2 s mark; judge the
  // settled window after 2.5 s to stay clear of the crossover.
  double max_speed_settled = 0.0;
  for (const BodyFrame& f : traj.frames)
    if (f.t > 2.5)
      max_speed_settled =
          std::max(max_speed_settled, std::abs(f.torso.velocity.z()));
  CHECK(max_speed_settled < 1e-3);
  const TorsoState& last = traj.frames.back().torso;
  CHECK(last.position.z() > 0.0);
  CHECK(last.position.z() < 0.04);
  CHECK(std::abs(last.attitude.x()) < 1e-3);
  CHECK(std::abs(last.attitude.y()) < 0.05);
}

TEST_CASE("steady stance carries the full robot weight on the ground") {
  const RobotDefinition robot;
  WholeBodySim sim(robot);
  std::array<double, 4> zero{0.0, 0.0, 0.0, 0.0};
  BodyFrame frame{};
  while (sim.time() < 3.0) frame = sim.macro_step(zero);
  // Ground reaction balances the whole robot: torso plus four legs.
  double ground = 0.0;
  for (int i = 0; i < 4; ++i) ground += leg_ground_force(sim.leg(i));
  CHECK(ground == Approx(21.19).epsilon(2e-3));
  // Attachment reactions balance the torso weight alone.
  CHECK(frame.net.force.z() ==
        Approx(robot.body.mass * robot.body.gravity).epsilon(2e-3));
  CHECK(std::abs(frame.net.force.x()) < 0.05);
  CHECK(std::abs(frame.net.torque.x()) < 0.01);
}

TEST_CASE("torso impulse bookkeeping matches the recorded net forces") {
  const RobotDefinition robot;
  const BodyTrajectory traj = whole_body_simulate(robot, passive, 1.0);
  const double m = robot.body.mass;
  Eigen::Vector3d impulse = Eigen::Vector3d::Zero();
  for (const BodyFrame& f : traj.frames) impulse += f.net.force * robot.macro_dt;
  impulse.z() -= m * robot.body.gravity * traj.frames.size() * robot.macro_dt;
  const Eigen::Vector3d dv = traj.frames.back().torso.velocity * m;
  CHECK((impulse - dv).norm() < 1e-9 * std::max(1.0, impulse.norm()));
}

TEST_CASE("mirror-symmetric tendon schedules mirror roll and lateral motion") {
  const RobotDefinition robot;
  const auto left = [](int leg, double t) {
    return (leg == kFrontLeft || leg == kBackLeft) ? 0.8 * std::min(t, 1.0)
                                                   : 0.0;
  };
  const auto right = [](int leg, double t) {
    return (leg == kFrontRight || leg == kBackRight) ? 0.8 * std::min(t, 1.0)
                                                     : 0.0;
  };
  const BodyTrajectory a = whole_body_simulate(robot, left, 1.5);
  const BodyTrajectory b = whole_body_simulate(robot, right, 1.5);
  REQUIRE(a.frames.size() == b.frames.size());
  for (size_t k = 0; k < a.frames.size(); ++k) {
    const TorsoState& ta = a.frames[k].torso;
    const TorsoState& tb = b.frames[k].torso;
    CHECK(std::abs(ta.angular_velocity.x() + tb.angular_velocity.x()) < 1e-6);
    CHECK(std::abs(ta.velocity.y() + tb.velocity.y()) < 1e-6);
    CHECK(std::abs(ta.attitude.x() + tb.attitude.x()) < 1e-6);
    // Pitch and vertical motion are identical, not mirrored.
    CHECK(std::abs(ta.attitude.y() - tb.attitude.y()) < 1e-6);
    CHECK(std::abs(ta.position.z() - tb.position.z()) < 1e-6);
  }
}

TEST_CASE("extra world wrench accelerates the settled torso") {
  const RobotDefinition robot;
  WholeBodySim sim(robot);
  std::array<double, 4> zero{0.0, 0.0, 0.0, 0.0};
  while (sim.time() < 2.5) sim.macro_step(zero);
  Wrench3 push;
  push.force = {0.5, 0.2, 0.0};
  const double x0 = sim.torso().position.x();
  const double y0 = sim.torso().position.y();
  for (int k = 0; k < 15; ++k) sim.macro_step(zero, push);
  CHECK(sim.torso().position.x() > x0 + 1e-5);
  CHECK(sim.torso().position.y() > y0 + 1e-6);
}

TEST_CASE("leg failures are reported with simulation context") {
  RobotDefinition robot;
  // Integrating the stiff rod at the full macro step blows it apart within
  // a few steps; the resulting error must carry simulation context instead
  // of silently producing a non-finite torso.
  robot.legs[0].dt = robot.macro_dt;
  robot.legs[0].max_substep = robot.macro_dt;
  WholeBodySim sim(robot);
  std::array<double, 4> zero{0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(
      [&] {
        for (int k = 0; k < 300; ++k) sim.macro_step(zero);
      }(),
      RodError);
}

TEST_CASE("whole-body simulate validates the duration") {
  const RobotDefinition robot;
  CHECK_THROWS_AS(whole_body_simulate(robot, passive, 0.0),
                  std::invalid_argument);
}
