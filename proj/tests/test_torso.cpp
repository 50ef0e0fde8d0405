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
#include <random>

#include "doctest.h"
#include "softquad/torso.hpp"

using namespace softquad;
using doctest::Approx;

TEST_CASE("cuboid inertia of a unit cube is diag(1/6)") {
  const Eigen::Matrix3d inertia =
      cuboid_inertia(Eigen::Vector3d{1.0, 1.0, 1.0}, 1.0);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      CHECK(inertia(r, c) == Approx(r == c ? 1.0 / 6.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("cuboid inertia matches the hand-evaluated torso pitch term") {
  const Eigen::Matrix3d inertia =
      cuboid_inertia(Eigen::Vector3d{0.1255, 0.0855, 0.034}, 2.0);
  CHECK(inertia(1, 1) ==
        Approx((2.0 / 12.0) * (0.1255 * 0.1255 + 0.034 * 0.034))
            .epsilon(1e-12));
  CHECK(inertia(1, 1) == Approx(2.818e-3).epsilon(1e-3));
}

TEST_CASE("swapping the first two cuboid dimensions permutes Ixx and Iyy") {
  const Eigen::Vector3d dims{0.3, 0.12, 0.07};
  const Eigen::Matrix3d a = cuboid_inertia(dims, 1.7);
  const Eigen::Matrix3d b =
      cuboid_inertia(Eigen::Vector3d{dims.y(), dims.x(), dims.z()}, 1.7);
  CHECK(a(0, 0) == Approx(b(1, 1)).epsilon(1e-14));
  CHECK(a(1, 1) == Approx(b(0, 0)).epsilon(1e-14));
  CHECK(a(2, 2) == Approx(b(2, 2)).epsilon(1e-14));
}

TEST_CASE("cuboid inertia rejects non-positive inputs") {
  CHECK_THROWS_AS(cuboid_inertia(Eigen::Vector3d{1.0, -1.0, 1.0}, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(cuboid_inertia(Eigen::Vector3d{1.0, 1.0, 1.0}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("default torso body places attachments at the bottom corners") {
  const TorsoBody body;
  body.validate();
  for (const Eigen::Vector3d& r : body.attachments) {
    CHECK(std::abs(r.x()) == Approx(0.1255 / 2.0));
    CHECK(std::abs(r.y()) == Approx(0.0855 / 2.0));
    CHECK(r.z() == Approx(-0.034 / 2.0));
  }
  CHECK(body.attachments[kFrontLeft].x() > 0.0);
  CHECK(body.attachments[kFrontLeft].y() > 0.0);
  CHECK(body.attachments[kBackRight].x() < 0.0);
  CHECK(body.attachments[kBackRight].y() < 0.0);
}

TEST_CASE("four equal vertical corner forces aggregate to zero torque") {
  const TorsoBody body;
  std::array<Wrench3, 4> reactions{};
  const double fz = 21.19 / 4.0;
  for (Wrench3& w : reactions) w.force = {0.0, 0.0, fz};
  const Wrench3 net = aggregate_wrenches(reactions, body.attachments);
  CHECK(net.force.x() == Approx(0.0).epsilon(1e-12));
  CHECK(net.force.y() == Approx(0.0).epsilon(1e-12));
  CHECK(net.force.z() == Approx(21.19).epsilon(1e-12));
  CHECK(net.torque.norm() == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("a single corner force produces the cross-product torque") {
  const TorsoBody body;
  std::array<Wrench3, 4> reactions{};
  reactions[kFrontLeft].force = {0.0, 0.0, 5.0};
  const Wrench3 net = aggregate_wrenches(reactions, body.attachments);
  const Eigen::Vector3d expected =
      body.attachments[kFrontLeft].cross(Eigen::Vector3d{0.0, 0.0, 5.0});
  CHECK((net.torque - expected).norm() == Approx(0.0).epsilon(1e-12));
  CHECK((net.force - reactions[kFrontLeft].force).norm() ==
        Approx(0.0).epsilon(1e-12));
}

TEST_CASE("zero wrenches aggregate to zero") {
  const TorsoBody body;
  const Wrench3 net = aggregate_wrenches({}, body.attachments);
  CHECK(net.force.norm() == 0.0);
  CHECK(net.torque.norm() == 0.0);
}

TEST_CASE("attachment couples can be excluded from the aggregate torque") {
  const TorsoBody body;
  std::array<Wrench3, 4> reactions{};
  reactions[kBackLeft].torque = {0.0, 0.3, 0.0};
  const Wrench3 with = aggregate_wrenches(reactions, body.attachments, true);
  const Wrench3 without =
      aggregate_wrenches(reactions, body.attachments, false);
  CHECK(with.torque.y() == Approx(0.3).epsilon(1e-12));
  CHECK(without.torque.norm() == 0.0);
}

TEST_CASE("torso step with zero wrench and zero gravity is a fixed point") {
  TorsoBody body;
  body.gravity = 0.0;
  TorsoState state;
  state.position = {0.1, -0.2, 0.3};
  state.attitude = {0.01, -0.02, 0.03};
  const TorsoState next = torso_step(state, body, Wrench3{}, 0.033);
  CHECK((next.position - state.position).norm() == 0.0);
  CHECK((next.velocity - state.velocity).norm() == 0.0);
  CHECK((next.attitude - state.attitude).norm() == 0.0);
  CHECK((next.angular_velocity - state.angular_velocity).norm() == 0.0);
}

TEST_CASE("a net upward force equal to the weight hovers") {
  const TorsoBody body;
  TorsoState state;
  state.position = {0.0, 0.0, 0.04};
  Wrench3 net;
  net.force = {0.0, 0.0, body.mass * body.gravity};
  for (int k = 0; k < 1000; ++k) state = torso_step(state, body, net, 1e-3);
  CHECK(state.velocity.norm() == Approx(0.0).epsilon(1e-12));
  CHECK(state.position.z() == Approx(0.04).epsilon(1e-12));
}

TEST_CASE("a pure pitch torque integrates to the single-axis rate") {
  TorsoBody body;
  body.gravity = 0.0;
  TorsoState state;
  Wrench3 net;
  net.torque = {0.0, 0.02, 0.0};
  const double dt = 1e-3;
  const int steps = 500;
  for (int k = 0; k < steps; ++k) state = torso_step(state, body, net, dt);
  const double expected = net.torque.y() / body.inertia(1, 1) * steps * dt;
  CHECK(state.angular_velocity.y() == Approx(expected).epsilon(1e-9));
  CHECK(state.angular_velocity.x() == 0.0);
  CHECK(state.angular_velocity.z() == 0.0);
}

TEST_CASE("the angular update is exactly linear in the applied torque") {
  TorsoBody body;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    TorsoState state;
    state.angular_velocity = {unit(rng), unit(rng), unit(rng)};
    Wrench3 net;
    net.torque = {unit(rng), unit(rng), unit(rng)};
    Wrench3 twice;
    twice.torque = 2.0 * net.torque;
    const Eigen::Vector3d base = state.angular_velocity;
    const Eigen::Vector3d one =
        torso_step(state, body, net, 0.033).angular_velocity - base;
    const Eigen::Vector3d two =
        torso_step(state, body, twice, 0.033).angular_velocity - base;
    CHECK((two - 2.0 * one).norm() == Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("the exact Euler-rate mapping rejects gimbal-lock attitudes") {
  TorsoBody body;
  body.gravity = 0.0;
  TorsoState state;
  state.attitude = {0.0, M_PI / 2.0, 0.0};
  state.angular_velocity = {0.1, 0.0, 0.0};
  CHECK_THROWS_AS(torso_step(state, body, Wrench3{}, 1e-3, true),
                  std::domain_error);
}

TEST_CASE("small-angle and exact Euler rates agree near level attitude") {
  TorsoBody body;
  body.gravity = 0.0;
  TorsoState state;
  state.attitude = {0.002, -0.003, 0.001};
  state.angular_velocity = {0.05, -0.04, 0.03};
  const TorsoState a = torso_step(state, body, Wrench3{}, 1e-3, false);
  const TorsoState b = torso_step(state, body, Wrench3{}, 1e-3, true);
  // The exact mapping differs from the small-angle one at O(theta*omega*dt).
  CHECK((a.attitude - b.attitude).norm() < 5e-7);
}

TEST_CASE("attitude stays wrapped to (-pi, pi]") {
  TorsoBody body;
  body.gravity = 0.0;
  TorsoState state;
  state.attitude = {0.0, 0.0, M_PI - 1e-3};
  state.angular_velocity = {0.0, 0.0, 1.0};
  for (int k = 0; k < 10; ++k) state = torso_step(state, body, Wrench3{}, 1e-3);
  CHECK(state.attitude.z() <= M_PI);
  CHECK(state.attitude.z() > -M_PI);
  CHECK(state.attitude.z() == Approx(-M_PI + 9e-3).epsilon(1e-6));
}
