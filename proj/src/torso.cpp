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

#include "softquad/torso.hpp"

#include <cmath>

namespace softquad {

namespace {

double wrap_pi(double a) {
  // remainder() wraps in constant time even for huge (diverging) angles,
  // where a subtract-2*pi loop would effectively hang.
  const double r = std::remainder(a, 2.0 * M_PI);
  return r <= -M_PI ? r + 2.0 * M_PI : r;
}

}  // namespace

bool TorsoState::all_finite() const {
  return position.allFinite() && velocity.allFinite() &&
         attitude.allFinite() && angular_velocity.allFinite();
}

Eigen::Matrix3d cuboid_inertia(const Eigen::Vector3d& dims, double mass) {
  if (mass <= 0.0 || (dims.array() <= 0.0).any())
    throw std::invalid_argument("cuboid inertia needs positive mass and dims");
  const double a = dims.x(), b = dims.y(), c = dims.z();
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();
  inertia(0, 0) = mass / 12.0 * (b * b + c * c);
  inertia(1, 1) = mass / 12.0 * (a * a + c * c);
  inertia(2, 2) = mass / 12.0 * (a * a + b * b);
  return inertia;
}

TorsoBody::TorsoBody() : inertia(cuboid_inertia(dims, mass)) {
  const double hx = dims.x() / 2.0, hy = dims.y() / 2.0, hz = dims.z() / 2.0;
  attachments[kFrontLeft] = {hx, hy, -hz};
  attachments[kFrontRight] = {hx, -hy, -hz};
  attachments[kBackLeft] = {-hx, hy, -hz};
  attachments[kBackRight] = {-hx, -hy, -hz};
}

void TorsoBody::validate() const {
  if (mass <= 0.0) throw std::invalid_argument("torso mass must be positive");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(inertia);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("torso inertia must be positive definite");
  if (gravity < 0.0) throw std::invalid_argument("gravity magnitude < 0");
}

Wrench3 aggregate_wrenches(const std::array<Wrench3, 4>& reactions,
                           const std::array<Eigen::Vector3d, 4>& attachments,
                           bool include_couples) {
  Wrench3 net;
  for (int i = 0; i < 4; ++i) {
    net.force += reactions[i].force;
    net.torque += attachments[i].cross(reactions[i].force);
    if (include_couples) net.torque += reactions[i].torque;
  }
  return net;
}

TorsoState torso_step(const TorsoState& state, const TorsoBody& body,
                      const Wrench3& net, double dt, bool exact_euler_rates) {
  if (dt <= 0.0) throw std::invalid_argument("time step must be positive");
  TorsoState next = state;
  const Eigen::Vector3d accel =
      net.force / body.mass - Eigen::Vector3d(0, 0, body.gravity);
  // Gyroscopic term omega x (I omega) neglected: angular response is linear
  // in the applied torque.
  const Eigen::Vector3d alpha = body.inertia.ldlt().solve(net.torque);
  next.velocity += accel * dt;
  next.angular_velocity += alpha * dt;
  next.position += next.velocity * dt;
  Eigen::Vector3d rates = next.angular_velocity;
  if (exact_euler_rates) {
    const double roll = state.attitude.x(), pitch = state.attitude.y();
    const double cp = std::cos(pitch);
    if (std::abs(cp) < 1e-9)
      throw std::domain_error("euler-rate mapping singular at pitch +-pi/2");
    const double sr = std::sin(roll), cr = std::cos(roll);
    const double tp = std::tan(pitch);
    const Eigen::Vector3d& w = next.angular_velocity;
    rates = {w.x() + sr * tp * w.y() + cr * tp * w.z(),
             cr * w.y() - sr * w.z(), (sr * w.y() + cr * w.z()) / cp};
  }
  next.attitude += rates * dt;
  for (int i = 0; i < 3; ++i) next.attitude[i] = wrap_pi(next.attitude[i]);
  return next;
}

}  // namespace softquad
