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

#include "softquad/whole_body.hpp"

#include <cmath>

namespace softquad {

namespace {

Eigen::Matrix3d rpy_rotation(const Eigen::Vector3d& att) {
  return (Eigen::AngleAxisd(att.z(), Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(att.y(), Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(att.x(), Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

}  // namespace

RobotDefinition::RobotDefinition() {
  for (int i = 0; i < 4; ++i) {
    LegDefinition& leg = legs[i];
    leg.base_z = initial_height + body.attachments[i].z();
    // Reference tip on the ground: stance-ready pose.
    leg.pitch =
        LegDefinition::pitch_for_tip_height(leg.geometry, leg.base_z, 0.0);
  }
}

void RobotDefinition::validate() const {
  body.validate();
  for (const LegDefinition& leg : legs) leg.validate();
  if (macro_dt <= 0.0)
    throw std::invalid_argument("macro step must be positive");
  for (const LegDefinition& leg : legs)
    if (std::llround(macro_dt / leg.dt) < 1)
      throw std::invalid_argument("macro step shorter than the rod step");
}

WholeBodySim::WholeBodySim(const RobotDefinition& def) : def_(def) {
  def_.validate();
  torso_.position = {0.0, 0.0, def_.initial_height};
  rod_steps_per_macro_ =
      static_cast<int>(std::llround(def_.macro_dt / def_.legs[0].dt));
  for (int i = 0; i < 4; ++i) {
    // Leg base placed at the projection of the attachment onto the leg plane.
    const Eigen::Vector3d att =
        torso_.position + def_.body.attachments[i];
    LegDefinition leg = def_.legs[i];
    const Eigen::Vector2d axis{std::cos(def_.leg_yaw[i]),
                               std::sin(def_.leg_yaw[i])};
    leg.base_x = axis.dot(att.head<2>());
    leg.base_z = att.z();
    legs_[i] = std::make_unique<LegSimulator>(leg);
  }
}

Eigen::Vector3d WholeBodySim::attachment_world(int i) const {
  return torso_.position +
         rpy_rotation(torso_.attitude) * def_.body.attachments[i];
}

Eigen::Vector3d WholeBodySim::tip_world(int i) const {
  const Eigen::Vector2d axis{std::cos(def_.leg_yaw[i]),
                             std::sin(def_.leg_yaw[i])};
  const Eigen::Vector3d att = attachment_world(i);
  const double along = legs_[i]->tip_x() - legs_[i]->state().x[0];
  return {att.x() + axis.x() * along, att.y() + axis.y() * along,
          legs_[i]->tip_z()};
}

std::array<Eigen::Vector3d, 4> WholeBodySim::foot_offsets() const {
  std::array<Eigen::Vector3d, 4> offsets;
  for (int i = 0; i < 4; ++i) offsets[i] = tip_world(i) - torso_.position;
  return offsets;
}

BodyFrame WholeBodySim::macro_step(const std::array<double, 4>& tensions,
                                   const Wrench3& extra) {
  // Attachment moment arms and leg frames are frozen over the macro step,
  // keeping the four leg models mutually independent within it; the torso
  // is substepped at the rod control step and the leg bases track the torso
  // at velocity level so the stiff attachment reactions are integrated in
  // resolved time (position-level resync at the macro rate diverges).
  const Eigen::Matrix3d rot = rpy_rotation(torso_.attitude);
  std::array<Eigen::Vector3d, 4> arms;
  std::array<Eigen::Vector2d, 4> axes;
  for (int i = 0; i < 4; ++i) {
    arms[i] = rot * def_.body.attachments[i];
    axes[i] = {std::cos(def_.leg_yaw[i]), std::sin(def_.leg_yaw[i])};
  }
  const double rod_dt = def_.macro_dt / rod_steps_per_macro_;
  std::array<BaseWrench, 4> avg{};
  Wrench3 net_avg;
  try {
    for (int k = 0; k < rod_steps_per_macro_; ++k) {
      std::array<Wrench3, 4> world{};
      for (int i = 0; i < 4; ++i) {
        // Base velocity from the current torso state, plus a slow drift
        // correction that re-centers the base on the attachment over one
        // macro step (position jumps would shock the anchor springs).
        const Eigen::Vector3d att = torso_.position + arms[i];
        const Eigen::Vector3d v_att =
            torso_.velocity + torso_.angular_velocity.cross(arms[i]);
        const double cur_x = legs_[i]->state().x[0];
        const double cur_z = legs_[i]->state().z[0];
        legs_[i]->move_base(
            cur_x, cur_z,
            axes[i].dot(v_att.head<2>()) +
                (axes[i].dot(att.head<2>()) - cur_x) / def_.macro_dt,
            v_att.z() + (att.z() - cur_z) / def_.macro_dt);
        const BaseWrench w = legs_[i]->step(tensions[i]);
        avg[i] += w;
        world[i].force = {w.fx * axes[i].x(), w.fx * axes[i].y(), w.fz};
        // The planar couple acts about the leg-frame y axis (z cross x).
        world[i].torque = {-axes[i].y() * w.my, axes[i].x() * w.my, 0.0};
      }
      Wrench3 net = aggregate_wrenches(world, arms, def_.include_couples);
      net.force += extra.force;
      net.torque += extra.torque;
      net_avg.force += net.force / rod_steps_per_macro_;
      net_avg.torque += net.torque / rod_steps_per_macro_;
      torso_ = torso_step(torso_, def_.body, net, rod_dt,
                          def_.exact_euler_rates);
    }
  } catch (const RodError& e) {
    throw RodError("whole-body step at t=" + std::to_string(time_) + " s: " +
                   e.what());
  }
  const double scale = 1.0 / rod_steps_per_macro_;
  for (int i = 0; i < 4; ++i) avg[i] = avg[i] * scale;
  const Wrench3 net = net_avg;
  if (!torso_.all_finite())
    throw RodError("torso state went non-finite at t=" + std::to_string(time_));
  time_ += def_.macro_dt;
  BodyFrame frame;
  frame.t = time_;
  frame.torso = torso_;
  frame.net = net;
  frame.reactions = avg;
  for (int i = 0; i < 4; ++i) frame.tip_z[i] = legs_[i]->tip_z();
  return frame;
}

BodyTrajectory whole_body_simulate(const RobotDefinition& robot,
                                   const LegTensionSchedule& schedule,
                                   double duration) {
  if (duration <= 0.0) throw std::invalid_argument("duration must be positive");
  WholeBodySim sim(robot);
  BodyTrajectory traj;
  const long steps =
      static_cast<long>(std::llround(duration / robot.macro_dt));
  for (long s = 0; s < steps; ++s) {
    std::array<double, 4> tensions;
    for (int i = 0; i < 4; ++i) tensions[i] = schedule(i, sim.time());
    traj.frames.push_back(sim.macro_step(tensions));
  }
  return traj;
}

}  // namespace softquad
