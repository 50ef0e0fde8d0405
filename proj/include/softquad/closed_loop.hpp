// Closed-loop locomotion: at each 30 Hz tick the controller reads the
// simulated torso state, builds gait-phased references, solves the force
// MPC, maps the vertical force commands to servo pulling angles, drives the
// rod legs' tendon tensions, and advances the whole-body simulation.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "softquad/dcm.hpp"
#include "softquad/gait.hpp"
#include "softquad/mpc.hpp"
#include "softquad/whole_body.hpp"

namespace softquad {

// How the tangential (fx, fy) force commands act on the plant. The planar
// rod legs cannot generate controlled tangential ground forces, so the
// default applies the commanded tangential wrench to the torso directly;
// "honest" leaves propulsion to the legs alone.
enum class TangentialMode { kCommanded, kHonest };

struct ClosedLoopConfig {
  RobotDefinition robot;
  GaitSchedule gait;
  MpcConfig mpc;
  ReferenceCommand command;
  TendonProfile profile;
  ForceAngleMap force_map;
  double duration = 25.0;  // [s]
  TangentialMode tangential = TangentialMode::kCommanded;

  void validate() const;
};

struct TelemetryRow {
  double t = 0.0;
  double cost = 0.0;
  bool feasible_total = false;
  std::array<bool, 4> feasible_leg{};
  std::array<std::array<double, 3>, 4> force{};  // fx, fy, fz per leg
  std::array<double, 4> theta{};                 // commanded angles [deg]
};

struct ClosedLoopResult {
  BodyTrajectory trajectory;
  std::vector<TelemetryRow> telemetry;
  DcmGrid dcm;
};

ClosedLoopResult run_closed_loop(const ClosedLoopConfig& config);

// `t,cost,feasible_total,feasible_leg1..4,fx1,fy1,fz1,...,theta1..4`.
void write_telemetry_csv(const std::vector<TelemetryRow>& rows,
                         const std::string& path);

// Simulation CoM trajectory as `t,marker_id,x,y,z` rows (marker "com").
void write_com_trajectory_csv(const BodyTrajectory& trajectory,
                              const std::string& path);

}  // namespace softquad
