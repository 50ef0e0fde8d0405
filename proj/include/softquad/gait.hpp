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

#include <array>
#include <string>
#include <vector>

#include "json.hpp"
#include "softquad/tendon.hpp"
#include "softquad/torso.hpp"

namespace softquad {

enum class GaitName { kWalk, kCrawl, kOmni60 };

// One switching phase: which legs contract, which legs count as stance for
// the force controller, and the per-leg friction coefficients it may use.
struct GaitPhase {
  double duration = 0.0;                                    // [s]
  std::array<bool, 4> active{false, false, false, false};   // contracting
  std::array<bool, 4> stance{true, true, true, true};       // load-bearing
  std::array<double, 4> mu{0.1, 0.1, 0.1, 0.1};
};

struct GaitSchedule {
  GaitName name = GaitName::kWalk;
  double cycle_duration = 0.0;  // [s]
  std::vector<GaitPhase> phases;

  void validate() const;
};

// Built-in schedules (all fields remain configurable via JSON).
GaitSchedule make_walk_gait();
GaitSchedule make_crawl_gait();
GaitSchedule make_omni60_gait();

struct PhaseInfo {
  int index = 0;
  std::array<bool, 4> active{};
  std::array<bool, 4> stance{};
  std::array<double, 4> mu{};
  double local_time = 0.0;  // time elapsed inside this phase [s]
};

// Phase containing time t (periodic in the cycle duration).
PhaseInfo phase_at(const GaitSchedule& schedule, double t);

// Velocity and body-height targets tracked by the force controller.
struct ReferenceCommand {
  double vx = 0.0;      // [m/s]
  double vy = 0.0;      // [m/s]
  double pz = 0.04;     // [m]
  double x0 = 0.0;      // position reference origin at t = 0 [m]
  double y0 = 0.0;

  void validate() const;
};

// H reference states sampled at t0, t0+dt, ...; positions advance at the
// commanded velocities from the command origin, attitude references are zero.
std::vector<TorsoState> reference_trajectory(const ReferenceCommand& command,
                                             double t0, int horizon,
                                             double dt);

// Open-loop tendon tension for one leg: active legs replay the profile from
// the start of the current phase, inactive legs are slack.
double gait_tension(const GaitSchedule& schedule, const TendonProfile& profile,
                    int leg, double t);

// JSON round-trip for gait config files.
GaitSchedule schedule_from_json(const nlohmann::json& j);
nlohmann::json schedule_to_json(const GaitSchedule& schedule);

GaitName gait_name_from_string(const std::string& name);
std::string to_string(GaitName name);

}  // namespace softquad
