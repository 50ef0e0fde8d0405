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

#include "softquad/gait.hpp"

#include <cmath>
#include <stdexcept>

namespace softquad {

namespace {

constexpr std::array<const char*, 4> kLegNames{"FL", "FR", "BL", "BR"};

int leg_index_from_string(const std::string& s) {
  for (int i = 0; i < 4; ++i)
    if (s == kLegNames[i]) return i;
  throw std::invalid_argument("unknown leg name: " + s);
}

}  // namespace

void GaitSchedule::validate() const {
  if (phases.empty()) throw std::invalid_argument("gait has no phases");
  double total = 0.0;
  for (const GaitPhase& phase : phases) {
    if (phase.duration <= 0.0)
      throw std::invalid_argument("phase durations must be positive");
    for (double mu : phase.mu)
      if (!(mu > 0.0 && mu <= 1.0))
        throw std::invalid_argument("friction coefficients must be in (0, 1]");
    bool any = false;
    for (bool a : phase.active) any = any || a;
    for (bool s : phase.stance) any = any || s;
    if (!any) throw std::invalid_argument("phase engages no leg");
    total += phase.duration;
  }
  if (std::abs(total - cycle_duration) > 1e-9)
    throw std::invalid_argument("phase durations must sum to the cycle");
}

GaitSchedule make_walk_gait() {
  // Two-phase alternation: one front leg contracts while the other relaxes;
  // back legs give constant support. Contracting front leg grips (0.6), the
  // relaxing front leg slips (0.2), back legs stay at 0.1.
  GaitSchedule gait;
  gait.name = GaitName::kWalk;
  gait.cycle_duration = 5.0;
  GaitPhase a;
  a.duration = 2.5;
  a.active = {true, false, false, false};   // FL contracting
  a.stance = {true, true, true, true};
  a.mu = {0.6, 0.2, 0.1, 0.1};
  GaitPhase b;
  b.duration = 2.5;
  b.active = {false, true, false, false};   // FR contracting
  b.stance = {true, true, true, true};
  b.mu = {0.2, 0.6, 0.1, 0.1};
  gait.phases = {a, b};
  return gait;
}

GaitSchedule make_crawl_gait() {
  // Four-phase single-leg sequence FL -> BR -> FR -> BL, 2 s each; the
  // contracting leg is unloaded (swing) while the other three bear load.
  GaitSchedule gait;
  gait.name = GaitName::kCrawl;
  gait.cycle_duration = 8.0;
  const std::array<int, 4> order{kFrontLeft, kBackRight, kFrontRight,
                                 kBackLeft};
  for (int leg : order) {
    GaitPhase phase;
    phase.duration = 2.0;
    phase.active = {false, false, false, false};
    phase.active[leg] = true;
    phase.stance = {true, true, true, true};
    phase.stance[leg] = false;
    phase.mu = {0.6, 0.6, 0.1, 0.1};
    gait.phases.push_back(phase);
  }
  return gait;
}

GaitSchedule make_omni60_gait() {
  // Omnidirectional 60-degree heading: full-stance support with alternating
  // front contraction (walk friction values); the heading comes from the
  // velocity references rather than the switching table.
  GaitSchedule gait = make_walk_gait();
  gait.name = GaitName::kOmni60;
  return gait;
}

PhaseInfo phase_at(const GaitSchedule& schedule, double t) {
  schedule.validate();
  if (t < 0.0) throw std::invalid_argument("gait time must be non-negative");
  double local = std::fmod(t, schedule.cycle_duration);
  PhaseInfo info;
  for (size_t i = 0; i < schedule.phases.size(); ++i) {
    const GaitPhase& phase = schedule.phases[i];
    if (local < phase.duration || i + 1 == schedule.phases.size()) {
      info.index = static_cast<int>(i);
      info.active = phase.active;
      info.stance = phase.stance;
      info.mu = phase.mu;
      info.local_time = local;
      return info;
    }
    local -= phase.duration;
  }
  throw std::logic_error("unreachable: validated gait covers the cycle");
}

void ReferenceCommand::validate() const {
  if (!(pz > 0.0) || !std::isfinite(pz) || !std::isfinite(vx) ||
      !std::isfinite(vy) || !std::isfinite(x0) || !std::isfinite(y0))
    throw std::invalid_argument("reference command must be finite with pz > 0");
}

std::vector<TorsoState> reference_trajectory(const ReferenceCommand& command,
                                             double t0, int horizon,
                                             double dt) {
  command.validate();
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (dt <= 0.0) throw std::invalid_argument("reference step must be positive");
  std::vector<TorsoState> refs(horizon);
  for (int k = 0; k < horizon; ++k) {
    const double t = t0 + k * dt;
    refs[k].position = {command.x0 + command.vx * t,
                        command.y0 + command.vy * t, command.pz};
    refs[k].velocity = {command.vx, command.vy, 0.0};
  }
  return refs;
}

double gait_tension(const GaitSchedule& schedule, const TendonProfile& profile,
                    int leg, double t) {
  if (leg < 0 || leg > 3) throw std::invalid_argument("leg index out of range");
  const PhaseInfo info = phase_at(schedule, t);
  if (!info.active[leg]) return 0.0;
  return tension_at(profile, info.local_time);
}

GaitName gait_name_from_string(const std::string& name) {
  if (name == "walk") return GaitName::kWalk;
  if (name == "crawl") return GaitName::kCrawl;
  if (name == "omni60") return GaitName::kOmni60;
  throw std::invalid_argument("unknown gait name: " + name);
}

std::string to_string(GaitName name) {
  switch (name) {
    case GaitName::kWalk: return "walk";
    case GaitName::kCrawl: return "crawl";
    case GaitName::kOmni60: return "omni60";
  }
  throw std::logic_error("unhandled gait name");
}

GaitSchedule schedule_from_json(const nlohmann::json& j) {
  GaitSchedule gait;
  gait.name = gait_name_from_string(j.at("name").get<std::string>());
  gait.cycle_duration = j.at("cycle_duration").get<double>();
  for (const nlohmann::json& p : j.at("phases")) {
    GaitPhase phase;
    phase.duration = p.at("duration").get<double>();
    phase.active = {false, false, false, false};
    for (const nlohmann::json& leg : p.at("active_legs"))
      phase.active[leg_index_from_string(leg.get<std::string>())] = true;
    phase.stance = {true, true, true, true};
    if (p.contains("swing_legs"))
      for (const nlohmann::json& leg : p.at("swing_legs"))
        phase.stance[leg_index_from_string(leg.get<std::string>())] = false;
    const nlohmann::json& mu = p.at("mu");
    for (int i = 0; i < 4; ++i) phase.mu[i] = mu.at(kLegNames[i]).get<double>();
    gait.phases.push_back(phase);
  }
  gait.validate();
  return gait;
}

nlohmann::json schedule_to_json(const GaitSchedule& schedule) {
  nlohmann::json j;
  j["name"] = to_string(schedule.name);
  j["cycle_duration"] = schedule.cycle_duration;
  j["phases"] = nlohmann::json::array();
  for (const GaitPhase& phase : schedule.phases) {
    nlohmann::json p;
    p["duration"] = phase.duration;
    p["active_legs"] = nlohmann::json::array();
    p["swing_legs"] = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
      if (phase.active[i]) p["active_legs"].push_back(kLegNames[i]);
      if (!phase.stance[i]) p["swing_legs"].push_back(kLegNames[i]);
      p["mu"][kLegNames[i]] = phase.mu[i];
    }
    j["phases"].push_back(p);
  }
  return j;
}

}  // namespace softquad
