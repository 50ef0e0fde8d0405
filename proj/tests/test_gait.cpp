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
#include <set>

#include "doctest.h"
#include "softquad/gait.hpp"

using namespace softquad;
using doctest::Approx;

TEST_CASE("walk phase zero contracts a front leg over constant back support") {
  const GaitSchedule walk = make_walk_gait();
  CHECK(walk.cycle_duration == 5.0);
  const PhaseInfo info = phase_at(walk, 0.0);
  CHECK(info.index == 0);
  CHECK(info.active[kFrontLeft]);
  CHECK(!info.active[kBackLeft]);
  CHECK(!info.active[kBackRight]);
  const std::set<double> fronts{info.mu[kFrontLeft], info.mu[kFrontRight]};
  CHECK(fronts == std::set<double>{0.6, 0.2});
  CHECK(info.mu[kBackLeft] == 0.1);
  CHECK(info.mu[kBackRight] == 0.1);
  // The contracting front leg gets the gripping coefficient.
  CHECK(info.mu[kFrontLeft] == 0.6);
  for (bool s : info.stance) CHECK(s);
}

TEST_CASE("phase lookup is periodic in the cycle duration") {
  for (const GaitSchedule& gait :
       {make_walk_gait(), make_crawl_gait(), make_omni60_gait()}) {
    for (double t : {0.0, 0.7, 1.9, 2.5, 3.3, 4.999}) {
      for (int k : {1, 2, 7}) {
        const PhaseInfo a = phase_at(gait, t);
        const PhaseInfo b = phase_at(gait, t + k * gait.cycle_duration);
        CHECK(a.index == b.index);
        CHECK(a.active == b.active);
        CHECK(a.mu == b.mu);
        CHECK(a.local_time == Approx(b.local_time).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("crawl sweeps four distinct phases with each leg active once") {
  const GaitSchedule crawl = make_crawl_gait();
  CHECK(crawl.cycle_duration == 8.0);
  std::set<int> seen_phases;
  std::set<int> seen_legs;
  for (double t = 0.0; t < 8.0; t += 0.25) {
    const PhaseInfo info = phase_at(crawl, t);
    seen_phases.insert(info.index);
    int active = -1, count = 0;
    for (int i = 0; i < 4; ++i)
      if (info.active[i]) {
        active = i;
        ++count;
      }
    CHECK(count == 1);
    CHECK(!info.stance[active]);  // the contracting leg is unloaded
    seen_legs.insert(active);
  }
  CHECK(seen_phases.size() == 4);
  CHECK(seen_legs.size() == 4);
}

TEST_CASE("every time has a defined friction set and engaged legs") {
  for (const GaitSchedule& gait :
       {make_walk_gait(), make_crawl_gait(), make_omni60_gait()}) {
    for (double t = 0.0; t < 2.0 * gait.cycle_duration; t += 0.081) {
      const PhaseInfo info = phase_at(gait, t);
      bool any_stance = false;
      for (int i = 0; i < 4; ++i) {
        CHECK(info.mu[i] > 0.0);
        CHECK(info.mu[i] <= 1.0);
        any_stance = any_stance || info.stance[i];
      }
      CHECK(any_stance);
    }
  }
}

TEST_CASE("walk references hold the commanded height and forward speed") {
  ReferenceCommand command;
  command.vx = 0.08;
  command.pz = 0.04;
  const std::vector<TorsoState> refs =
      reference_trajectory(command, 3.7, 15, 0.033);
  CHECK(refs.size() == 15);
  for (const TorsoState& r : refs) {
    CHECK(r.position.z() == 0.04);
    CHECK(r.velocity.x() == 0.08);
    CHECK(r.velocity.y() == 0.0);
    CHECK(r.attitude.norm() == 0.0);
    CHECK(r.angular_velocity.norm() == 0.0);
  }
  CHECK(refs[1].position.x() - refs[0].position.x() ==
        Approx(0.08 * 0.033).epsilon(1e-12));
}

TEST_CASE("omni references aim at the sixty-degree heading") {
  ReferenceCommand command;
  command.vx = 0.052;
  command.vy = 0.09;
  const std::vector<TorsoState> refs =
      reference_trajectory(command, 0.0, 5, 0.033);
  const double ratio = refs[0].velocity.y() / refs[0].velocity.x();
  CHECK(ratio == Approx(std::tan(M_PI / 3.0)).epsilon(1e-2));
  CHECK(ratio == Approx(1.73).epsilon(1e-2));
}

TEST_CASE("zero-velocity command yields a constant standing reference") {
  ReferenceCommand command;
  const std::vector<TorsoState> refs =
      reference_trajectory(command, 11.0, 10, 0.05);
  for (const TorsoState& r : refs) {
    CHECK(r.position.x() == 0.0);
    CHECK(r.position.y() == 0.0);
    CHECK(r.position.z() == 0.04);
    CHECK(r.velocity.norm() == 0.0);
  }
}

TEST_CASE("reference sequences are consistent under horizon splitting") {
  ReferenceCommand command;
  command.vx = 0.08;
  command.vy = -0.03;
  command.x0 = 0.2;
  const double dt = 0.033;
  for (double t0 : {0.0, 1.234, 17.5}) {
    const std::vector<TorsoState> from_t0 =
        reference_trajectory(command, t0, 15, dt);
    for (int k = 0; k < 15; ++k) {
      const std::vector<TorsoState> shifted =
          reference_trajectory(command, t0 + k * dt, 1, dt);
      CHECK((from_t0[k].position - shifted[0].position).norm() < 1e-12);
      CHECK((from_t0[k].velocity - shifted[0].velocity).norm() < 1e-12);
    }
  }
}

TEST_CASE("gait tension replays the profile on the active leg only") {
  const GaitSchedule crawl = make_crawl_gait();
  const TendonProfile profile;
  // Phase 0 activates the front-left leg.
  CHECK(gait_tension(crawl, profile, kFrontLeft, 0.25) ==
        Approx(tension_at(profile, 0.25)).epsilon(1e-12));
  CHECK(gait_tension(crawl, profile, kFrontRight, 0.25) == 0.0);
  // Phase 1 activates the back-right leg with phase-local time.
  CHECK(gait_tension(crawl, profile, kBackRight, 2.25) ==
        Approx(tension_at(profile, 0.25)).epsilon(1e-12));
  CHECK(gait_tension(crawl, profile, kFrontLeft, 2.25) == 0.0);
}

TEST_CASE("invalid schedules and commands are rejected") {
  GaitSchedule bad = make_walk_gait();
  bad.cycle_duration = 6.0;  // no longer matches the phase table
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = make_walk_gait();
  bad.phases[0].mu[0] = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(phase_at(make_walk_gait(), -0.1), std::invalid_argument);
  ReferenceCommand command;
  command.pz = 0.0;
  CHECK_THROWS_AS(command.validate(), std::invalid_argument);
}

TEST_CASE("gait schedules survive a JSON round trip") {
  for (const GaitSchedule& gait :
       {make_walk_gait(), make_crawl_gait(), make_omni60_gait()}) {
    const GaitSchedule back = schedule_from_json(schedule_to_json(gait));
    CHECK(back.name == gait.name);
    CHECK(back.cycle_duration == gait.cycle_duration);
    REQUIRE(back.phases.size() == gait.phases.size());
    for (size_t i = 0; i < gait.phases.size(); ++i) {
      CHECK(back.phases[i].duration == gait.phases[i].duration);
      CHECK(back.phases[i].active == gait.phases[i].active);
      CHECK(back.phases[i].stance == gait.phases[i].stance);
      CHECK(back.phases[i].mu == gait.phases[i].mu);
    }
  }
}
