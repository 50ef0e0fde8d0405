// Perturbation stability study: runs the force MPC against its own
// linearized torso prediction model from perturbed initial states, in
// optimize/rollout cycles, and reports cost statistics, settling times,
// and infeasible-step counts per scenario.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "softquad/dcm.hpp"
#include "softquad/gait.hpp"
#include "softquad/metrics.hpp"
#include "softquad/mpc.hpp"

namespace softquad {

struct PerturbationScenario {
  std::string name;
  // Absolute initial-state overrides; unset fields start at the reference.
  std::optional<double> roll;      // [rad]
  std::optional<double> pitch;     // [rad]
  std::optional<double> height;    // [m]
  std::optional<double> forward;   // v_x [m/s]
  double noise_sigma = 0.0;        // per-state per-step Gaussian std
  double duration = 25.0;          // [s]
};

// The seven built-in scenarios: Baseline, Roll, Pitch, Height, Velocity,
// Combined, Noise.
std::vector<PerturbationScenario> default_scenarios();

struct ScenarioResult {
  std::string name;
  double max_cost = 0.0;
  double mean_cost = 0.0;
  double final_cost = 0.0;
  std::optional<double> settling;  // nullopt = did not settle
  int infeasible_steps = 0;
  TimedSeries cost;                // predicted-plan cost per tick
  DcmGrid dcm;
};

struct StabilityReport {
  std::vector<ScenarioResult> scenarios;
};

struct StabilitySettings {
  MpcConfig mpc;
  GaitSchedule gait;        // phase-correct friction/stance over the horizon
  TorsoBody body;           // torso geometry; plant mass = mpc.total_mass
  ReferenceCommand command;  // reference the scenarios are measured against
  int n_mpc = 15;           // optimization horizon per cycle
  int n_rollout = 5;        // plan steps applied before re-optimizing
  double settle_threshold = 0.01;
  // Vertical-channel regulation of the rollout plant (critically damped);
  // stands in for the low-level height controller below the force MPC.
  double height_kp = 4.0;
  double height_kd = 4.0;
  std::uint64_t seed = 0;
};

ScenarioResult run_scenario(const PerturbationScenario& scenario,
                            const StabilitySettings& settings);

StabilityReport run_perturbation_suite(
    const std::vector<PerturbationScenario>& scenarios,
    const StabilitySettings& settings);

}  // namespace softquad
