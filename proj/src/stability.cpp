#include "softquad/stability.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace softquad {
namespace {

// Feet planted on the ground directly below the leg attachments.
std::array<Eigen::Vector3d, 4> standing_feet(const TorsoBody& body,
                                             double height) {
  std::array<Eigen::Vector3d, 4> feet;
  for (int leg = 0; leg < 4; ++leg) {
    feet[leg] = body.attachments[leg];
    feet[leg].z() = -height;
  }
  return feet;
}

MpcState reference_state(const ReferenceCommand& command, double t) {
  MpcState x = MpcState::Zero();
  x[3] = command.x0 + command.vx * t;
  x[4] = command.y0 + command.vy * t;
  x[5] = command.pz;
  x[9] = command.vx;
  x[10] = command.vy;
  x[12] = kMpcGravity;
  return x;
}

}  // namespace

std::vector<PerturbationScenario> default_scenarios() {
  std::vector<PerturbationScenario> list(7);
  list[0].name = "Baseline";
  list[1].name = "Roll";
  list[1].roll = 0.1;
  list[2].name = "Pitch";
  list[2].pitch = 0.1;
  list[3].name = "Height";
  list[3].height = 0.01;
  list[4].name = "Velocity";
  list[4].forward = 0.05;
  list[5].name = "Combined";
  list[5].roll = 0.05;
  list[5].pitch = 0.05;
  list[5].height = 0.02;
  list[5].forward = 0.03;
  list[6].name = "Noise";
  list[6].noise_sigma = 0.001;
  return list;
}

ScenarioResult run_scenario(const PerturbationScenario& scenario,
                            const StabilitySettings& settings) {
  MpcConfig config = settings.mpc;
  config.horizon = settings.n_mpc;
  config.validate();
  const double dt = config.dt;
  const int ticks =
      static_cast<int>(std::llround(scenario.duration / dt));
  if (ticks <= 0) throw std::invalid_argument("scenario duration too short");

  // The prediction model and the rollout plant share one rigid body whose
  // mass matches the loading constraint, so the vertical channel is exactly
  // gravity-balanced; the residual height error is closed by the low-level
  // height regulator below.
  TorsoBody plant_body = settings.body;
  plant_body.mass = config.total_mass;
  MpcController controller(config, plant_body);
  const auto feet = standing_feet(plant_body, settings.command.pz);

  MpcState x = reference_state(settings.command, 0.0);
  if (scenario.roll) x[0] = *scenario.roll;
  if (scenario.pitch) x[1] = *scenario.pitch;
  if (scenario.height) x[5] = *scenario.height;
  if (scenario.forward) x[9] = *scenario.forward;

  std::mt19937_64 rng(settings.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double clip = 3.0 * scenario.noise_sigma;

  ScenarioResult result;
  result.name = scenario.name;
  Eigen::VectorXd plan;
  double cost_sum = 0.0;

  for (int tick = 0; tick < ticks; ++tick) {
    const double t = tick * dt;
    const int plan_step = tick % settings.n_rollout;

    std::vector<StagePhase> phases(config.horizon);
    for (int k = 0; k < config.horizon; ++k) {
      const PhaseInfo info = phase_at(settings.gait, t + k * dt);
      phases[k].mu = info.mu;
      phases[k].stance = info.stance;
    }

    bool feasible = true;
    std::array<bool, 4> leg_feasible{true, true, true, true};
    if (plan_step == 0) {
      std::vector<MpcState> refs(config.horizon);
      for (int k = 0; k < config.horizon; ++k)
        refs[k] = reference_state(settings.command, t + k * dt);
      const MpcSolution sol = controller.solve_step(x, refs, feet, phases);
      plan = sol.u_plan;
      feasible = sol.feasible;
      leg_feasible = sol.leg_feasible;
    } else {
      // Mid-rollout ticks replay the stored plan; re-check the input that
      // is actually applied against the current phase.
      const double tol = 1e-6;
      const StagePhase& now = phases.front();
      for (int leg = 0; leg < 4; ++leg) {
        const double fx = plan[12 * plan_step + 3 * leg];
        const double fy = plan[12 * plan_step + 3 * leg + 1];
        const double fz = plan[12 * plan_step + 3 * leg + 2];
        const double fz_max = now.stance[leg] ? config.f_max : 0.0;
        const double cone = now.mu[leg] * fz + tol;
        leg_feasible[leg] = fz >= -tol && fz <= fz_max + tol &&
                            std::abs(fx) <= cone && std::abs(fy) <= cone;
        feasible = feasible && leg_feasible[leg];
      }
    }

    // Predicted cost of the remaining plan from the current state: roll the
    // prediction model forward over the horizon (holding the last planned
    // input once the plan runs out) and sum the stage tracking costs.
    const MpcModel model = linearize(x, plant_body, feet, config);
    const int plan_stages = static_cast<int>(plan.size()) / 12;
    MpcState xp = x;
    double cost = 0.0;
    for (int k = 0; k < config.horizon; ++k) {
      cost += stage_cost(xp, reference_state(settings.command, t + k * dt),
                         config.q_diag);
      const int stage = std::min(plan_step + k, plan_stages - 1);
      xp = model.a * xp + model.b * plan.segment<12>(12 * stage);
    }

    result.cost.t.push_back(t);
    result.cost.value.push_back(cost);
    cost_sum += cost;
    result.max_cost = std::max(result.max_cost, cost);
    result.dcm.t.push_back(t);
    result.dcm.legs.push_back(leg_feasible);
    result.dcm.total.push_back(feasible);
    if (!feasible) ++result.infeasible_steps;

    // Plant step with the applied input.
    const int stage = std::min(plan_step, plan_stages - 1);
    x = model.a * x + model.b * plan.segment<12>(12 * stage);
    // Low-level height regulation (critically damped PD acceleration).
    const double az = -settings.height_kp * (x[5] - settings.command.pz) -
                      settings.height_kd * x[11];
    x[11] += az * dt;
    if (scenario.noise_sigma > 0.0) {
      for (int i = 0; i < 12; ++i) {
        const double w = gauss(rng) * scenario.noise_sigma;
        x[i] += std::clamp(w, -clip, clip);
      }
    }
  }

  result.mean_cost = cost_sum / ticks;
  result.final_cost = result.cost.value.back();
  result.settling = settling_time(result.cost, settings.settle_threshold);
  return result;
}

StabilityReport run_perturbation_suite(
    const std::vector<PerturbationScenario>& scenarios,
    const StabilitySettings& settings) {
  if (scenarios.empty()) {
    throw std::invalid_argument("scenario list is empty");
  }
  StabilityReport report;
  report.scenarios.reserve(scenarios.size());
  for (const auto& scenario : scenarios) {
    report.scenarios.push_back(run_scenario(scenario, settings));
  }
  return report;
}

}  // namespace softquad
