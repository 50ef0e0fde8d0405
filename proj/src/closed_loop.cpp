#include "softquad/closed_loop.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace softquad {

void ClosedLoopConfig::validate() const {
  robot.validate();
  gait.validate();
  mpc.validate();
  command.validate();
  profile.validate();
  if (!(duration > 0.0)) {
    throw std::invalid_argument("duration must be positive");
  }
}

ClosedLoopResult run_closed_loop(const ClosedLoopConfig& config) {
  config.validate();
  WholeBodySim sim(config.robot);
  MpcController controller(config.mpc, config.robot.body);
  const double dt = config.robot.macro_dt;
  const int ticks = static_cast<int>(std::llround(config.duration / dt));

  ClosedLoopResult out;
  out.trajectory.frames.reserve(ticks);
  out.telemetry.reserve(ticks);
  Eigen::Vector2d tangential_pos = sim.torso().position.head<2>();
  Eigen::Vector2d tangential_vel = sim.torso().velocity.head<2>();

  for (int tick = 0; tick < ticks; ++tick) {
    const double t = sim.time();

    // State feedback and phase-correct references across the horizon.
    const MpcState x = mpc_state_from_torso(sim.torso());
    const std::vector<TorsoState> torso_refs = reference_trajectory(
        config.command, t, config.mpc.horizon, config.mpc.dt);
    std::vector<MpcState> refs;
    refs.reserve(torso_refs.size());
    for (const auto& r : torso_refs) refs.push_back(mpc_state_from_torso(r));
    std::vector<StagePhase> phases(config.mpc.horizon);
    for (int k = 0; k < config.mpc.horizon; ++k) {
      const PhaseInfo info = phase_at(config.gait, t + k * config.mpc.dt);
      phases[k].mu = info.mu;
      phases[k].stance = info.stance;
    }

    const MpcSolution sol =
        controller.solve_step(x, refs, sim.foot_offsets(), phases);
    const std::array<double, 4> theta =
        force_commands_to_angles(sol.u, config.force_map);

    // Tendon drive: the gait decides which legs contract and replays the
    // contraction profile; the commanded pulling angle scales its amplitude.
    std::array<double, 4> tensions{};
    for (int leg = 0; leg < 4; ++leg) {
      const double rhythm = gait_tension(config.gait, config.profile, leg, t);
      tensions[leg] = rhythm * (theta[leg] / config.force_map.angle_max);
    }

    out.trajectory.frames.push_back(sim.macro_step(tensions, {}));

    // The planar rod legs cannot realize commanded tangential ground forces
    // (their tips only drag), so in kCommanded mode the tangential channel
    // follows the controller's own rigid-body model driven by the solved
    // forces: p += v dt, then v += (sum f / m) dt. Height and attitude stay
    // on the physical rod plant.
    if (config.tangential == TangentialMode::kCommanded) {
      double fx_total = 0.0, fy_total = 0.0;
      for (int leg = 0; leg < 4; ++leg) {
        fx_total += sol.u[3 * leg];
        fy_total += sol.u[3 * leg + 1];
      }
      tangential_pos += tangential_vel * dt;
      tangential_vel.x() += fx_total / config.mpc.total_mass * dt;
      tangential_vel.y() += fy_total / config.mpc.total_mass * dt;
      TorsoState& torso = sim.mutable_torso();
      torso.position.head<2>() = tangential_pos;
      torso.velocity.head<2>() = tangential_vel;
      BodyFrame& frame = out.trajectory.frames.back();
      frame.torso.position.head<2>() = tangential_pos;
      frame.torso.velocity.head<2>() = tangential_vel;
    }

    TelemetryRow row;
    row.t = t;
    row.cost = sol.cost;
    row.feasible_total = sol.feasible;
    row.feasible_leg = sol.leg_feasible;
    for (int leg = 0; leg < 4; ++leg) {
      row.force[leg] = {sol.u[3 * leg], sol.u[3 * leg + 1],
                        sol.u[3 * leg + 2]};
    }
    row.theta = theta;
    out.telemetry.push_back(row);

    out.dcm.t.push_back(t);
    out.dcm.legs.push_back(sol.leg_feasible);
    out.dcm.total.push_back(sol.feasible);

    if (!sim.torso().all_finite()) {
      throw std::runtime_error("torso state diverged at tick " +
                               std::to_string(tick));
    }
  }
  return out;
}

void write_telemetry_csv(const std::vector<TelemetryRow>& rows,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << "t,cost,feasible_total,feasible_leg1,feasible_leg2,feasible_leg3,"
         "feasible_leg4,fx1,fy1,fz1,fx2,fy2,fz2,fx3,fy3,fz3,fx4,fy4,fz4,"
         "theta1,theta2,theta3,theta4\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.9e", row.t, row.cost);
    out << buf << ',' << (row.feasible_total ? 1 : 0);
    for (int leg = 0; leg < 4; ++leg) {
      out << ',' << (row.feasible_leg[leg] ? 1 : 0);
    }
    for (int leg = 0; leg < 4; ++leg) {
      std::snprintf(buf, sizeof(buf), ",%.9e,%.9e,%.9e", row.force[leg][0],
                    row.force[leg][1], row.force[leg][2]);
      out << buf;
    }
    for (int leg = 0; leg < 4; ++leg) {
      std::snprintf(buf, sizeof(buf), ",%.6f", row.theta[leg]);
      out << buf;
    }
    out << '\n';
  }
}

void write_com_trajectory_csv(const BodyTrajectory& trajectory,
                              const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << "t,marker_id,x,y,z\n";
  char buf[128];
  for (const auto& frame : trajectory.frames) {
    std::snprintf(buf, sizeof(buf), "%.6f,com,%.9e,%.9e,%.9e\n", frame.t,
                  frame.torso.position.x(), frame.torso.position.y(),
                  frame.torso.position.z());
    out << buf;
  }
}

}  // namespace softquad
