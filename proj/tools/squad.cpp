// Command-line harness for the soft-quadruped stack: single-leg and
// whole-body simulations, closed-loop MPC locomotion, the perturbation
// stability suite, trajectory validation, and artifact export.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "softquad/closed_loop.hpp"
#include "softquad/dcm.hpp"
#include "softquad/gait.hpp"
#include "softquad/leg.hpp"
#include "softquad/metrics.hpp"
#include "softquad/mpc.hpp"
#include "softquad/plot.hpp"
#include "softquad/stability.hpp"
#include "softquad/whole_body.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::optional<double> duration;
};

struct HarnessConfig {
  softquad::RobotDefinition robot;
  softquad::GaitSchedule gait = softquad::make_walk_gait();
  softquad::MpcConfig mpc;
  softquad::ReferenceCommand command;
  softquad::TendonProfile profile;
  softquad::ForceAngleMap force_map;
  softquad::TangentialMode tangential = softquad::TangentialMode::kCommanded;
  softquad::StabilitySettings stability;
  double duration = 25.0;
};

double get_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

HarnessConfig load_config(const GlobalOptions& opt) {
  HarnessConfig cfg;
  cfg.command.vx = 0.08;
  cfg.command.pz = 0.04;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) {
      throw std::runtime_error("cannot open config file: " + opt.config_path);
    }
    json j = json::parse(in);
    if (j.contains("gait")) {
      if (j["gait"].is_string()) {
        const auto name =
            softquad::gait_name_from_string(j["gait"].get<std::string>());
        cfg.gait = name == softquad::GaitName::kWalk ? softquad::make_walk_gait()
                   : name == softquad::GaitName::kCrawl
                       ? softquad::make_crawl_gait()
                       : softquad::make_omni60_gait();
      } else {
        cfg.gait = softquad::schedule_from_json(j["gait"]);
      }
    }
    if (j.contains("command")) {
      const json& c = j["command"];
      cfg.command.vx = get_or(c, "vx", cfg.command.vx);
      cfg.command.vy = get_or(c, "vy", cfg.command.vy);
      cfg.command.pz = get_or(c, "pz", cfg.command.pz);
      cfg.command.x0 = get_or(c, "x0", cfg.command.x0);
      cfg.command.y0 = get_or(c, "y0", cfg.command.y0);
    }
    if (j.contains("mpc")) {
      const json& m = j["mpc"];
      if (m.contains("horizon")) cfg.mpc.horizon = m["horizon"].get<int>();
      cfg.mpc.dt = get_or(m, "dt", cfg.mpc.dt);
      cfg.mpc.r_weight = get_or(m, "r_weight", cfg.mpc.r_weight);
      cfg.mpc.f_max = get_or(m, "f_max", cfg.mpc.f_max);
      cfg.mpc.total_mass = get_or(m, "total_mass", cfg.mpc.total_mass);
      cfg.mpc.gravity = get_or(m, "gravity", cfg.mpc.gravity);
      if (m.contains("q_diag")) {
        const auto q = m["q_diag"].get<std::vector<double>>();
        if (q.size() != 13) {
          throw std::runtime_error("mpc.q_diag must have 13 entries");
        }
        for (int i = 0; i < 13; ++i) cfg.mpc.q_diag[i] = q[i];
      }
    }
    if (j.contains("profile")) {
      const json& p = j["profile"];
      cfg.profile.t_ramp = get_or(p, "t_ramp", cfg.profile.t_ramp);
      cfg.profile.t_hold = get_or(p, "t_hold", cfg.profile.t_hold);
      cfg.profile.t_decay = get_or(p, "t_decay", cfg.profile.t_decay);
      cfg.profile.t_max = get_or(p, "t_max", cfg.profile.t_max);
    }
    if (j.contains("tangential_mode")) {
      const std::string mode = j["tangential_mode"].get<std::string>();
      if (mode == "commanded") {
        cfg.tangential = softquad::TangentialMode::kCommanded;
      } else if (mode == "honest") {
        cfg.tangential = softquad::TangentialMode::kHonest;
      } else {
        throw std::runtime_error("unknown tangential_mode: " + mode);
      }
    }
    if (j.contains("stability")) {
      const json& s = j["stability"];
      if (s.contains("n_mpc")) cfg.stability.n_mpc = s["n_mpc"].get<int>();
      if (s.contains("n_rollout"))
        cfg.stability.n_rollout = s["n_rollout"].get<int>();
      cfg.stability.settle_threshold =
          get_or(s, "settle_threshold", cfg.stability.settle_threshold);
      cfg.stability.height_kp = get_or(s, "height_kp", cfg.stability.height_kp);
      cfg.stability.height_kd = get_or(s, "height_kd", cfg.stability.height_kd);
    }
    if (j.contains("duration")) cfg.duration = j["duration"].get<double>();
  }
  if (opt.duration) cfg.duration = *opt.duration;
  cfg.stability.mpc = cfg.mpc;
  cfg.stability.gait = cfg.gait;
  cfg.stability.body = cfg.robot.body;
  cfg.stability.command = cfg.command;
  cfg.stability.seed = opt.seed;
  return cfg;
}

std::string out_path(const GlobalOptions& opt, const std::string& name) {
  fs::create_directories(opt.out_dir);
  return (fs::path(opt.out_dir) / name).string();
}

int cmd_simulate_leg(const GlobalOptions& opt) {
  HarnessConfig cfg = load_config(opt);
  const double duration = opt.duration.value_or(3.0);
  const softquad::LegDefinition leg = cfg.robot.legs[0];
  const softquad::TendonProfile profile = cfg.profile;
  const auto schedule = [&profile](double t) {
    return softquad::tension_at(profile, t);
  };
  const int stride = std::max(1, static_cast<int>(0.01 / leg.dt));
  const auto traj = softquad::simulate_leg(leg, schedule, duration, stride);

  const std::string csv = out_path(opt, "leg.csv");
  std::ofstream out(csv);
  out << "t,tip_x,tip_z,base_fx,base_fz,base_my\n";
  char buf[160];
  softquad::PlotSeries tip_z{"tip height", {}, {}};
  for (const auto& frame : traj.frames) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.9e,%.9e,%.9e,%.9e,%.9e\n", frame.t,
                  frame.tip_x, frame.tip_z, frame.reaction.fx,
                  frame.reaction.fz, frame.reaction.my);
    out << buf;
    tip_z.x.push_back(frame.t);
    tip_z.y.push_back(frame.tip_z);
  }
  softquad::write_line_plot(
      {"Single-leg tip height", "time [s]", "tip z [m]", {tip_z}},
      out_path(opt, "leg_tip.svg"));
  std::cout << "wrote " << csv << " (" << traj.frames.size() << " frames)\n";
  return 0;
}

int cmd_simulate_body(const GlobalOptions& opt) {
  HarnessConfig cfg = load_config(opt);
  const double duration = opt.duration.value_or(10.0);
  const auto gait = cfg.gait;
  const auto profile = cfg.profile;
  const auto schedule = [&gait, &profile](int leg, double t) {
    return softquad::gait_tension(gait, profile, leg, t);
  };
  const auto traj = softquad::whole_body_simulate(cfg.robot, schedule, duration);

  const std::string csv = out_path(opt, "body.csv");
  std::ofstream out(csv);
  out << "t,px,py,pz,roll,pitch,yaw,vx,vy,vz\n";
  char buf[256];
  softquad::PlotSeries pz{"p_z", {}, {}};
  for (const auto& frame : traj.frames) {
    const auto& s = frame.torso;
    std::snprintf(buf, sizeof(buf),
                  "%.6f,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e\n",
                  frame.t, s.position.x(), s.position.y(), s.position.z(),
                  s.attitude.x(), s.attitude.y(), s.attitude.z(),
                  s.velocity.x(), s.velocity.y(), s.velocity.z());
    out << buf;
    pz.x.push_back(frame.t);
    pz.y.push_back(s.position.z());
  }
  softquad::write_com_trajectory_csv(traj, out_path(opt, "body_com.csv"));
  softquad::write_line_plot(
      {"Body height (open loop)", "time [s]", "p_z [m]", {pz}},
      out_path(opt, "body_height.svg"));
  std::cout << "wrote " << csv << " (" << traj.frames.size() << " frames)\n";
  return 0;
}

void emit_closed_loop_plots(const softquad::ClosedLoopResult& result,
                            const HarnessConfig& cfg,
                            const GlobalOptions& opt) {
  softquad::PlotSeries pz{"p_z", {}, {}}, pz_ref{"reference", {}, {}};
  softquad::PlotSeries vx{"v_x", {}, {}}, vy{"v_y", {}, {}};
  softquad::PlotSeries cost{"cost", {}, {}};
  for (const auto& frame : result.trajectory.frames) {
    pz.x.push_back(frame.t);
    pz.y.push_back(frame.torso.position.z());
    pz_ref.x.push_back(frame.t);
    pz_ref.y.push_back(cfg.command.pz);
    vx.x.push_back(frame.t);
    vx.y.push_back(frame.torso.velocity.x());
    vy.x.push_back(frame.t);
    vy.y.push_back(frame.torso.velocity.y());
  }
  for (const auto& row : result.telemetry) {
    cost.x.push_back(row.t);
    cost.y.push_back(row.cost);
  }
  softquad::write_line_plot(
      {"Height tracking", "time [s]", "p_z [m]", {pz, pz_ref}},
      out_path(opt, "height.svg"));
  softquad::write_line_plot(
      {"Body velocities", "time [s]", "velocity [m/s]", {vx, vy}},
      out_path(opt, "velocity.svg"));
  softquad::write_line_plot({"Tracking cost", "time [s]", "cost [-]", {cost}},
                            out_path(opt, "cost.svg"));
}

int cmd_run_mpc(const GlobalOptions& opt) {
  HarnessConfig cfg = load_config(opt);
  softquad::ClosedLoopConfig loop;
  loop.robot = cfg.robot;
  loop.gait = cfg.gait;
  loop.mpc = cfg.mpc;
  loop.command = cfg.command;
  loop.profile = cfg.profile;
  loop.force_map = cfg.force_map;
  loop.duration = cfg.duration;
  loop.tangential = cfg.tangential;

  const auto result = softquad::run_closed_loop(loop);
  softquad::write_telemetry_csv(result.telemetry,
                                out_path(opt, "telemetry.csv"));
  softquad::write_com_trajectory_csv(result.trajectory,
                                     out_path(opt, "com.csv"));
  softquad::write_dcm_csv(result.dcm, out_path(opt, "dcm.csv"));
  softquad::write_dcm_svg(result.dcm, out_path(opt, "dcm.svg"));
  emit_closed_loop_plots(result, cfg, opt);

  const auto& last = result.trajectory.frames.back();
  std::cout << "ticks=" << result.telemetry.size()
            << " infeasible=" << result.dcm.infeasible_total_count()
            << " final_pz=" << last.torso.position.z()
            << " final_vx=" << last.torso.velocity.x() << "\n";
  return 0;
}

int cmd_perturb_suite(const GlobalOptions& opt) {
  HarnessConfig cfg = load_config(opt);
  auto scenarios = softquad::default_scenarios();
  for (auto& s : scenarios) s.duration = cfg.duration;
  const auto report = softquad::run_perturbation_suite(scenarios, cfg.stability);

  ordered_json j;
  j["seed"] = opt.seed;
  j["duration"] = cfg.duration;
  std::vector<softquad::PlotSeries> cost_series;
  for (const auto& r : report.scenarios) {
    ordered_json row;
    row["name"] = r.name;
    row["max_cost"] = r.max_cost;
    row["mean_cost"] = r.mean_cost;
    row["final_cost"] = r.final_cost;
    if (r.settling) {
      row["settling_time"] = *r.settling;
    } else {
      row["settling_time"] = "not-settled";
    }
    row["infeasible_steps"] = r.infeasible_steps;
    j["scenarios"].push_back(row);

    std::ofstream cost_out(out_path(opt, r.name + "_cost.csv"));
    cost_out << "t,cost\n";
    char buf[64];
    for (std::size_t i = 0; i < r.cost.t.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.6f,%.9e\n", r.cost.t[i],
                    r.cost.value[i]);
      cost_out << buf;
    }
    softquad::write_dcm_csv(r.dcm, out_path(opt, r.name + "_dcm.csv"));
    cost_series.push_back({r.name, r.cost.t, r.cost.value});
  }
  softquad::write_line_plot(
      {"MPC cost under perturbations", "time [s]", "cost [-]", cost_series},
      out_path(opt, "perturb_cost.svg"));

  std::ofstream out(out_path(opt, "report.json"));
  out << j.dump(2) << "\n";
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_validate(const GlobalOptions& opt, const std::string& external_path,
                 const std::string& sim_path, const std::string& marker) {
  ordered_json j;
  j["marker"] = marker;
  const char* axes[3] = {"x", "y", "z"};
  for (int axis = 0; axis < 3; ++axis) {
    const auto external =
        softquad::read_trajectory_csv(external_path, marker, axis);
    const auto sim = softquad::read_trajectory_csv(sim_path, marker, axis);
    const auto aligned = softquad::time_align(external, sim);
    const auto metrics = softquad::compute_metrics(aligned);
    ordered_json row;
    row["rmse_m"] = metrics.rmse;
    row["mae_m"] = metrics.mae;
    if (metrics.nrmse_defined) {
      row["nrmse_pct"] = metrics.nrmse;
    } else {
      row["nrmse_pct"] = "undefined (zero reference range)";
    }
    row["avg_error_m"] = metrics.avg_error;
    row["error_pct"] = metrics.error_pct;
    row["accuracy_pct"] = metrics.accuracy;
    j[axes[axis]] = row;
  }
  std::ofstream out(out_path(opt, "metrics.json"));
  out << j.dump(2) << "\n";
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_export_dcm(const GlobalOptions& opt, const std::string& in_path) {
  const auto grid = softquad::read_dcm_csv(in_path);
  softquad::write_dcm_csv(grid, out_path(opt, "dcm.csv"));
  softquad::write_dcm_svg(grid, out_path(opt, "dcm.svg"));
  std::cout << "wrote " << out_path(opt, "dcm.svg") << " ("
            << grid.infeasible_total_count() << " infeasible ticks)\n";
  return 0;
}

struct TelemetryColumns {
  std::vector<double> t, cost;
};

TelemetryColumns read_telemetry(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  TelemetryColumns cols;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {  // header
      first = false;
      continue;
    }
    std::istringstream row(line);
    std::string t_str, cost_str;
    if (!std::getline(row, t_str, ',') || !std::getline(row, cost_str, ',')) {
      throw std::runtime_error("malformed telemetry row: " + line);
    }
    cols.t.push_back(std::stod(t_str));
    cols.cost.push_back(std::stod(cost_str));
  }
  return cols;
}

int cmd_plot(const GlobalOptions& opt, const std::string& telemetry_path,
             const std::string& trajectory_path) {
  bool wrote = false;
  if (!telemetry_path.empty()) {
    const auto cols = read_telemetry(telemetry_path);
    const bool ok = softquad::write_line_plot(
        {"Tracking cost", "time [s]", "cost [-]", {{"cost", cols.t, cols.cost}}},
        out_path(opt, "cost.svg"));
    if (!ok) {
      std::cerr << "warning: telemetry file has no samples; no plot written\n";
    }
    wrote = wrote || ok;
  }
  if (!trajectory_path.empty()) {
    const auto z = softquad::read_trajectory_csv(trajectory_path, "com", 2);
    const bool ok = softquad::write_line_plot(
        {"CoM height", "time [s]", "p_z [m]", {{"p_z", z.t, z.value}}},
        out_path(opt, "height.svg"));
    if (!ok) {
      std::cerr << "warning: trajectory file has no samples; no plot written\n";
    }
    wrote = wrote || ok;
  }
  if (telemetry_path.empty() && trajectory_path.empty()) {
    throw std::runtime_error("plot requires --telemetry and/or --trajectory");
  }
  std::cout << (wrote ? "plots written\n" : "nothing to plot\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft-quadruped simulation and control harness"};
  app.require_subcommand(1);

  GlobalOptions opt;
  double duration_flag = -1.0;
  app.add_option("--config", opt.config_path, "JSON configuration file");
  app.add_option("--out", opt.out_dir, "output directory");
  app.add_option("--seed", opt.seed, "random seed");
  app.add_option("--duration", duration_flag, "run duration [s]");

  auto* sim_leg = app.add_subcommand("simulate-leg", "single rod-leg rollout");
  auto* sim_body =
      app.add_subcommand("simulate-body", "open-loop whole-body rollout");
  auto* run_mpc =
      app.add_subcommand("run-mpc", "closed-loop MPC locomotion run");
  auto* perturb = app.add_subcommand("perturb-suite",
                                     "seven-scenario perturbation study");
  auto* validate =
      app.add_subcommand("validate", "trajectory error metrics vs recording");
  std::string external_path, sim_path, marker = "com";
  validate->add_option("--external", external_path, "recorded trajectory CSV")
      ->required();
  validate->add_option("--sim", sim_path, "simulated trajectory CSV")
      ->required();
  validate->add_option("--marker", marker, "marker id to compare");
  auto* export_dcm =
      app.add_subcommand("export-dcm", "render a constraint-map CSV as SVG");
  std::string dcm_in;
  export_dcm->add_option("--in", dcm_in, "constraint-map CSV")->required();
  auto* plot = app.add_subcommand("plot", "render plots from CSV artifacts");
  std::string telemetry_path, trajectory_path;
  plot->add_option("--telemetry", telemetry_path, "telemetry CSV");
  plot->add_option("--trajectory", trajectory_path, "trajectory CSV");

  // Accept the global flags before or after the subcommand name.
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  if (duration_flag > 0.0) opt.duration = duration_flag;

  try {
    if (sim_leg->parsed()) return cmd_simulate_leg(opt);
    if (sim_body->parsed()) return cmd_simulate_body(opt);
    if (run_mpc->parsed()) return cmd_run_mpc(opt);
    if (perturb->parsed()) return cmd_perturb_suite(opt);
    if (validate->parsed())
      return cmd_validate(opt, external_path, sim_path, marker);
    if (export_dcm->parsed()) return cmd_export_dcm(opt, dcm_in);
    if (plot->parsed()) return cmd_plot(opt, telemetry_path, trajectory_path);
  } catch (const std::exception& e) {
    ordered_json err;
    err["error"]["message"] = e.what();
    err["error"]["command"] =
        app.get_subcommands().empty() ? "" : app.get_subcommands()[0]->get_name();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
