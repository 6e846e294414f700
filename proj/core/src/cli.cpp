#include "legsim/cli.hpp"

#include <CLI11.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "legsim/config_file.hpp"
#include "legsim/csv_log.hpp"
#include "legsim/errors.hpp"
#include "legsim/svg_plot.hpp"

namespace legsim {

namespace {

int fail_input(const std::string& msg) {
  std::cerr << "error: input: " << msg << "\n";
  return 1;
}

int fail_runtime(const std::string& msg) {
  std::cerr << "error: runtime: " << msg << "\n";
  return 2;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      throw SolveError(SolveError::Code::bad_input,
                       "cannot open '" + tmp.string() + "' for writing");
    }
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) {
      throw SolveError(SolveError::Code::bad_input,
                       "write failed for '" + tmp.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

// Inverse dynamics along the desired trajectory, logged on the dt grid.
SimLog trajectory_torque_log(const RunConfig& rc) {
  const PoseSolver solver(rc.mechanism);
  const auto knee = solver.point_index("knee_B");
  const auto ankle = solver.point_index("ankle_A");
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  SimLog log;
  log.settings = rc.settings;
  log.settings.mode = SimMode::open_loop_torque;
  const std::size_t n = static_cast<std::size_t>(
      std::llround(rc.settings.duration / rc.settings.dt));
  log.rows.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * rc.settings.dt;
    const TrajectorySample des = eval_cyclic(rc.trajectory, t, rc.settings.cycles);
    const DynamicsTerms terms = dynamics_terms(solver, des.q);

    SimRecord rec;
    rec.t = t;
    rec.q1 = des.q;
    rec.w1 = des.dq;
    rec.a1 = des.ddq;
    rec.qd = des.q;
    rec.qd_dot = des.dq;
    rec.qd_ddot = des.ddq;
    rec.tau = terms.m_eff * des.ddq + terms.c_eff * des.dq * des.dq + terms.g_eff;

    const PoseSolver::Pose pose = solver.pose(des.q);
    rec.q2 = pose.q2;
    rec.q3 = pose.q3;
    if (des.dq != 0.0 || des.ddq != 0.0) {
      const RateSolution rates =
          solve_velocity(rc.mechanism, des.q, pose.q2, pose.q3, des.dq);
      rec.w2 = rates.w2;
      rec.w3 = rates.w3;
      const AccelSolution acc =
          solve_acceleration(rc.mechanism, des.q, pose.q2, pose.q3, des.dq,
                             rates.w2, rates.w3, des.ddq);
      rec.a2 = acc.a2;
      rec.a3 = acc.a3;
    }
    rec.xB = knee ? pose.points[*knee].x : nan;
    rec.yB = knee ? pose.points[*knee].y : nan;
    rec.xA = ankle ? pose.points[*ankle].x : nan;
    rec.yA = ankle ? pose.points[*ankle].y : nan;
    log.rows.push_back(rec);
  }
  return log;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"legsim: leg-training linkage kinematics, dynamics and control"};
  app.require_subcommand(1);

  std::string config_path = "default";
  std::string out_dir = "run";
  bool want_csv = false;
  bool want_svg = false;
  int cycles = 0;

  CLI::App* sub_validate =
      app.add_subcommand("validate", "check a configuration and exit");
  CLI::App* sub_sweep =
      app.add_subcommand("sweep", "kinematic crank sweep with point traces");
  CLI::App* sub_simulate =
      app.add_subcommand("simulate", "closed-loop tracking simulation");
  CLI::App* sub_torque =
      app.add_subcommand("torque", "motor torque along the desired trajectory");

  for (CLI::App* sub : {sub_validate, sub_sweep, sub_simulate, sub_torque}) {
    sub->add_option("--config", config_path,
                    "run configuration file, or 'default' for the built-in machine");
    sub->add_option("--out", out_dir, "output directory for this run");
    sub->add_flag("--csv", want_csv, "write log.csv");
    sub->add_flag("--svg", want_svg, "write SVG plots");
    sub->add_option("--cycles", cycles, "repeat the walking cycle N times")
        ->check(CLI::PositiveNumber);
  }

  std::vector<const char*> argv;
  argv.push_back("legsim");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    return fail_input(e.what());
  }

  // Load and resolve the configuration.
  std::string text;
  if (config_path != "default") {
    std::ifstream f(config_path, std::ios::binary);
    if (!f) return fail_input("cannot read config '" + config_path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    text = buf.str();
  }
  RunConfig rc;
  try {
    rc = parse_run_config(text);
  } catch (const ConfigError& e) {
    return fail_input("config " + std::string(e.what()));
  }

  const std::vector<std::string> diagnostics = validate(rc.mechanism);
  if (sub_validate->parsed()) {
    if (diagnostics.empty()) {
      std::cout << "valid\n";
      return 0;
    }
    for (const std::string& d : diagnostics) std::cout << d << "\n";
    return fail_input("config invalid (" + std::to_string(diagnostics.size()) +
                      " diagnostics)");
  }
  if (!diagnostics.empty()) {
    return fail_input("invalid config: " + diagnostics.front());
  }

  const bool duration_defaulted =
      std::find(rc.defaults_applied.begin(), rc.defaults_applied.end(),
                "duration") != rc.defaults_applied.end();
  if (cycles > 0) {
    rc.settings.cycles = cycles;
    if (duration_defaulted) {
      rc.settings.duration = rc.settings.cycles * rc.trajectory.T;
    }
  }

  char digest[32];
  std::snprintf(digest, sizeof digest, "%016" PRIx64, config_digest(text));

  try {
    SimLog log;
    std::vector<PlotKind> plots;
    if (sub_simulate->parsed()) {
      rc.settings.mode = SimMode::closed_loop;
      log = run(rc.mechanism, rc.settings, rc.trajectory, rc.gains);
      plots = {PlotKind::angles, PlotKind::velocities, PlotKind::torque,
               PlotKind::trace};
    } else if (sub_sweep->parsed()) {
      rc.settings.mode = SimMode::kinematic_sweep;
      rc.settings.initial_q1 = rc.trajectory.q0;
      rc.settings.initial_w1 = rc.trajectory.delta() / rc.trajectory.T;
      log = run(rc.mechanism, rc.settings, rc.trajectory, rc.gains);
      plots = {PlotKind::trace};
    } else {
      log = trajectory_torque_log(rc);
      plots = {PlotKind::torque};
    }

    const std::filesystem::path out(out_dir);
    std::filesystem::create_directories(out);
    write_text_atomic(out / "manifest.txt", render_manifest(rc, digest));
    std::cout << (out / "manifest.txt").string() << "\n";
    if (want_csv) {
      emit_csv(log, (out / "log.csv").string());
      std::cout << (out / "log.csv").string() << "\n";
    }
    if (want_svg) {
      for (PlotKind kind : plots) {
        const char* name = kind == PlotKind::angles       ? "angles.svg"
                           : kind == PlotKind::velocities ? "velocities.svg"
                           : kind == PlotKind::torque     ? "torque.svg"
                                                          : "trace.svg";
        emit_plot(log, kind, (out / name).string());
        std::cout << (out / name).string() << "\n";
      }
    }
  } catch (const SimAbort& e) {
    return fail_runtime(e.what());
  } catch (const SolveError& e) {
    return fail_runtime(e.what());
  }
  return 0;
}

}  // namespace legsim
