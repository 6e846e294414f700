#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "legsim/control.hpp"
#include "legsim/dynamics.hpp"
#include "legsim/errors.hpp"
#include "legsim/mechanism.hpp"
#include "legsim/simulate.hpp"
#include "legsim/trajectory.hpp"
#include "test_support.hpp"

using namespace legsim;
using legsim::test::rel_err;

namespace {

constexpr double kPi = std::numbers::pi;

SimSettings closed_loop_settings(double dt, double duration, int cycles = 1) {
  SimSettings s;
  s.dt = dt;
  s.duration = duration;
  s.cycles = cycles;
  s.mode = SimMode::closed_loop;
  return s;
}

}  // namespace

TEST_CASE("rk4: zero derivative leaves the state unchanged") {
  auto deriv = [](double, const PlantState&) { return PlantState{0.0, 0.0}; };
  const PlantState y = rk4_step(deriv, 0.0, {1.25, -0.5}, 0.1);
  CHECK(y.q1 == 1.25);
  CHECK(y.w1 == -0.5);
}

TEST_CASE("rk4: exponential growth to local truncation accuracy") {
  // dq/dt = q with q(0) = 1; one step of 0.1 vs exp(0.1).
  auto deriv = [](double, const PlantState& s) { return PlantState{s.q1, 0.0}; };
  const PlantState y = rk4_step(deriv, 0.0, {1.0, 0.0}, 0.1);
  CHECK(std::abs(y.q1 - std::exp(0.1)) < 1e-7);
}

TEST_CASE("rk4: oscillator energy drift over ten periods") {
  // q'' = -q, unit amplitude; energy q^2 + w^2 must hold to 1e-6 relative.
  auto deriv = [](double, const PlantState& s) { return PlantState{s.w1, -s.q1}; };
  PlantState y{1.0, 0.0};
  const double dt = 1e-3;
  const int steps = static_cast<int>(std::llround(10.0 * 2.0 * kPi / dt));
  for (int k = 0; k < steps; ++k) y = rk4_step(deriv, k * dt, y, dt);
  const double energy = y.q1 * y.q1 + y.w1 * y.w1;
  CHECK(std::abs(energy - 1.0) < 1e-6);
}

TEST_CASE("settings are validated") {
  const MechanismConfig cfg = default_config();
  const TrajectorySpec traj = default_trajectory();
  const GainSet gains{100.0, 20.0};
  SimSettings s = closed_loop_settings(0.0, 1.0);
  CHECK_THROWS_AS(run(cfg, s, traj, gains), SolveError);
  s = closed_loop_settings(1e-3, -1.0);
  CHECK_THROWS_AS(run(cfg, s, traj, gains), SolveError);
  s = closed_loop_settings(1e-3, 1.0);
  s.mode = SimMode::open_loop_torque;
  CHECK_THROWS_AS(run(cfg, s, traj, gains), SolveError);  // series missing
}

TEST_CASE("identical inputs produce bit-identical logs") {
  const MechanismConfig cfg = default_config();
  const TrajectorySpec traj = default_trajectory();
  const GainSet gains{100.0, 20.0};
  const SimSettings s = closed_loop_settings(1e-3, 0.5);
  const SimLog a = run(cfg, s, traj, gains);
  const SimLog b = run(cfg, s, traj, gains);
  REQUIRE(a.rows.size() == b.rows.size());
  CHECK(std::memcmp(a.rows.data(), b.rows.data(),
                    a.rows.size() * sizeof(SimRecord)) == 0);
}

TEST_CASE("kinematic sweep reproduces trace_point exactly") {
  const MechanismConfig cfg = default_config();
  const TrajectorySpec traj = default_trajectory();
  SimSettings s;
  s.mode = SimMode::kinematic_sweep;
  s.dt = 1e-3;
  s.duration = 2.0;
  s.initial_q1 = traj.q0;
  s.initial_w1 = kPi;  // one full turn over the duration
  const SimLog log = run(cfg, s, traj, {100.0, 20.0});
  REQUIRE(log.rows.size() == 2001);

  std::vector<double> samples;
  samples.reserve(log.rows.size());
  for (std::size_t k = 0; k < log.rows.size(); ++k) {
    samples.push_back(traj.q0 + kPi * (static_cast<double>(k) * s.dt));
  }
  const auto trace = trace_point(cfg, "ankle_A", samples);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    REQUIRE(trace[k].point.has_value());
    CHECK(log.rows[k].q1 == samples[k]);
    CHECK(log.rows[k].xA == trace[k].point->x);
    CHECK(log.rows[k].yA == trace[k].point->y);
  }
}

TEST_CASE("closed loop from the exact start keeps the error at integration level") {
  const MechanismConfig cfg = default_config();
  const TrajectorySpec traj = default_trajectory();
  const SimLog log = run(cfg, closed_loop_settings(1e-3, 2.0), traj, {100.0, 20.0});
  REQUIRE(log.rows.size() == 2001);
  double max_e = 0.0;
  for (const SimRecord& r : log.rows) max_e = std::max(max_e, std::abs(r.e));
  CHECK(max_e < 1e-6);
  CHECK(log.rows.back().q1 == doctest::Approx(traj.qf()).epsilon(1e-9));
}

TEST_CASE("initial error decays along the critically damped envelope") {
  const MechanismConfig cfg = default_config();
  const TrajectorySpec traj = default_trajectory();
  SimSettings s = closed_loop_settings(1e-3, 2.0);
  s.initial_q1 = traj.q0 - 0.1;  // e(0) = +0.1
  const SimLog log = run(cfg, s, traj, {100.0, 20.0});
  double max_dev = 0.0;
  for (const SimRecord& r : log.rows) {
    const double expected = error_envelope(100.0, 20.0, 0.1, 0.0, r.t);
    max_dev = std::max(max_dev, std::abs(r.e - expected));
  }
  CHECK(max_dev < 0.05 * 0.1);
  CHECK(max_dev < 1e-5);  // exact-model linearization is much tighter
}

TEST_CASE("stiffer critically damped gains settle no slower") {
  const MechanismConfig cfg = default_config();
  const TrajectorySpec traj = default_trajectory();
  auto settle_time = [&](double kp) {
    SimSettings s = closed_loop_settings(1e-3, 2.0);
    s.initial_q1 = traj.q0 - 0.1;
    const SimLog log = run(cfg, s, traj, critically_damped_gains(kp));
    double settled = log.rows.back().t;
    for (std::size_t k = log.rows.size(); k-- > 0;) {
      if (std::abs(log.rows[k].e) >= 1e-3) {
        settled = log.rows[k].t + 1e-3;
        break;
      }
    }
    return settled;
  };
  CHECK(settle_time(200.0) <= settle_time(100.0) + 1e-9);
}

TEST_CASE("two cycles hand over state continuously") {
  const MechanismConfig cfg = default_config();
  const TrajectorySpec traj = default_trajectory();
  const SimLog log = run(cfg, closed_loop_settings(1e-3, 4.0, 2), traj,
                         {100.0, 20.0});
  REQUIRE(log.rows.size() == 4001);
  const SimRecord& handover = log.rows[2000];
  // Desired state of cycle 2 at its start is one full turn above q0, at rest.
  CHECK(std::abs(handover.q1 - (traj.q0 + traj.delta())) < 1e-5);
  CHECK(std::abs(handover.w1) < 1e-5);
  const SimRecord& end = log.rows.back();
  CHECK(std::abs(end.q1 - (traj.q0 + 2.0 * traj.delta())) < 1e-5);
}

TEST_CASE("open-loop replay balances work and energy") {
  const MechanismConfig cfg = default_config();
  const PoseSolver solver(cfg);
  const TrajectorySpec traj = default_trajectory();

  // Feed the inverse-dynamics torque of the trajectory through the plant.
  const auto profile = torque_profile(cfg, traj, 4001);
  TorqueSeries series;
  for (const auto& [t, tau] : profile) {
    series.t.push_back(t);
    series.tau.push_back(tau);
  }
  SimSettings s;
  s.mode = SimMode::open_loop_torque;
  s.dt = 1e-3;
  s.duration = 2.0;
  s.initial_q1 = traj.q0;
  const SimLog log = run(cfg, s, traj, {100.0, 20.0}, &series);

  // Running audit: cumulative work must track the energy excursion at every
  // step. (Over the whole cycle both net values return to ~zero, so only the
  // running comparison is informative.)
  auto energy = [&](const SimRecord& r) {
    return kinetic_energy(solver, r.q1, r.w1) + potential_energy(solver, r.q1);
  };
  const double e0 = energy(log.rows.front());
  double work = 0.0;
  double peak_excursion = 0.0;
  double max_mismatch = 0.0;
  for (std::size_t k = 1; k < log.rows.size(); ++k) {
    const SimRecord& a = log.rows[k - 1];
    const SimRecord& b = log.rows[k];
    work += 0.5 * (a.tau * a.w1 + b.tau * b.w1) * (b.t - a.t);
    const double excursion = energy(b) - e0;
    peak_excursion = std::max(peak_excursion, std::abs(excursion));
    max_mismatch = std::max(max_mismatch, std::abs(work - excursion));
  }
  CHECK(peak_excursion > 0.5);
  CHECK(max_mismatch / peak_excursion < 1e-3);
}

TEST_CASE("halving dt shrinks the terminal error at fourth order") {
  const MechanismConfig cfg = default_config();
  const TrajectorySpec traj = default_trajectory();
  const GainSet gains{100.0, 20.0};
  const double duration = 0.5;

  auto terminal = [&](double dt) {
    SimSettings s = closed_loop_settings(dt, duration);
    s.initial_q1 = traj.q0 - 0.1;
    const SimLog log = run(cfg, s, traj, gains);
    return log.rows.back();
  };
  const SimRecord ref = terminal(1e-5);
  auto err = [&](const SimRecord& r) {
    return std::abs(r.q1 - ref.q1) + std::abs(r.w1 - ref.w1);
  };
  const double e1 = err(terminal(4e-3));
  const double e2 = err(terminal(2e-3));
  const double e3 = err(terminal(1e-3));
  CAPTURE(e1);
  CAPTURE(e2);
  CAPTURE(e3);
  CHECK(e1 / e2 >= 8.0);
  CHECK(e2 / e3 >= 8.0);
}

TEST_CASE("runaway state aborts with the failing step") {
  const MechanismConfig cfg = default_config();
  const TrajectorySpec traj = default_trajectory();
  SimSettings s;
  s.mode = SimMode::open_loop_torque;
  s.dt = 1e-3;
  s.duration = 10.0;
  s.initial_q1 = 0.7752;

  SUBCASE("rate limit") {
    // Near the rate limit the velocity-coupling torque alone throws the
    // state across it within one step.
    TorqueSeries series;
    series.t = {0.0, 10.0};
    series.tau = {0.0, 0.0};
    s.initial_w1 = 9.99e3;
    try {
      run(cfg, s, traj, {100.0, 20.0}, &series);
      FAIL("expected SimAbort");
    } catch (const SimAbort& e) {
      CHECK(e.step() > 0);
      CHECK(std::string(e.what()).find("diverged") != std::string::npos);
    }
  }
  SUBCASE("non-finite state") {
    // Overflowing torque turns the state non-finite inside the first step.
    TorqueSeries series;
    series.t = {0.0, 10.0};
    series.tau = {1e308, 1e308};
    try {
      run(cfg, s, traj, {100.0, 20.0}, &series);
      FAIL("expected SimAbort");
    } catch (const SimAbort& e) {
      CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
  }
}

TEST_CASE("mid-run unassemblable pose aborts with the failing step") {
  // Rocker pin at the bar end: the reference lengths only assemble on an arc,
  // so a forced sweep must abort once it leaves that arc.
  MechanismConfig cfg = default_config();
  cfg.coupler_pin_fraction = 1.0;
  cfg.extra_links.clear();
  SimSettings s;
  s.mode = SimMode::kinematic_sweep;
  s.dt = 1e-3;
  s.duration = 10.0;
  s.initial_q1 = kPi;  // assemblable region
  s.initial_w1 = 1.0;
  try {
    run(cfg, s, default_trajectory(), {100.0, 20.0});
    FAIL("expected SimAbort");
  } catch (const SimAbort& e) {
    CHECK(e.step() > 0);
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("torque profile covers both boundaries and matches statics") {
  const MechanismConfig cfg = default_config();
  const TrajectorySpec traj = default_trajectory();
  const auto profile = torque_profile(cfg, traj, 201);
  REQUIRE(profile.size() == 201);
  CHECK(profile.front().first == 0.0);
  CHECK(profile.back().first == 2.0);

  // Rest-to-rest: both boundary torques are pure gravity loads.
  const double g0 = dynamics_terms(cfg, traj.q0).g_eff;
  CHECK(rel_err(profile.front().second, g0) < 1e-9);

  // The profile is genuinely asymmetric in time over the cycle interior.
  double max_asym = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double mirrored = profile[profile.size() - 1 - i].second;
    max_asym = std::max(max_asym, std::abs(profile[i].second - mirrored));
  }
  CHECK(max_asym > 1.0);

  // Both rest endpoints sit one full turn apart, so their gravity loads --
  // and with them the boundary torques -- coincide.
  CHECK(std::abs(profile.front().second - profile.back().second) < 1e-6);
}

TEST_CASE("massless plant with gravity off needs no torque") {
  MechanismConfig cfg = default_config();
  cfg.gravity = 0.0;
  for (auto& [id, m] : cfg.masses) m = 0.0;
  const auto profile = torque_profile(cfg, default_trajectory(), 101);
  for (const auto& [t, tau] : profile) CHECK(std::abs(tau) < 1e-12);
}

TEST_CASE("frozen desired state reduces the profile to statics") {
  const MechanismConfig cfg = default_config();
  const PoseSolver solver(cfg);
  // A zero-length move holds the pose; inverse dynamics must return the
  // static gravity torque at every sample.
  const TrajectorySpec frozen = fit_quintic(1.1, 1.1, 2.0);
  const auto profile = torque_profile(cfg, frozen, 51);
  const double g = dynamics_terms(solver, 1.1).g_eff;
  for (const auto& [t, tau] : profile) CHECK(rel_err(tau, g) < 1e-9);
}
