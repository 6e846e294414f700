#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "legsim/errors.hpp"
#include "legsim/trajectory.hpp"
#include "test_support.hpp"

using namespace legsim;
using legsim::test::Rng;
using legsim::test::rel_err;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("built-in walking cycle: exact coefficients and endpoints") {
  const TrajectorySpec traj = default_trajectory();
  CHECK(traj.q0 == 0.7752);
  CHECK(traj.c3 == 2.5 * kPi);
  CHECK(traj.c4 == -1.875 * kPi);
  CHECK(traj.c5 == 0.375 * kPi);
  CHECK(traj.T == 2.0);

  const TrajectorySample start = eval(traj, 0.0);
  CHECK(start.q == 0.7752);
  CHECK(start.dq == 0.0);
  CHECK(start.ddq == 0.0);

  const TrajectorySample end = eval(traj, 2.0);
  CHECK(end.q == doctest::Approx(0.7752 + 2.0 * kPi).epsilon(1e-14));
  CHECK(std::abs(end.q - 7.0582) < 5e-4);  // quoted figure is a rounding
  CHECK(std::abs(end.dq) < 1e-12);
  CHECK(std::abs(end.ddq) < 1e-12);
}

TEST_CASE("midpoint values of the walking cycle") {
  const TrajectorySpec traj = default_trajectory();
  const TrajectorySample mid = eval(traj, 1.0);
  CHECK(mid.q == doctest::Approx(0.7752 + kPi).epsilon(1e-14));
  CHECK(mid.dq == doctest::Approx(15.0 * kPi / 8.0).epsilon(1e-14));
  CHECK(std::abs(mid.ddq) < 1e-12);
}

TEST_CASE("fit_quintic recovers the built-in coefficients from endpoints") {
  const TrajectorySpec traj = fit_quintic(0.7752, 0.7752 + 2.0 * kPi, 2.0);
  CHECK(rel_err(traj.c3, 2.5 * kPi) < 1e-14);
  CHECK(rel_err(traj.c4, -1.875 * kPi) < 1e-14);
  CHECK(rel_err(traj.c5, 0.375 * kPi) < 1e-14);
}

TEST_CASE("fit_quintic closed form") {
  const TrajectorySpec traj = fit_quintic(0.0, 1.0, 1.0);
  CHECK(traj.c3 == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(traj.c4 == doctest::Approx(-15.0).epsilon(1e-15));
  CHECK(traj.c5 == doctest::Approx(6.0).epsilon(1e-15));

  const TrajectorySpec flat = fit_quintic(0.3, 0.3, 2.0);
  CHECK(flat.c3 == 0.0);
  CHECK(flat.c4 == 0.0);
  CHECK(flat.c5 == 0.0);
  CHECK(eval(flat, 1.234).q == 0.3);

  CHECK_THROWS_AS(fit_quintic(0.0, 1.0, 0.0), SolveError);
  CHECK_THROWS_AS(fit_quintic(0.0, 1.0, -2.0), SolveError);
}

TEST_CASE("rest-to-rest boundaries hold for arbitrary fits") {
  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const double q0 = rng.uniform(-10, 10);
    const double qf = rng.uniform(-10, 10);
    const double T = rng.uniform(0.1, 20.0);
    const TrajectorySpec traj = fit_quintic(q0, qf, T);
    const TrajectorySample a = eval(traj, 0.0);
    const TrajectorySample b = eval(traj, T);
    CHECK(std::abs(a.q - q0) < 1e-12);
    CHECK(std::abs(a.dq) < 1e-12);
    CHECK(std::abs(a.ddq) < 1e-12);
    CHECK(std::abs(b.q - qf) < 1e-9 * std::max(1.0, std::abs(qf)));
    CHECK(std::abs(b.dq) < 1e-9);
    CHECK(std::abs(b.ddq) < 1e-8);
  }
}

TEST_CASE("derivatives agree with finite differences") {
  const TrajectorySpec traj = default_trajectory();
  const double h = 1e-6;
  const double dq_peak = 15.0 * kPi / 8.0;
  for (int i = 1; i < 40; ++i) {
    const double t = 2.0 * i / 40.0 - 0.025;
    const double tp = t + h;
    const double tm = t - h;
    const double span = tp - tm;  // exact representable step
    const double fd_dq = (eval(traj, tp).q - eval(traj, tm).q) / span;
    const double fd_ddq = (eval(traj, tp).dq - eval(traj, tm).dq) / span;
    const TrajectorySample s = eval(traj, t);
    if (t > 0.15 && t < 1.85) {
      // Interior: the rates are well away from zero, plain relative error.
      CHECK(rel_err(s.dq, fd_dq) < 1e-8);
      CHECK(rel_err(s.ddq, fd_ddq) < 1e-7);
    } else {
      // Near the rest ends the rates vanish and polynomial cancellation
      // dominates the differences; bound against the profile peak instead.
      CHECK(std::abs(s.dq - fd_dq) < 1e-7 * dq_peak);
      CHECK(std::abs(s.ddq - fd_ddq) < 1e-6 * dq_peak);
    }
  }
}

TEST_CASE("monotone and symmetric between rest endpoints") {
  const TrajectorySpec traj = default_trajectory();
  double prev = eval(traj, 0.0).q;
  for (int i = 1; i <= 500; ++i) {
    const double q = eval(traj, 2.0 * i / 500.0).q;
    CHECK(q >= prev - 1e-12);
    prev = q;
  }
  for (int i = 0; i <= 100; ++i) {
    const double s = i / 100.0;  // in [0, T/2]
    const double left = eval(traj, 1.0 - s).q;
    const double right = eval(traj, 1.0 + s).q;
    CHECK(rel_err(left + right, 2.0 * 0.7752 + 2.0 * kPi) < 1e-13);
  }
}

TEST_CASE("out-of-range times clamp and flag") {
  const TrajectorySpec traj = default_trajectory();
  const TrajectorySample before = eval(traj, -0.5);
  CHECK(before.clamped);
  CHECK(before.q == 0.7752);
  const TrajectorySample after = eval(traj, 2.5);
  CHECK(after.clamped);
  CHECK(after.q == eval(traj, 2.0).q);
  CHECK(!eval(traj, 1.0).clamped);
}

TEST_CASE("cyclic extension shifts whole turns") {
  const TrajectorySpec traj = default_trajectory();
  const double delta = traj.delta();
  CHECK(rel_err(delta, 2.0 * kPi) < 1e-14);

  const TrajectorySample c0 = eval_cyclic(traj, 0.5, 3);
  const TrajectorySample c1 = eval_cyclic(traj, 2.5, 3);
  CHECK(rel_err(c1.q, c0.q + delta) < 1e-13);
  CHECK(rel_err(c1.dq, c0.dq) < 1e-10);

  // Beyond the last cycle the trajectory rests at its final value.
  const TrajectorySample tail = eval_cyclic(traj, 7.0, 3);
  CHECK(tail.q == doctest::Approx(traj.q0 + 3 * delta).epsilon(1e-12));
  CHECK(tail.dq == 0.0);
}
