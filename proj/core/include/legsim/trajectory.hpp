#pragma once

namespace legsim {

// Rest-to-rest quintic q_d(t) = q0 + c3 t^3 + c4 t^4 + c5 t^5 on [0, T].
// Velocity and acceleration vanish at both ends by construction.
struct TrajectorySpec {
  double q0 = 0;  // rad
  double c3 = 0;  // rad/s^3
  double c4 = 0;  // rad/s^4
  double c5 = 0;  // rad/s^5
  double T = 0;   // s

  double delta() const { return ((c5 * T + c4) * T + c3) * T * T * T; }
  double qf() const { return q0 + delta(); }
};

// The built-in walking cycle: one full crank turn from 0.7752 rad in 2 s,
// coefficients (5/2 pi, -15/8 pi, 3/8 pi).
TrajectorySpec default_trajectory();

// Unique rest-to-rest quintic from q0 to qf in T seconds:
// c3 = 10 d/T^3, c4 = -15 d/T^4, c5 = 6 d/T^5 with d = qf - q0.
// Throws SolveError::bad_input for T <= 0.
TrajectorySpec fit_quintic(double q0, double qf, double T);

struct TrajectorySample {
  double q = 0;    // rad
  double dq = 0;   // rad/s
  double ddq = 0;  // rad/s^2
  bool clamped = false;  // t was outside [0, T] and snapped to the boundary
};

// Exact polynomial evaluation; out-of-range t clamps to the boundary values.
TrajectorySample eval(const TrajectorySpec& spec, double t);

// Periodic extension for multi-cycle runs: cycle n repeats the spec with q0
// shifted by n * (qf - q0). t beyond cycles*T clamps to the final rest state.
TrajectorySample eval_cyclic(const TrajectorySpec& spec, double t, int cycles);

}  // namespace legsim
