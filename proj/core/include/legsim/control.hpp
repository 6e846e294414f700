#pragma once

#include "legsim/dynamics.hpp"
#include "legsim/trajectory.hpp"

namespace legsim {

// Tracking gains; the closed-loop error obeys e'' + kv e' + kp e = 0, so
// both must be strictly positive for stable tracking.
struct GainSet {
  double kp = 0;  // 1/s^2
  double kv = 0;  // 1/s
};

// kv = 2 sqrt(kp): fastest non-oscillatory error decay.
// Throws SolveError::bad_input for kp <= 0.
GainSet critically_damped_gains(double kp);

struct ControlOutput {
  double torque = 0;  // N m
  double v = 0;       // commanded crank acceleration, rad/s^2
  double e = 0;       // q_d - q1, rad
  double e_dot = 0;   // q_d' - w1, rad/s
};

// Computed-torque law: v = ddq_d + kv (dq_d - w1) + kp (q_d - q1) and
// tau = m_eff v + c_eff w1^2 + g_eff. With an exact model the closed loop
// is exactly the linear error dynamics above.
ControlOutput computed_torque(const MechanismConfig& config, const GainSet& gains,
                              double q1, double w1, const TrajectorySample& desired);
ControlOutput computed_torque(const PoseSolver& solver, const GainSet& gains,
                              double q1, double w1, const TrajectorySample& desired);

// Analytic solution of e'' + kv e' + kp e = 0 with e(0) = e0, e'(0) = edot0.
// Handles the under-, critically and over-damped cases; kv = 0 (undamped) is
// accepted here so the envelope can serve as a reference even for gains the
// controller itself rejects. Requires kp > 0, kv >= 0.
double error_envelope(double kp, double kv, double e0, double edot0, double t);

}  // namespace legsim
