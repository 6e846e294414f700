#include "legsim/control.hpp"

#include <cmath>

#include "legsim/errors.hpp"

namespace legsim {

namespace {

void require_gains(const GainSet& gains) {
  if (!(gains.kp > 0.0) || !(gains.kv > 0.0)) {
    throw SolveError(SolveError::Code::bad_input,
                     "gains must be strictly positive (kp > 0, kv > 0)");
  }
}

}  // namespace

GainSet critically_damped_gains(double kp) {
  if (!(kp > 0.0)) {
    throw SolveError(SolveError::Code::bad_input, "kp must be strictly positive");
  }
  return {kp, 2.0 * std::sqrt(kp)};
}

ControlOutput computed_torque(const PoseSolver& solver, const GainSet& gains,
                              double q1, double w1, const TrajectorySample& desired) {
  require_gains(gains);
  ControlOutput out;
  out.e = desired.q - q1;
  out.e_dot = desired.dq - w1;
  out.v = desired.ddq + gains.kv * out.e_dot + gains.kp * out.e;
  const DynamicsTerms t = dynamics_terms(solver, q1);
  out.torque = t.m_eff * out.v + t.c_eff * w1 * w1 + t.g_eff;
  return out;
}

ControlOutput computed_torque(const MechanismConfig& config, const GainSet& gains,
                              double q1, double w1, const TrajectorySample& desired) {
  return computed_torque(PoseSolver(config), gains, q1, w1, desired);
}

double error_envelope(double kp, double kv, double e0, double edot0, double t) {
  if (!(kp > 0.0) || kv < 0.0) {
    throw SolveError(SolveError::Code::bad_input,
                     "error envelope needs kp > 0 and kv >= 0");
  }
  const double disc = kv * kv - 4.0 * kp;
  if (disc > 0.0) {
    // Over-damped: two distinct real roots.
    const double root = std::sqrt(disc);
    const double r1 = 0.5 * (-kv + root);
    const double r2 = 0.5 * (-kv - root);
    const double a = (edot0 - r2 * e0) / (r1 - r2);
    const double b = (r1 * e0 - edot0) / (r1 - r2);
    return a * std::exp(r1 * t) + b * std::exp(r2 * t);
  }
  if (disc == 0.0) {
    // Critically damped: double root at -kv/2.
    const double lam = 0.5 * kv;
    return (e0 + (edot0 + lam * e0) * t) * std::exp(-lam * t);
  }
  // Under-damped (kv = 0 gives the undamped oscillator).
  const double zeta = 0.5 * kv;
  const double wd = 0.5 * std::sqrt(-disc);
  return std::exp(-zeta * t) *
         (e0 * std::cos(wd * t) + (edot0 + zeta * e0) / wd * std::sin(wd * t));
}

}  // namespace legsim
