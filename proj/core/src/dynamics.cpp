#include "legsim/dynamics.hpp"

#include <cmath>
#include <vector>

#include "legsim/errors.hpp"
#include "legsim/geometry.hpp"

namespace legsim {

namespace {

// Step for first derivatives of the exact kinematics.
constexpr double kKinStep = 1e-6;
// Wider step for d(m_eff)/dq1: m_eff itself carries ~1e-9 of finite-difference
// noise, so differencing it at 1e-6 would drown c_eff in roundoff.
constexpr double kInertiaStep = 1e-4;

struct MassGravity {
  double m_eff = 0;
  double g_eff = 0;
};

// m_eff and g_eff from one central-difference pass over all massed rods:
//   m_eff = sum m |dp/dq1|^2 + I (dtheta/dq1)^2
//   g_eff = dV/dq1 = sum m g d(y_com)/dq1
MassGravity mass_gravity(const PoseSolver& solver, double q1) {
  std::vector<PoseSolver::BodyState> plus, minus;
  solver.body_states(solver.pose(q1 + kKinStep), plus);
  solver.body_states(solver.pose(q1 - kKinStep), minus);

  const auto& defs = solver.body_defs();
  const double inv_2h = 1.0 / (2.0 * kKinStep);
  MassGravity out;
  for (std::size_t i = 0; i < defs.size(); ++i) {
    if (defs[i].mass == 0.0) continue;
    const Vec2 dp = (plus[i].com - minus[i].com) * inv_2h;
    const double dtheta = angle_diff(plus[i].theta, minus[i].theta) * inv_2h;
    out.m_eff += defs[i].mass * dp.squared_norm() + defs[i].inertia * dtheta * dtheta;
    out.g_eff += defs[i].mass * solver.config().gravity * dp.y;
  }
  return out;
}

}  // namespace

DynamicsTerms dynamics_terms(const PoseSolver& solver, double q1) {
  const MassGravity at = mass_gravity(solver, q1);
  const double m_plus = mass_gravity(solver, q1 + kInertiaStep).m_eff;
  const double m_minus = mass_gravity(solver, q1 - kInertiaStep).m_eff;
  DynamicsTerms terms;
  terms.m_eff = at.m_eff;
  terms.c_eff = (m_plus - m_minus) / (4.0 * kInertiaStep);  // (1/2) dM/dq1
  terms.g_eff = at.g_eff;
  return terms;
}

DynamicsTerms dynamics_terms(const MechanismConfig& config, double q1) {
  return dynamics_terms(PoseSolver(config), q1);
}

double inverse_dynamics(const PoseSolver& solver, double q1, double w1, double a1) {
  const DynamicsTerms t = dynamics_terms(solver, q1);
  return t.m_eff * a1 + t.c_eff * w1 * w1 + t.g_eff;
}

double inverse_dynamics(const MechanismConfig& config, double q1, double w1,
                        double a1) {
  return inverse_dynamics(PoseSolver(config), q1, w1, a1);
}

double forward_dynamics(const PoseSolver& solver, double q1, double w1, double tau) {
  const DynamicsTerms t = dynamics_terms(solver, q1);
  if (!(t.m_eff > 1e-12)) {
    throw SolveError(SolveError::Code::zero_inertia,
                     "effective inertia vanishes: no massed link moves with the crank");
  }
  return (tau - t.c_eff * w1 * w1 - t.g_eff) / t.m_eff;
}

double forward_dynamics(const MechanismConfig& config, double q1, double w1,
                        double tau) {
  return forward_dynamics(PoseSolver(config), q1, w1, tau);
}

double potential_energy(const PoseSolver& solver, double q1) {
  std::vector<PoseSolver::BodyState> bodies;
  solver.body_states(solver.pose(q1), bodies);
  const auto& defs = solver.body_defs();
  double v = 0.0;
  for (std::size_t i = 0; i < defs.size(); ++i) {
    v += defs[i].mass * solver.config().gravity * bodies[i].com.y;
  }
  return v;
}

double potential_energy(const MechanismConfig& config, double q1) {
  return potential_energy(PoseSolver(config), q1);
}

double kinetic_energy(const PoseSolver& solver, double q1, double w1) {
  return 0.5 * mass_gravity(solver, q1).m_eff * w1 * w1;
}

double kinetic_energy(const MechanismConfig& config, double q1, double w1) {
  return kinetic_energy(PoseSolver(config), q1, w1);
}

}  // namespace legsim
