#pragma once

#include "legsim/kinematics.hpp"
#include "legsim/mechanism.hpp"

namespace legsim {

// Reduced dynamics about the crank coordinate:
//   m_eff(q1) q1'' + c_eff(q1) q1'^2 + g_eff(q1) = tau
// with c_eff = (1/2) d(m_eff)/dq1 and g_eff = dV/dq1.
struct DynamicsTerms {
  double m_eff = 0;  // kg m^2
  double c_eff = 0;  // kg m^2
  double g_eff = 0;  // N m
};

// Assembles the terms from the exact kinematics by central differences,
// summing m |dp_com/dq1|^2 + I (dtheta/dq1)^2 over every massed rod.
// Topology-agnostic: works for any dyad arrangement in the config.
DynamicsTerms dynamics_terms(const MechanismConfig& config, double q1);
DynamicsTerms dynamics_terms(const PoseSolver& solver, double q1);

// tau = m_eff a1 + c_eff w1^2 + g_eff.
double inverse_dynamics(const MechanismConfig& config, double q1, double w1,
                        double a1);
double inverse_dynamics(const PoseSolver& solver, double q1, double w1,
                        double a1);

// a1 = (tau - c_eff w1^2 - g_eff) / m_eff. Throws SolveError::zero_inertia
// when m_eff <= 1e-12.
double forward_dynamics(const MechanismConfig& config, double q1, double w1,
                        double tau);
double forward_dynamics(const PoseSolver& solver, double q1, double w1,
                        double tau);

// Total gravitational potential of all massed links, J (zero level at y=0).
double potential_energy(const PoseSolver& solver, double q1);
double potential_energy(const MechanismConfig& config, double q1);

// (1/2) m_eff(q1) w1^2, J.
double kinetic_energy(const PoseSolver& solver, double q1, double w1);
double kinetic_energy(const MechanismConfig& config, double q1, double w1);

}  // namespace legsim
