#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "legsim/control.hpp"
#include "legsim/dynamics.hpp"
#include "legsim/kinematics.hpp"
#include "legsim/trajectory.hpp"

namespace legsim {

enum class SimMode {
  closed_loop,       // computed-torque tracking of the trajectory
  open_loop_torque,  // replay a given torque series through the plant
  kinematic_sweep,   // pure pose sweep at constant crank rate, no dynamics
};

struct SimSettings {
  double dt = 1e-3;      // s
  double duration = 2.0; // s
  int cycles = 1;        // trajectory repetitions (closed loop)
  SimMode mode = SimMode::closed_loop;
  std::optional<double> initial_q1;  // defaults to the trajectory start
  double initial_w1 = 0.0;
};

// One logged integration step. Point columns hold the traced knee and ankle
// when the config defines them, NaN otherwise.
struct SimRecord {
  double t = 0;
  double q1 = 0, q2 = 0, q3 = 0;
  double w1 = 0, w2 = 0, w3 = 0;
  double a1 = 0, a2 = 0, a3 = 0;
  double qd = 0, qd_dot = 0, qd_ddot = 0;
  double e = 0;
  double tau = 0;
  double xB = 0, yB = 0;
  double xA = 0, yA = 0;
};

struct SimLog {
  std::vector<SimRecord> rows;
  SimSettings settings;
};

// Integration state of the reduced plant.
struct PlantState {
  double q1 = 0;
  double w1 = 0;
};

// Classical 4th-order Runge-Kutta update of (q1, w1). `deriv` maps
// (t, PlantState) to the state derivative (w1, a1); evaluation failures
// propagate as exceptions.
template <typename F>
PlantState rk4_step(F&& deriv, double t, const PlantState& y, double dt) {
  const PlantState k1 = deriv(t, y);
  const PlantState y2{y.q1 + 0.5 * dt * k1.q1, y.w1 + 0.5 * dt * k1.w1};
  const PlantState k2 = deriv(t + 0.5 * dt, y2);
  const PlantState y3{y.q1 + 0.5 * dt * k2.q1, y.w1 + 0.5 * dt * k2.w1};
  const PlantState k3 = deriv(t + 0.5 * dt, y3);
  const PlantState y4{y.q1 + dt * k3.q1, y.w1 + dt * k3.w1};
  const PlantState k4 = deriv(t + dt, y4);
  return {y.q1 + dt / 6.0 * (k1.q1 + 2.0 * k2.q1 + 2.0 * k3.q1 + k4.q1),
          y.w1 + dt / 6.0 * (k1.w1 + 2.0 * k2.w1 + 2.0 * k3.w1 + k4.w1)};
}

// Piecewise-linear torque signal for open-loop replay.
struct TorqueSeries {
  std::vector<double> t;
  std::vector<double> tau;

  double at(double time) const;
};

// Fixed-step simulation. Behaviour per mode:
//   closed_loop      desired state -> control torque -> plant -> RK4
//   open_loop_torque torque series -> plant -> RK4 (requires `torque`)
//   kinematic_sweep  q1(t) = q1_0 + w1 t evaluated directly, no integration
// The log has one row per step boundary, uniformly spaced, first row at t=0.
// Throws SimAbort on mid-run singularities, non-finite state or |w1| > 1e4.
SimLog run(const MechanismConfig& config, const SimSettings& settings,
           const TrajectorySpec& trajectory, const GainSet& gains,
           const TorqueSeries* torque = nullptr);

// Inverse dynamics along the exact desired trajectory (no feedback),
// n_samples points covering [0, T] inclusive.
std::vector<std::pair<double, double>> torque_profile(const MechanismConfig& config,
                                                      const TrajectorySpec& trajectory,
                                                      std::size_t n_samples);

}  // namespace legsim
