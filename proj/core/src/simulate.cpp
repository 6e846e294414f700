#include "legsim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "legsim/errors.hpp"

namespace legsim {

namespace {

constexpr double kRunawayRate = 1e4;  // rad/s; beyond this the run aborts

void require_settings(const SimSettings& settings) {
  if (!(settings.dt > 0.0) || !(settings.duration > 0.0) || settings.cycles < 1) {
    throw SolveError(SolveError::Code::bad_input,
                     "simulation needs dt > 0, duration > 0 and cycles >= 1");
  }
}

}  // namespace

double TorqueSeries::at(double time) const {
  if (t.empty() || t.size() != tau.size()) {
    throw SolveError(SolveError::Code::bad_input,
                     "torque series needs matching, non-empty t and tau");
  }
  if (time <= t.front()) return tau.front();
  if (time >= t.back()) return tau.back();
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  const std::size_t hi = static_cast<std::size_t>(it - t.begin());
  const std::size_t lo = hi - 1;
  const double span = t[hi] - t[lo];
  if (span <= 0.0) return tau[lo];
  const double f = (time - t[lo]) / span;
  return tau[lo] + f * (tau[hi] - tau[lo]);
}

SimLog run(const MechanismConfig& config, const SimSettings& settings,
           const TrajectorySpec& trajectory, const GainSet& gains,
           const TorqueSeries* torque) {
  require_settings(settings);
  if (settings.mode == SimMode::open_loop_torque && torque == nullptr) {
    throw SolveError(SolveError::Code::bad_input,
                     "open-loop mode needs a torque series");
  }

  const PoseSolver solver(config);
  const auto knee = solver.point_index("knee_B");
  const auto ankle = solver.point_index("ankle_A");
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  const double q1_start = settings.initial_q1.value_or(trajectory.q0);
  const std::size_t n_steps =
      static_cast<std::size_t>(std::llround(settings.duration / settings.dt));

  // State derivative per mode. The closed loop shares one set of dynamics
  // terms between the control law and the plant, which is exactly
  // computed_torque followed by forward_dynamics.
  auto plant_accel = [&](double tau_cmd, const PlantState& s,
                         const DynamicsTerms& t) {
    if (!(t.m_eff > 1e-12)) {
      throw SolveError(SolveError::Code::zero_inertia,
                       "effective inertia vanishes during simulation");
    }
    return (tau_cmd - t.c_eff * s.w1 * s.w1 - t.g_eff) / t.m_eff;
  };
  auto control_torque = [&](double t, const PlantState& s,
                            const DynamicsTerms& terms) {
    const TrajectorySample des = eval_cyclic(trajectory, t, settings.cycles);
    const double v = des.ddq + gains.kv * (des.dq - s.w1) + gains.kp * (des.q - s.q1);
    return terms.m_eff * v + terms.c_eff * s.w1 * s.w1 + terms.g_eff;
  };
  auto deriv = [&](double t, const PlantState& s) -> PlantState {
    const DynamicsTerms terms = dynamics_terms(solver, s.q1);
    const double tau_cmd = settings.mode == SimMode::closed_loop
                               ? control_torque(t, s, terms)
                               : torque->at(t);
    return {s.w1, plant_accel(tau_cmd, s, terms)};
  };

  if (settings.mode == SimMode::closed_loop && !(gains.kp > 0.0 && gains.kv > 0.0)) {
    throw SolveError(SolveError::Code::bad_input,
                     "closed-loop run needs strictly positive gains");
  }

  SimLog log;
  log.settings = settings;
  log.rows.reserve(n_steps + 1);

  PlantState y{q1_start, settings.initial_w1};
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * settings.dt;

    if (settings.mode == SimMode::kinematic_sweep) {
      // Pure pose sweep: the crank angle is prescribed, nothing integrated.
      y.q1 = q1_start + settings.initial_w1 * t;
      y.w1 = settings.initial_w1;
    }

    SimRecord rec;
    rec.t = t;
    rec.q1 = y.q1;
    rec.w1 = y.w1;
    try {
      double a1 = 0.0;
      if (settings.mode == SimMode::closed_loop) {
        const TrajectorySample des = eval_cyclic(trajectory, t, settings.cycles);
        const DynamicsTerms terms = dynamics_terms(solver, y.q1);
        rec.qd = des.q;
        rec.qd_dot = des.dq;
        rec.qd_ddot = des.ddq;
        rec.e = des.q - y.q1;
        rec.tau = control_torque(t, y, terms);
        a1 = plant_accel(rec.tau, y, terms);
      } else if (settings.mode == SimMode::open_loop_torque) {
        const DynamicsTerms terms = dynamics_terms(solver, y.q1);
        rec.tau = torque->at(t);
        a1 = plant_accel(rec.tau, y, terms);
        rec.qd = y.q1;
        rec.qd_dot = y.w1;
      } else {
        rec.qd = y.q1;
        rec.qd_dot = y.w1;
      }
      rec.a1 = a1;

      const PoseSolver::Pose pose = solver.pose(y.q1);
      rec.q2 = pose.q2;
      rec.q3 = pose.q3;
      if (y.w1 != 0.0 || a1 != 0.0) {
        const RateSolution rates =
            solve_velocity(config, y.q1, pose.q2, pose.q3, y.w1);
        rec.w2 = rates.w2;
        rec.w3 = rates.w3;
        const AccelSolution acc = solve_acceleration(
            config, y.q1, pose.q2, pose.q3, y.w1, rates.w2, rates.w3, a1);
        rec.a2 = acc.a2;
        rec.a3 = acc.a3;
      }
      rec.xB = knee ? pose.points[*knee].x : nan;
      rec.yB = knee ? pose.points[*knee].y : nan;
      rec.xA = ankle ? pose.points[*ankle].x : nan;
      rec.yA = ankle ? pose.points[*ankle].y : nan;
    } catch (const SolveError& err) {
      std::ostringstream msg;
      msg << "step " << k << " (t = " << t << " s): " << err.what();
      throw SimAbort(k, t, msg.str());
    }
    log.rows.push_back(rec);

    if (k == n_steps) break;
    if (settings.mode != SimMode::kinematic_sweep) {
      try {
        y = rk4_step(deriv, t, y, settings.dt);
      } catch (const SolveError& err) {
        std::ostringstream msg;
        msg << "step " << k << " (t = " << t << " s): " << err.what();
        throw SimAbort(k, t, msg.str());
      }
      if (!std::isfinite(y.q1) || !std::isfinite(y.w1) ||
          std::abs(y.w1) > kRunawayRate) {
        std::ostringstream msg;
        msg << "step " << k + 1 << ": state diverged (q1 = " << y.q1
            << ", w1 = " << y.w1 << ")";
        throw SimAbort(k + 1, t + settings.dt, msg.str());
      }
    }
  }
  return log;
}

std::vector<std::pair<double, double>> torque_profile(const MechanismConfig& config,
                                                      const TrajectorySpec& trajectory,
                                                      std::size_t n_samples) {
  if (n_samples < 2) {
    throw SolveError(SolveError::Code::bad_input,
                     "torque profile needs at least the two boundary samples");
  }
  const PoseSolver solver(config);
  std::vector<std::pair<double, double>> out;
  out.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double t =
        trajectory.T * static_cast<double>(i) / static_cast<double>(n_samples - 1);
    const TrajectorySample des = eval(trajectory, t);
    out.emplace_back(t, inverse_dynamics(solver, des.q, des.dq, des.ddq));
  }
  return out;
}

}  // namespace legsim
