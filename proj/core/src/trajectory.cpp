#include "legsim/trajectory.hpp"

#include <algorithm>
#include <numbers>

#include "legsim/errors.hpp"

namespace legsim {

TrajectorySpec default_trajectory() {
  constexpr double pi = std::numbers::pi;
  return {0.7752, 2.5 * pi, -1.875 * pi, 0.375 * pi, 2.0};
}

TrajectorySpec fit_quintic(double q0, double qf, double T) {
  if (!(T > 0.0)) {
    throw SolveError(SolveError::Code::bad_input,
                     "trajectory duration must be strictly positive");
  }
  const double d = qf - q0;
  const double t3 = T * T * T;
  return {q0, 10.0 * d / t3, -15.0 * d / (t3 * T), 6.0 * d / (t3 * T * T), T};
}

TrajectorySample eval(const TrajectorySpec& spec, double t) {
  TrajectorySample s;
  const double tc = std::clamp(t, 0.0, spec.T);
  s.clamped = tc != t;
  const double t2 = tc * tc;
  s.q = spec.q0 + ((spec.c5 * tc + spec.c4) * tc + spec.c3) * t2 * tc;
  s.dq = ((5.0 * spec.c5 * tc + 4.0 * spec.c4) * tc + 3.0 * spec.c3) * t2;
  s.ddq = ((20.0 * spec.c5 * tc + 12.0 * spec.c4) * tc + 6.0 * spec.c3) * tc;
  return s;
}

TrajectorySample eval_cyclic(const TrajectorySpec& spec, double t, int cycles) {
  if (cycles < 1) {
    throw SolveError(SolveError::Code::bad_input, "cycles must be >= 1");
  }
  int cycle = static_cast<int>(t / spec.T);
  cycle = std::clamp(cycle, 0, cycles - 1);
  TrajectorySample s = eval(spec, t - cycle * spec.T);
  s.q += cycle * spec.delta();
  return s;
}

}  // namespace legsim
