#include <benchmark/benchmark.h>

#include "legsim/control.hpp"
#include "legsim/dynamics.hpp"
#include "legsim/kinematics.hpp"
#include "legsim/mechanism.hpp"
#include "legsim/simulate.hpp"
#include "legsim/trajectory.hpp"

using namespace legsim;

static void BM_SolvePosition(benchmark::State& state) {
  const MechanismConfig cfg = default_config();
  double q1 = 0.7752;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_position(cfg, q1));
    q1 += 1e-3;
  }
}
BENCHMARK(BM_SolvePosition);

static void BM_FullPose(benchmark::State& state) {
  const PoseSolver solver(default_config());
  double q1 = 0.7752;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solver.pose(q1));
    q1 += 1e-3;
  }
}
BENCHMARK(BM_FullPose);

static void BM_DynamicsTerms(benchmark::State& state) {
  const PoseSolver solver(default_config());
  double q1 = 0.7752;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynamics_terms(solver, q1));
    q1 += 1e-3;
  }
}
BENCHMARK(BM_DynamicsTerms);

static void BM_ClosedLoopStep(benchmark::State& state) {
  const PoseSolver solver(default_config());
  const TrajectorySpec traj = default_trajectory();
  const GainSet gains{100.0, 20.0};
  auto deriv = [&](double t, const PlantState& s) -> PlantState {
    const TrajectorySample des = eval(traj, t);
    const DynamicsTerms terms = dynamics_terms(solver, s.q1);
    const double v =
        des.ddq + gains.kv * (des.dq - s.w1) + gains.kp * (des.q - s.q1);
    const double tau = terms.m_eff * v + terms.c_eff * s.w1 * s.w1 + terms.g_eff;
    return {s.w1, (tau - terms.c_eff * s.w1 * s.w1 - terms.g_eff) / terms.m_eff};
  };
  PlantState y{traj.q0, 0.0};
  double t = 0.0;
  for (auto _ : state) {
    y = rk4_step(deriv, t, y, 1e-3);
    t += 1e-3;
    if (t >= traj.T) {
      t = 0.0;
      y = {traj.q0, 0.0};
    }
    benchmark::DoNotOptimize(y);
  }
}
BENCHMARK(BM_ClosedLoopStep);

static void BM_WalkingCycleSimulation(benchmark::State& state) {
  const MechanismConfig cfg = default_config();
  const TrajectorySpec traj = default_trajectory();
  SimSettings settings;
  settings.dt = 1e-3;
  settings.duration = traj.T;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(cfg, settings, traj, {100.0, 20.0}));
  }
}
BENCHMARK(BM_WalkingCycleSimulation)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
