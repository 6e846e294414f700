#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "legsim/geometry.hpp"
#include "legsim/mechanism.hpp"

namespace legsim {

// Intermediate scalars of the closed-form position solution, units m^2.
// A,B,C belong to the coupler-angle equation, D,E,F to the rocker-angle
// equation. Built with the pin-to-pin coupler length.
struct LoopClosureTerms {
  double A = 0, B = 0, C = 0, D = 0, E = 0, F = 0;
};

LoopClosureTerms loop_closure_terms(const MechanismConfig& config, double q1);

struct PositionSolution {
  double q2 = 0;  // coupler angle, rad, in (-pi, pi]
  double q3 = 0;  // rocker angle, rad, in (-pi, pi]
  LoopClosureTerms terms;
};

// Closed-form four-bar position solution at crank angle q1 (radians).
// Branches follow config.branch_sign_q2/q3. Throws SolveError:
//   unassemblable  if the loop cannot close at this q1,
//   degenerate     if both half-angle forms collapse,
//   bad_input      if the selected branches do not close the vector loop.
PositionSolution solve_position(const MechanismConfig& config, double q1);

struct RateSolution {
  double w2 = 0;  // rad/s
  double w3 = 0;  // rad/s
};

// Follower angular velocities for crank rate w1. Throws SolveError::singular
// when |sin(q2 - q3)| < 1e-9 (coupler and rocker collinear).
RateSolution solve_velocity(const MechanismConfig& config, double q1, double q2,
                            double q3, double w1);

struct AccelSolution {
  double a2 = 0;  // rad/s^2
  double a3 = 0;  // rad/s^2
};

// Follower angular accelerations, including the crank-acceleration terms;
// reduces to the constant-crank-rate form when a1 = 0.
AccelSolution solve_acceleration(const MechanismConfig& config, double q1,
                                 double q2, double q3, double w1, double w2,
                                 double w3, double a1);

// Circle-circle intersection: the point at distance len_a from p_a and len_b
// from p_b, on the side selected by branch (sign of the cross product of
// (p_b - p_a) with (apex - p_a)). Tangent circles yield the unique apex for
// either branch.
Vec2 solve_dyad(const Vec2& p_a, const Vec2& p_b, double len_a, double len_b,
                int branch);

// Full kinematic state at one crank angle: angles, rates, accelerations and
// every constructed joint, apex and centre of mass, in construction order.
struct LinkageState {
  double q1 = 0, q2 = 0, q3 = 0;
  double w1 = 0, w2 = 0, w3 = 0;
  double a1 = 0, a2 = 0, a3 = 0;
  std::vector<std::pair<std::string, Vec2>> points;

  const Vec2* find_point(std::string_view label) const;
};

// Repeated pose evaluation for one mechanism. Compiles the dyad parent
// references once; all evaluation methods are const and allocation-light,
// safe to call from parallel sweeps.
class PoseSolver {
 public:
  // Throws SolveError::unknown_point / bad_input on unresolvable dyads.
  explicit PoseSolver(MechanismConfig config);

  const MechanismConfig& config() const { return config_; }

  struct Pose {
    double q2 = 0;
    double q3 = 0;
    std::vector<Vec2> points;  // indexed like point_labels()
  };

  Pose pose(double q1) const;

  const std::vector<std::string>& point_labels() const { return labels_; }
  std::optional<std::size_t> point_index(std::string_view label) const;

  // One rigid rod carrying mass: endpoints are resolved per pose; the centre
  // of mass sits at the midpoint and the inertia is the slender-rod value
  // about it.
  struct BodyDef {
    int link_id = 0;
    double mass = 0;     // kg
    double length = 0;   // m
    double inertia = 0;  // kg m^2, (1/12) m l^2
  };

  struct BodyState {
    Vec2 com;
    double theta = 0;  // rod orientation, rad
  };

  const std::vector<BodyDef>& body_defs() const { return body_defs_; }
  void body_states(const Pose& pose, std::vector<BodyState>& out) const;

 private:
  struct Ref {
    int slot = -1;      // >= 0: index into points
    double frac = 0.0;  // slot < 0: coupler fraction
  };
  struct DyadProgram {
    Ref a, b;
    double len_a = 0, len_b = 0;
    int branch = +1;
    std::size_t apex_slot = 0;
    std::string label;
  };
  struct BodyProgram {
    Ref from;
    Ref to;
  };

  Vec2 resolve(const Ref& r, const std::vector<Vec2>& pts) const;

  MechanismConfig config_;
  std::vector<std::string> labels_;
  std::vector<DyadProgram> dyads_;
  std::vector<BodyDef> body_defs_;
  std::vector<BodyProgram> body_programs_;
};

// Composes position, velocity and acceleration analysis and constructs every
// dyad apex and centre of mass. Errors from the component solvers are
// rethrown annotated with the failing stage or dyad.
LinkageState full_pose(const MechanismConfig& config, double q1, double w1 = 0.0,
                       double a1 = 0.0);
LinkageState full_pose(const PoseSolver& solver, double q1, double w1 = 0.0,
                       double a1 = 0.0);

struct TraceSample {
  double q1 = 0;
  std::optional<Vec2> point;  // empty = pose not assemblable here (gap)
  std::string gap_reason;
};

// Positions of one labelled point across a crank sweep. Unassemblable
// samples are reported as gaps, never dropped. Throws on unknown labels.
std::vector<TraceSample> trace_point(const MechanismConfig& config,
                                     std::string_view label,
                                     std::span<const double> q1_samples);

}  // namespace legsim
