#pragma once

#include <map>
#include <string>
#include <vector>

namespace legsim {

// A two-bar assembly hung between two already-constructed points; the apex
// is the circle-circle intersection selected by `branch`. Parent references
// are resolved in construction order and may be:
//   O / crank_pivot, P / crank_tip, Q / rocker_pivot, R / rocker_tip,
//   coupler_end, cf:<t> (point at fraction t of the crank-tip -> rocker-pin
//   segment, t may exceed 1 up to the physical bar end), or the label of an
//   earlier dyad.
struct DyadSpec {
  std::string parent_a;
  std::string parent_b;
  double len_a = 0.0;  // m, parent_a -> apex
  double len_b = 0.0;  // m, parent_b -> apex
  int branch = +1;     // +1 selects positive cross(parent_b - parent_a, apex - parent_a)
  std::vector<int> link_ids;  // one or two of 5..8; first id is the rod parent_a->apex,
                              // second (if any) the rod parent_b->apex
  std::string label;
};

// Geometric and inertial ground truth shared by every other module.
// Frame: crank pivot at the origin, ground link along +x to (l4, 0),
// gravity along -y. Immutable after validation; share freely by value.
struct MechanismConfig {
  double l1 = 0.0;  // crank, m
  double l2 = 0.0;  // coupler bar, m (full physical bar)
  double l3 = 0.0;  // rocker, m
  double l4 = 0.0;  // ground link, m

  // Where along the coupler bar the rocker pin sits, as a fraction of l2.
  // 1.0 pins the rocker at the bar end (the textbook four-bar); the shipped
  // leg machine pins it mid-bar (0.5) so the bar continues past the pin to
  // the knee. Only l2 * coupler_pin_fraction enters the loop closure.
  double coupler_pin_fraction = 1.0;

  std::vector<DyadSpec> extra_links;  // follower links 5..8 and auxiliaries
  std::map<int, double> masses;       // link id -> kg; ids exactly {1,2,3,5,6,7,8}
  double gravity = 9.81;              // m/s^2, acting along -y
  int branch_sign_q2 = -1;            // assembly branch of the coupler angle
  int branch_sign_q3 = -1;            // assembly branch of the rocker angle

  // Pin-to-pin coupler length used by the loop closure.
  double coupler_length() const { return l2 * coupler_pin_fraction; }
};

// Slender-rod defaults at 1 kg/m for links 1,2,3,5,7 plus 1 kg payloads on
// links 6 and 8 (the leg-bearing braces).
std::map<int, double> default_masses(double leg_length = 0.90);

// The shipped follower topology: four dyads labelled support_S, knee_B,
// support_T, ankle_A hung below the four-bar so the ankle traces a closed
// walking-style curve. An approximation of the physical machine; override
// via MechanismConfig::extra_links for other arrangements.
std::vector<DyadSpec> default_extra_links(double leg_length = 0.90);

// Scales the whole machine from a leg length, keeping the fixed link ratio
// l1:l2:l4:l3 = 1:5:2:2.5 exactly and pinning the rocker at mid-bar.
MechanismConfig from_leg_length(double leg_length);
MechanismConfig from_leg_length(double leg_length, std::map<int, double> masses,
                                std::vector<DyadSpec> extras);

// from_leg_length(0.90): l1=0.18, l2=0.90, l4=0.36, l3=0.45.
MechanismConfig default_config();

// Every violated invariant as a human-readable message; empty means valid.
// Validation also sweeps the crank at 1e-3 rad over a full revolution and
// reports if the loop or any dyad fails to assemble, so a validated config
// is position-solvable at any crank angle.
std::vector<std::string> validate(const MechanismConfig& config);

}  // namespace legsim
