#include "legsim/mechanism.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "legsim/errors.hpp"
#include "legsim/kinematics.hpp"

namespace legsim {

namespace {

const std::set<int> kMassedIds = {1, 2, 3, 5, 6, 7, 8};

}  // namespace

std::map<int, double> default_masses(double leg_length) {
  const double rod = 1.0;  // kg/m, uniform slender rods
  return {
      {1, rod * leg_length / 5.0},
      {2, rod * leg_length},
      {3, rod * leg_length / 2.0},
      {5, rod * leg_length / 2.0},
      {6, 1.0},  // carries part of the patient's leg
      {7, rod * leg_length / 2.0},
      {8, 1.0},  // carries part of the patient's leg
  };
}

std::vector<DyadSpec> default_extra_links(double leg_length) {
  const double s = leg_length / 2.0;  // follower link length per the ratio rule
  return {
      // Triangular brace plate on the outer half of the coupler bar.
      {"R", "coupler_end", s, s, +1, {5}, "support_S"},
      // Articulated knee: hung off the bar end, guided from the rocker pivot.
      {"coupler_end", "Q", s, s, +1, {6}, "knee_B"},
      // Foot pin: the shank/brace truss apex rides on the bar end, which
      // traces the flat-bottomed walking curve of this link family.
      {"knee_B", "support_S", s, s, -1, {7}, "ankle_A"},
      // Calf brace between foot and knee.
      {"ankle_A", "knee_B", s, s, -1, {8}, "support_T"},
  };
}

MechanismConfig from_leg_length(double leg_length, std::map<int, double> masses,
                                std::vector<DyadSpec> extras) {
  if (!(leg_length > 0.0)) {
    throw SolveError(SolveError::Code::bad_input,
                     "leg length must be strictly positive");
  }
  MechanismConfig config;
  config.l1 = leg_length / 5.0;
  config.l2 = leg_length;
  config.l4 = 2.0 * config.l1;
  config.l3 = leg_length / 2.0;
  config.coupler_pin_fraction = 0.5;  // rocker pin at mid-bar
  config.masses = std::move(masses);
  config.extra_links = std::move(extras);
  return config;
}

MechanismConfig from_leg_length(double leg_length) {
  return from_leg_length(leg_length, default_masses(leg_length),
                         default_extra_links(leg_length));
}

MechanismConfig default_config() { return from_leg_length(0.90); }

std::vector<std::string> validate(const MechanismConfig& config) {
  std::vector<std::string> diagnostics;
  auto fail = [&diagnostics](const std::string& msg) { diagnostics.push_back(msg); };

  const std::pair<const char*, double> lengths[] = {
      {"l1", config.l1}, {"l2", config.l2}, {"l3", config.l3}, {"l4", config.l4}};
  for (const auto& [name, value] : lengths) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      fail(std::string("non-positive length ") + name);
    }
  }
  if (!(config.coupler_pin_fraction > 0.0) || config.coupler_pin_fraction > 1.0) {
    fail("coupler_pin must be in (0, 1]");
  }
  if (!std::isfinite(config.gravity)) {
    fail("gravity must be finite");
  }
  if (config.branch_sign_q2 != -1 && config.branch_sign_q2 != 1) {
    fail("branch.q2 must be -1 or +1");
  }
  if (config.branch_sign_q3 != -1 && config.branch_sign_q3 != 1) {
    fail("branch.q3 must be -1 or +1");
  }

  std::set<int> ids;
  bool any_positive = false;
  for (const auto& [id, mass] : config.masses) {
    ids.insert(id);
    if (mass < 0.0 || !std::isfinite(mass)) {
      fail("mass." + std::to_string(id) + " must be non-negative");
    }
    if (mass > 0.0) any_positive = true;
  }
  if (ids != kMassedIds) {
    fail("mass ids must be exactly {1,2,3,5,6,7,8} (link 4 is static and massless)");
  }
  if (!any_positive) {
    fail("at least one mass must be strictly positive");
  }

  std::set<std::string> seen_labels;
  std::set<int> seen_link_ids;
  for (const auto& dyad : config.extra_links) {
    const std::string who = dyad.label.empty() ? "<unnamed>" : dyad.label;
    if (!(dyad.len_a > 0.0) || !(dyad.len_b > 0.0)) {
      fail("dyad " + who + ": lengths must be strictly positive");
    }
    if (dyad.branch != -1 && dyad.branch != 1) {
      fail("dyad " + who + ": branch must be -1 or +1");
    }
    if (dyad.link_ids.empty() || dyad.link_ids.size() > 2) {
      fail("dyad " + who + ": needs one or two link ids");
    }
    for (int id : dyad.link_ids) {
      if (id < 5 || id > 8) {
        fail("dyad " + who + ": link ids must be in 5..8");
      } else if (!seen_link_ids.insert(id).second) {
        fail("dyad " + who + ": link id " + std::to_string(id) +
             " already carried by another dyad");
      }
    }
    if (!dyad.label.empty() && !seen_labels.insert(dyad.label).second) {
      fail("dyad " + who + ": duplicate label");
    }
  }

  if (!diagnostics.empty()) return diagnostics;

  // Parent references must resolve in construction order.
  try {
    PoseSolver solver(config);

    // Assembly sweep: the loop discriminant and every dyad must stay
    // solvable over a full crank revolution.
    const double step = 1e-3;
    const double two_pi = 2.0 * std::numbers::pi;
    bool loop_failed = false;
    bool dyad_failed = false;
    bool branch_failed = false;
    std::string detail;
    for (double q1 = 0.0; q1 < two_pi; q1 += step) {
      try {
        solver.pose(q1);
      } catch (const SolveError& err) {
        std::ostringstream msg;
        msg << " at crank angle " << q1 << " rad (" << err.what() << ")";
        switch (err.code()) {
          case SolveError::Code::unassemblable:
          case SolveError::Code::degenerate:
            loop_failed = true;
            break;
          case SolveError::Code::bad_input:
            branch_failed = true;
            break;
          default:
            dyad_failed = true;
            break;
        }
        if (detail.empty()) detail = msg.str();
      }
      if (loop_failed && dyad_failed && branch_failed) break;
    }
    if (loop_failed) fail("crank cannot complete revolution" + detail);
    if (branch_failed) fail("branch signs do not close the loop" + detail);
    if (dyad_failed) fail("follower dyad unreachable" + detail);
  } catch (const SolveError& err) {
    fail(err.what());
  }

  return diagnostics;
}

}  // namespace legsim
