#include "legsim/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "legsim/errors.hpp"

namespace legsim {

namespace {

// Closure residual of the vector loop l1 e(q1) + c e(q2) - (l4,0) - l3 e(q3).
Vec2 loop_residual(const MechanismConfig& config, double q1, double q2, double q3) {
  return config.l1 * unit_vec(q1) + config.coupler_length() * unit_vec(q2) -
         Vec2{config.l4, 0.0} - config.l3 * unit_vec(q3);
}

// One branch of X sin(q) + Y cos(q) + Z = 0 via the half-angle substitution:
// q = 2 atan((X + s sqrt(X^2+Y^2-Z^2)) / (Y - Z)). Evaluated in atan2 form;
// when numerator and denominator vanish together (q -> pi), the conjugate
// expression of the same root takes over.
double solve_half_angle(double X, double Y, double Z, int sign, const char* angle) {
  double disc = X * X + Y * Y - Z * Z;
  const double scale2 = std::max({X * X, Y * Y, Z * Z, 1e-300});
  if (disc < 0.0) {
    if (disc > -1e-12 * scale2) {
      disc = 0.0;  // grazing assembly: treat as exactly tangent
    } else {
      std::ostringstream msg;
      msg << "negative discriminant for " << angle
          << ": mechanism cannot assemble at this crank angle";
      throw SolveError(SolveError::Code::unassemblable, msg.str());
    }
  }
  const double root = std::sqrt(disc);
  const double tiny = 1e-12 * std::sqrt(scale2);

  const double num = X + sign * root;
  const double den = Y - Z;
  if (std::abs(num) > tiny || std::abs(den) > tiny) {
    return wrap_angle(2.0 * std::atan2(num, den));
  }
  const double num2 = -(Y + Z);
  const double den2 = X - sign * root;
  if (std::abs(num2) > tiny || std::abs(den2) > tiny) {
    return wrap_angle(2.0 * std::atan2(num2, den2));
  }
  std::ostringstream msg;
  msg << "degenerate half-angle form for " << angle;
  throw SolveError(SolveError::Code::degenerate, msg.str());
}

void require_lengths(const MechanismConfig& config) {
  if (!(config.l1 > 0.0) || !(config.l2 > 0.0) || !(config.l3 > 0.0) ||
      !(config.l4 > 0.0) || !(config.coupler_pin_fraction > 0.0)) {
    throw SolveError(SolveError::Code::bad_input,
                     "link lengths must be strictly positive");
  }
}

}  // namespace

LoopClosureTerms loop_closure_terms(const MechanismConfig& config, double q1) {
  const double l1 = config.l1;
  const double c = config.coupler_length();
  const double l3 = config.l3;
  const double l4 = config.l4;
  const double s1 = std::sin(q1);
  const double c1 = std::cos(q1);

  LoopClosureTerms t;
  t.A = 2.0 * l1 * c * s1;
  t.B = 2.0 * c * (l1 * c1 - l4);
  t.C = l1 * l1 + c * c + l4 * l4 - l3 * l3 - 2.0 * l1 * l4 * c1;
  t.D = 2.0 * l1 * l3 * s1;
  t.E = 2.0 * l3 * (l1 * c1 - l4);
  t.F = c * c - l1 * l1 - l3 * l3 - l4 * l4 + 2.0 * l1 * l4 * c1;
  return t;
}

PositionSolution solve_position(const MechanismConfig& config, double q1) {
  require_lengths(config);
  const LoopClosureTerms terms = loop_closure_terms(config, q1);
  const double q2 = solve_half_angle(terms.A, terms.B, terms.C,
                                     config.branch_sign_q2, "q2");
  const double q3 = solve_half_angle(terms.D, terms.E, terms.F,
                                     config.branch_sign_q3, "q3");

  const double scale = std::max(
      1.0, config.l1 + config.coupler_length() + config.l3 + config.l4);
  if (loop_residual(config, q1, q2, q3).norm() > 1e-9 * scale) {
    throw SolveError(SolveError::Code::bad_input,
                     "branch signs select assembly branches that do not close "
                     "the loop together");
  }
  return {q2, q3, terms};
}

RateSolution solve_velocity(const MechanismConfig& config, double q1, double q2,
                            double q3, double w1) {
  require_lengths(config);
  const double sing = std::sin(q2 - q3);
  if (std::abs(sing) < 1e-9) {
    throw SolveError(SolveError::Code::singular,
                     "kinematic singularity: coupler and rocker collinear");
  }
  const double l1 = config.l1;
  const double c = config.coupler_length();
  const double l3 = config.l3;
  RateSolution out;
  out.w2 = -w1 * l1 * std::sin(q1 - q3) / (c * sing);
  out.w3 = w1 * l1 * std::sin(q1 - q2) / (l3 * std::sin(q3 - q2));
  return out;
}

AccelSolution solve_acceleration(const MechanismConfig& config, double q1,
                                 double q2, double q3, double w1, double w2,
                                 double w3, double a1) {
  require_lengths(config);
  const double sing = std::sin(q2 - q3);
  if (std::abs(sing) < 1e-9) {
    throw SolveError(SolveError::Code::singular,
                     "kinematic singularity: coupler and rocker collinear");
  }
  const double l1 = config.l1;
  const double c = config.coupler_length();
  const double l3 = config.l3;
  const double c12 = std::cos(q1 - q2);
  const double c13 = std::cos(q1 - q3);
  const double c23 = std::cos(q2 - q3);

  // First-order velocity ratios w2/w1 and w3/w1.
  const double g21 = -l1 * std::sin(q1 - q3) / (c * sing);
  const double g31 = l1 * std::sin(q1 - q2) / (l3 * std::sin(q3 - q2));

  AccelSolution out;
  out.a2 = (-w1 * w1 * l1 * c13 - w2 * w2 * c * c23 + w3 * w3 * l3) / (c * sing) +
           a1 * g21;
  out.a3 = (w1 * w1 * l1 * c12 - w3 * w3 * l3 * c23 + w2 * w2 * c) /
               (l3 * std::sin(q3 - q2)) +
           a1 * g31;
  return out;
}

Vec2 solve_dyad(const Vec2& p_a, const Vec2& p_b, double len_a, double len_b,
                int branch) {
  if (!(len_a > 0.0) || !(len_b > 0.0)) {
    throw SolveError(SolveError::Code::bad_input,
                     "dyad lengths must be strictly positive");
  }
  const Vec2 ab = p_b - p_a;
  const double d2 = ab.squared_norm();
  const double d = std::sqrt(d2);
  if (d < 1e-15) {
    throw SolveError(SolveError::Code::dyad_degenerate,
                     "dyad parents coincide: apex undefined");
  }
  if (d > len_a + len_b + 1e-12) {
    throw SolveError(SolveError::Code::dyad_disjoint,
                     "dyad circles disjoint: parents too far apart");
  }
  if (d < std::abs(len_a - len_b) - 1e-12) {
    throw SolveError(SolveError::Code::dyad_contained,
                     "dyad circles contained: parents too close");
  }
  const double along = (d2 + len_a * len_a - len_b * len_b) / (2.0 * d);
  const double h2 = len_a * len_a - along * along;
  const double h = std::sqrt(std::max(h2, 0.0));
  const Vec2 u = ab / d;
  const Vec2 perp{-u.y, u.x};
  return p_a + u * along + perp * (branch >= 0 ? h : -h);
}

const Vec2* LinkageState::find_point(std::string_view label) const {
  for (const auto& [name, p] : points) {
    if (name == label) return &p;
  }
  return nullptr;
}

namespace {

constexpr int kSlotO = 0;
constexpr int kSlotP = 1;
constexpr int kSlotQ = 2;
constexpr int kSlotR = 3;
constexpr int kSlotBarEnd = 4;

}  // namespace

PoseSolver::PoseSolver(MechanismConfig config) : config_(std::move(config)) {
  require_lengths(config_);
  labels_ = {"crank_pivot", "crank_tip", "rocker_pivot", "rocker_tip",
             "coupler_end"};

  auto resolve_ref = [this](const std::string& token,
                            std::size_t defined_slots) -> Ref {
    if (token == "O" || token == "crank_pivot") return {kSlotO, 0.0};
    if (token == "P" || token == "crank_tip") return {kSlotP, 0.0};
    if (token == "Q" || token == "rocker_pivot") return {kSlotQ, 0.0};
    if (token == "R" || token == "rocker_tip") return {kSlotR, 0.0};
    if (token == "coupler_end") return {kSlotBarEnd, 0.0};
    if (token.rfind("cf:", 0) == 0) {
      char* end = nullptr;
      const double frac = std::strtod(token.c_str() + 3, &end);
      if (end == token.c_str() + 3 || *end != '\0' || !std::isfinite(frac)) {
        throw SolveError(SolveError::Code::unknown_point,
                         "bad coupler fraction reference '" + token + "'");
      }
      return {-1, frac};
    }
    for (std::size_t s = kSlotBarEnd + 1; s < defined_slots; ++s) {
      if (labels_[s] == token) return {static_cast<int>(s), 0.0};
    }
    throw SolveError(SolveError::Code::unknown_point,
                     "point reference '" + token +
                         "' is not resolvable in construction order");
  };

  auto mass_of = [this](int id) {
    auto it = config_.masses.find(id);
    return it == config_.masses.end() ? 0.0 : it->second;
  };
  auto add_body = [this](int id, double mass, double length, Ref from, Ref to) {
    body_defs_.push_back({id, mass, length, mass * length * length / 12.0});
    body_programs_.push_back({from, to});
  };

  // Four-bar rods. Link 2 is the full coupler bar, crank tip to bar end.
  add_body(1, mass_of(1), config_.l1, {kSlotO, 0.0}, {kSlotP, 0.0});
  add_body(2, mass_of(2), config_.l2, {kSlotP, 0.0}, {kSlotBarEnd, 0.0});
  add_body(3, mass_of(3), config_.l3, {kSlotQ, 0.0}, {kSlotR, 0.0});

  for (const auto& dyad : config_.extra_links) {
    DyadProgram prog;
    prog.a = resolve_ref(dyad.parent_a, labels_.size());
    prog.b = resolve_ref(dyad.parent_b, labels_.size());
    if (!(dyad.len_a > 0.0) || !(dyad.len_b > 0.0)) {
      throw SolveError(SolveError::Code::bad_input,
                       "dyad '" + dyad.label + "': non-positive length");
    }
    prog.len_a = dyad.len_a;
    prog.len_b = dyad.len_b;
    prog.branch = dyad.branch;
    prog.apex_slot = labels_.size();
    prog.label = dyad.label.empty()
                     ? "apex_" + std::to_string(dyads_.size())
                     : dyad.label;
    labels_.push_back(prog.label);
    dyads_.push_back(prog);

    const Ref apex{static_cast<int>(prog.apex_slot), 0.0};
    if (!dyad.link_ids.empty()) {
      add_body(dyad.link_ids[0], mass_of(dyad.link_ids[0]), dyad.len_a, prog.a,
               apex);
    }
    if (dyad.link_ids.size() > 1) {
      add_body(dyad.link_ids[1], mass_of(dyad.link_ids[1]), dyad.len_b, prog.b,
               apex);
    }
  }
}

Vec2 PoseSolver::resolve(const Ref& r, const std::vector<Vec2>& pts) const {
  if (r.slot >= 0) return pts[static_cast<std::size_t>(r.slot)];
  return pts[kSlotP] + (pts[kSlotR] - pts[kSlotP]) * r.frac;
}

PoseSolver::Pose PoseSolver::pose(double q1) const {
  const PositionSolution sol = solve_position(config_, q1);

  Pose out;
  out.q2 = sol.q2;
  out.q3 = sol.q3;
  out.points.resize(labels_.size());
  out.points[kSlotO] = {0.0, 0.0};
  out.points[kSlotP] = config_.l1 * unit_vec(q1);
  out.points[kSlotQ] = {config_.l4, 0.0};
  out.points[kSlotR] = out.points[kSlotQ] + config_.l3 * unit_vec(sol.q3);
  out.points[kSlotBarEnd] =
      out.points[kSlotP] +
      (out.points[kSlotR] - out.points[kSlotP]) / config_.coupler_pin_fraction;

  for (const auto& dyad : dyads_) {
    try {
      out.points[dyad.apex_slot] =
          solve_dyad(resolve(dyad.a, out.points), resolve(dyad.b, out.points),
                     dyad.len_a, dyad.len_b, dyad.branch);
    } catch (const SolveError& err) {
      throw SolveError(err.code(), "dyad '" + dyad.label + "': " + err.what());
    }
  }
  return out;
}

std::optional<std::size_t> PoseSolver::point_index(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

void PoseSolver::body_states(const Pose& pose, std::vector<BodyState>& out) const {
  out.resize(body_programs_.size());
  for (std::size_t i = 0; i < body_programs_.size(); ++i) {
    const Vec2 from = resolve(body_programs_[i].from, pose.points);
    const Vec2 to = resolve(body_programs_[i].to, pose.points);
    out[i].com = (from + to) * 0.5;
    out[i].theta = std::atan2(to.y - from.y, to.x - from.x);
  }
}

LinkageState full_pose(const PoseSolver& solver, double q1, double w1, double a1) {
  const PoseSolver::Pose pose = solver.pose(q1);

  LinkageState state;
  state.q1 = q1;
  state.q2 = pose.q2;
  state.q3 = pose.q3;
  state.w1 = w1;
  state.a1 = a1;
  if (w1 != 0.0 || a1 != 0.0) {
    try {
      const RateSolution rates =
          solve_velocity(solver.config(), q1, pose.q2, pose.q3, w1);
      state.w2 = rates.w2;
      state.w3 = rates.w3;
      const AccelSolution acc = solve_acceleration(
          solver.config(), q1, pose.q2, pose.q3, w1, rates.w2, rates.w3, a1);
      state.a2 = acc.a2;
      state.a3 = acc.a3;
    } catch (const SolveError& err) {
      throw SolveError(err.code(),
                       std::string("rate analysis failed: ") + err.what());
    }
  }

  const auto& labels = solver.point_labels();
  state.points.reserve(labels.size() + solver.body_defs().size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    state.points.emplace_back(labels[i], pose.points[i]);
  }
  std::vector<PoseSolver::BodyState> bodies;
  solver.body_states(pose, bodies);
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    state.points.emplace_back("com_" + std::to_string(solver.body_defs()[i].link_id),
                              bodies[i].com);
  }
  return state;
}

LinkageState full_pose(const MechanismConfig& config, double q1, double w1,
                       double a1) {
  return full_pose(PoseSolver(config), q1, w1, a1);
}

std::vector<TraceSample> trace_point(const MechanismConfig& config,
                                     std::string_view label,
                                     std::span<const double> q1_samples) {
  const PoseSolver solver(config);

  // Joints and apexes resolve to a slot; com_<id> labels to a body index.
  std::optional<std::size_t> slot = solver.point_index(label);
  std::optional<std::size_t> body_index;
  if (!slot && label.rfind("com_", 0) == 0) {
    const auto& defs = solver.body_defs();
    for (std::size_t i = 0; i < defs.size(); ++i) {
      if ("com_" + std::to_string(defs[i].link_id) == label) {
        body_index = i;
        break;
      }
    }
  }
  if (!slot && !body_index) {
    throw SolveError(SolveError::Code::unknown_point,
                     "unknown trace point '" + std::string(label) + "'");
  }

  std::vector<TraceSample> out;
  out.reserve(q1_samples.size());
  std::vector<PoseSolver::BodyState> bodies;
  for (double q1 : q1_samples) {
    TraceSample sample;
    sample.q1 = q1;
    try {
      const PoseSolver::Pose pose = solver.pose(q1);
      if (slot) {
        sample.point = pose.points[*slot];
      } else {
        solver.body_states(pose, bodies);
        sample.point = bodies[*body_index].com;
      }
    } catch (const SolveError& err) {
      sample.gap_reason = err.what();
    }
    out.push_back(std::move(sample));
  }
  return out;
}

}  // namespace legsim
