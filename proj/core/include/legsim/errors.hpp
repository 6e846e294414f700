#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace legsim {

// Thrown by the kinematics/dynamics solvers. The code tells tests and the
// CLI apart which contract was violated without parsing the message.
class SolveError : public std::runtime_error {
 public:
  enum class Code {
    bad_input,          // precondition on arguments (lengths, gains, settings)
    unassemblable,      // loop-closure discriminant negative at this crank angle
    degenerate,         // both closed-form branches of the half-angle map collapse
    singular,           // sin(q2 - q3) ~ 0: follower rates undefined
    dyad_disjoint,      // circles too far apart
    dyad_contained,     // one circle inside the other
    dyad_degenerate,    // coincident dyad parents
    unknown_point,      // point label not constructible/resolvable
    zero_inertia,       // forward dynamics with vanishing effective inertia
  };

  SolveError(Code code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}

  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

// Raised when a simulation cannot continue; carries the failing step.
class SimAbort : public std::runtime_error {
 public:
  SimAbort(std::size_t step, double t, const std::string& msg)
      : std::runtime_error(msg), step_(step), t_(t) {}

  std::size_t step() const noexcept { return step_; }
  double time() const noexcept { return t_; }

 private:
  std::size_t step_;
  double t_;
};

// Config-file syntax or value error with a 1-based line number.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace legsim
