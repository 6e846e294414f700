#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "legsim/simulate.hpp"

namespace legsim {

// Fixed CSV schema for simulation logs; identical bytes across platforms.
inline constexpr const char* kCsvHeader =
    "t,q1,q2,q3,w1,w2,w3,a1,a2,a3,qd,qd_dot,qd_ddot,e,tau,xB,yB,xA,yA";

// Writes header plus one row per step, 12 significant digits, '\n' line
// endings, locale-independent. Returns the number of bytes written.
// Throws SolveError::bad_input on an empty log.
std::size_t emit_csv(const SimLog& log, std::ostream& out);

// Atomic file variant (write to a temp file, then rename).
std::size_t emit_csv(const SimLog& log, const std::string& path);

}  // namespace legsim
