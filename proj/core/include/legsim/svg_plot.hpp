#pragma once

#include <string>
#include <string_view>

#include "legsim/simulate.hpp"

namespace legsim {

enum class PlotKind {
  angles,      // q1, q2, q3 and the desired q over time
  velocities,  // w1, w2, w3 over time
  torque,      // tau over time
  trace,       // knee and ankle x-y curves
};

// Maps "angles"/"velocities"/"torque"/"trace"; throws SolveError::bad_input
// on anything else.
PlotKind parse_plot_kind(std::string_view name);

// Renders a self-contained SVG document: one polyline per series, labelled
// axes with tick values, a title naming the kind, axes auto-scaled to the
// data with a 5% margin. Deterministic output for identical logs.
std::string render_plot(const SimLog& log, PlotKind kind);

// Atomic file variant; returns bytes written.
std::size_t emit_plot(const SimLog& log, PlotKind kind, const std::string& path);

}  // namespace legsim
