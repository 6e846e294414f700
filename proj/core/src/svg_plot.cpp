#include "legsim/svg_plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "legsim/errors.hpp"

namespace legsim {

namespace {

constexpr double kWidth = 860;
constexpr double kHeight = 540;
constexpr double kLeft = 70, kRight = 24, kTop = 42, kBottom = 48;

struct Series {
  std::string name;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

std::string num(double v, int precision = 6) {
  char buf[40];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
  return std::string(buf, ptr);
}

std::string px(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, ptr);
}

struct Axis {
  double lo = 0, hi = 1;

  void expand(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

// Tick spacing of the form {1, 2, 5} * 10^k giving roughly `target` steps.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag * (1.0 + 1e-12)) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

PlotKind parse_plot_kind(std::string_view name) {
  if (name == "angles") return PlotKind::angles;
  if (name == "velocities") return PlotKind::velocities;
  if (name == "torque") return PlotKind::torque;
  if (name == "trace") return PlotKind::trace;
  throw SolveError(SolveError::Code::bad_input,
                   "unknown plot kind '" + std::string(name) + "'");
}

std::string render_plot(const SimLog& log, PlotKind kind) {
  if (log.rows.empty()) {
    throw SolveError(SolveError::Code::bad_input, "refusing to plot an empty log");
  }

  const char* title = "";
  const char* x_label = "t [s]";
  const char* y_label = "";
  std::vector<Series> series;
  auto column = [&log](double SimRecord::* field) {
    std::vector<double> v;
    v.reserve(log.rows.size());
    for (const SimRecord& r : log.rows) v.push_back(r.*field);
    return v;
  };
  const std::vector<double> t = column(&SimRecord::t);

  switch (kind) {
    case PlotKind::angles:
      title = "angles";
      y_label = "angle [rad]";
      series = {{"q1", "#1f77b4", t, column(&SimRecord::q1)},
                {"q2", "#d62728", t, column(&SimRecord::q2)},
                {"q3", "#2ca02c", t, column(&SimRecord::q3)},
                {"qd", "#9467bd", t, column(&SimRecord::qd)}};
      break;
    case PlotKind::velocities:
      title = "velocities";
      y_label = "angular velocity [rad/s]";
      series = {{"w1", "#1f77b4", t, column(&SimRecord::w1)},
                {"w2", "#d62728", t, column(&SimRecord::w2)},
                {"w3", "#2ca02c", t, column(&SimRecord::w3)}};
      break;
    case PlotKind::torque:
      title = "torque";
      y_label = "torque [N m]";
      series = {{"tau", "#1f77b4", t, column(&SimRecord::tau)}};
      break;
    case PlotKind::trace:
      title = "trace";
      x_label = "x [m]";
      y_label = "y [m]";
      series = {{"knee_B", "#d62728", column(&SimRecord::xB), column(&SimRecord::yB)},
                {"ankle_A", "#1f77b4", column(&SimRecord::xA), column(&SimRecord::yA)}};
      break;
  }

  Axis xa, ya;
  bool x_seeded = false, y_seeded = false;
  for (const Series& s : series) {
    for (double v : s.x) {
      if (!std::isfinite(v)) continue;
      if (!x_seeded) { xa.lo = xa.hi = v; x_seeded = true; }
      xa.expand(v);
    }
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      if (!y_seeded) { ya.lo = ya.hi = v; y_seeded = true; }
      ya.expand(v);
    }
  }
  if (!x_seeded) { xa.lo = 0; xa.hi = 1; }
  if (!y_seeded) { ya.lo = 0; ya.hi = 1; }

  // 5% margin; degenerate ranges widen to a unit band.
  auto pad = [](Axis& a) {
    double span = a.hi - a.lo;
    if (span <= 1e-12) {
      a.lo -= 1.0;
      a.hi += 1.0;
    } else {
      a.lo -= 0.05 * span;
      a.hi += 0.05 * span;
    }
  };
  pad(xa);
  pad(ya);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double v) { return kLeft + (v - xa.lo) / (xa.hi - xa.lo) * plot_w; };
  auto sy = [&](double v) { return kTop + (1.0 - (v - ya.lo) / (ya.hi - ya.lo)) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"26\" font-family=\"sans-serif\" "
         "font-size=\"18\" text-anchor=\"middle\">" << title << "</text>\n";

  // Frame.
  svg << "<rect x=\"" << px(kLeft) << "\" y=\"" << px(kTop) << "\" width=\""
      << px(plot_w) << "\" height=\"" << px(plot_h)
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Ticks with value labels.
  const double xstep = nice_step(xa.hi - xa.lo, 6);
  for (double v = std::ceil(xa.lo / xstep) * xstep; v <= xa.hi + 1e-12 * xstep;
       v += xstep) {
    const double X = sx(v);
    svg << "<line x1=\"" << px(X) << "\" y1=\"" << px(kTop + plot_h) << "\" x2=\""
        << px(X) << "\" y2=\"" << px(kTop + plot_h + 6) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px(X) << "\" y=\"" << px(kTop + plot_h + 20)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
        << num(std::abs(v) < 1e-12 * xstep ? 0.0 : v) << "</text>\n";
  }
  const double ystep = nice_step(ya.hi - ya.lo, 6);
  for (double v = std::ceil(ya.lo / ystep) * ystep; v <= ya.hi + 1e-12 * ystep;
       v += ystep) {
    const double Y = sy(v);
    svg << "<line x1=\"" << px(kLeft - 6) << "\" y1=\"" << px(Y) << "\" x2=\""
        << px(kLeft) << "\" y2=\"" << px(Y) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px(kLeft - 9) << "\" y=\"" << px(Y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
        << num(std::abs(v) < 1e-12 * ystep ? 0.0 : v) << "</text>\n";
  }

  // Axis labels.
  svg << "<text x=\"" << px(kLeft + plot_w / 2) << "\" y=\"" << px(kHeight - 10)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
      << x_label << "</text>\n";
  svg << "<text x=\"16\" y=\"" << px(kTop + plot_h / 2)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16 " << px(kTop + plot_h / 2) << ")\">"
      << y_label << "</text>\n";

  // Series polylines and legend.
  double legend_y = kTop + 16;
  for (const Series& s : series) {
    svg << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      svg << px(sx(s.x[i])) << "," << px(sy(s.y[i])) << " ";
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << px(kLeft + plot_w - 8) << "\" y=\"" << px(legend_y)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\" "
           "fill=\"" << s.color << "\">" << s.name << "</text>\n";
    legend_y += 16;
  }

  svg << "</svg>\n";
  return svg.str();
}

std::size_t emit_plot(const SimLog& log, PlotKind kind, const std::string& path) {
  const std::string text = render_plot(log, kind);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      throw SolveError(SolveError::Code::bad_input,
                       "cannot open '" + tmp + "' for writing");
    }
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) {
      throw SolveError(SolveError::Code::bad_input, "write failed for '" + tmp + "'");
    }
  }
  std::filesystem::rename(tmp, path);
  return text.size();
}

}  // namespace legsim
