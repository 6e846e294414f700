#include "legsim/config_file.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>

#include "legsim/errors.hpp"
#include "legsim/version.hpp"

namespace legsim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view v, int line) {
  double value = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError(line, "expected a number, got '" + std::string(v) + "'");
  }
  return value;
}

long parse_int(std::string_view v, int line) {
  long value = 0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if (!v.empty() && v.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError(line, "expected an integer, got '" + std::string(v) + "'");
  }
  return value;
}

int parse_branch(std::string_view v, int line) {
  const long b = parse_int(v, line);
  if (b != -1 && b != 1) {
    throw ConfigError(line, "branch must be -1 or +1");
  }
  return static_cast<int>(b);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

DyadSpec parse_dyad(std::string_view value, int line) {
  const auto fields = split(value, ',');
  if (fields.size() != 7) {
    throw ConfigError(line,
                      "dyad needs 7 fields: parent_a,parent_b,len_a,len_b,"
                      "branch,link_ids,label");
  }
  DyadSpec dyad;
  dyad.parent_a = std::string(trim(fields[0]));
  dyad.parent_b = std::string(trim(fields[1]));
  if (dyad.parent_a.empty() || dyad.parent_b.empty()) {
    throw ConfigError(line, "dyad parents must not be empty");
  }
  dyad.len_a = parse_double(trim(fields[2]), line);
  dyad.len_b = parse_double(trim(fields[3]), line);
  if (!(dyad.len_a > 0.0) || !(dyad.len_b > 0.0)) {
    throw ConfigError(line, "dyad lengths must be strictly positive");
  }
  dyad.branch = parse_branch(trim(fields[4]), line);
  for (std::string_view id : split(trim(fields[5]), '+')) {
    const long v = parse_int(trim(id), line);
    if (v < 5 || v > 8) {
      throw ConfigError(line, "dyad link ids must be in 5..8");
    }
    dyad.link_ids.push_back(static_cast<int>(v));
  }
  if (dyad.link_ids.empty() || dyad.link_ids.size() > 2) {
    throw ConfigError(line, "dyad needs one or two link ids");
  }
  dyad.label = std::string(trim(fields[6]));
  return dyad;
}

// Shortest representation that reparses to the identical double.
std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

const char* const kScalarKeys[] = {
    "l1", "l2",       "l3",     "l4", "coupler_pin", "gravity", "branch.q2",
    "branch.q3", "dt", "duration", "cycles", "kp", "kv", "q0", "qf", "T",
    "c3", "c4", "c5",
};

}  // namespace

std::uint64_t config_digest(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig run;
  run.mechanism = default_config();
  run.gains = {100.0, 20.0};
  run.settings = SimSettings{};

  std::set<std::string> seen;
  bool dyads_replaced = false;

  std::optional<double> q0, qf, T, c3, c4, c5;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    std::string_view line = raw;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, "expected 'key = value'");
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "empty key");

    if (key == "dyad") {
      if (!dyads_replaced) {
        run.mechanism.extra_links.clear();
        dyads_replaced = true;
      }
      run.mechanism.extra_links.push_back(parse_dyad(value, line_no));
      continue;
    }
    if (!seen.insert(key).second) {
      throw ConfigError(line_no, "duplicate key '" + key + "'");
    }

    auto positive = [&](double v, const char* what) {
      if (!(v > 0.0)) {
        throw ConfigError(line_no, std::string(what) + " must be strictly positive");
      }
      return v;
    };

    if (key == "l1") run.mechanism.l1 = positive(parse_double(value, line_no), "l1");
    else if (key == "l2") run.mechanism.l2 = positive(parse_double(value, line_no), "l2");
    else if (key == "l3") run.mechanism.l3 = positive(parse_double(value, line_no), "l3");
    else if (key == "l4") run.mechanism.l4 = positive(parse_double(value, line_no), "l4");
    else if (key == "coupler_pin") {
      const double f = parse_double(value, line_no);
      if (!(f > 0.0) || f > 1.0) throw ConfigError(line_no, "coupler_pin must be in (0, 1]");
      run.mechanism.coupler_pin_fraction = f;
    } else if (key == "gravity") {
      run.mechanism.gravity = parse_double(value, line_no);
    } else if (key == "branch.q2") {
      run.mechanism.branch_sign_q2 = parse_branch(value, line_no);
    } else if (key == "branch.q3") {
      run.mechanism.branch_sign_q3 = parse_branch(value, line_no);
    } else if (key.rfind("mass.", 0) == 0) {
      const long id = parse_int(key.substr(5), line_no);
      if (id == 4) throw ConfigError(line_no, "link 4 is static and massless");
      if (id < 1 || id > 8) throw ConfigError(line_no, "mass ids must be in 1..8");
      const double m = parse_double(value, line_no);
      if (m < 0.0) throw ConfigError(line_no, "masses must be non-negative");
      run.mechanism.masses[static_cast<int>(id)] = m;
    } else if (key == "dt") {
      run.settings.dt = positive(parse_double(value, line_no), "dt");
    } else if (key == "duration") {
      run.settings.duration = positive(parse_double(value, line_no), "duration");
    } else if (key == "cycles") {
      const long n = parse_int(value, line_no);
      if (n < 1) throw ConfigError(line_no, "cycles must be >= 1");
      run.settings.cycles = static_cast<int>(n);
    } else if (key == "kp") {
      run.gains.kp = positive(parse_double(value, line_no), "kp");
    } else if (key == "kv") {
      run.gains.kv = positive(parse_double(value, line_no), "kv");
    } else if (key == "q0") {
      q0 = parse_double(value, line_no);
    } else if (key == "qf") {
      qf = parse_double(value, line_no);
    } else if (key == "T") {
      T = positive(parse_double(value, line_no), "T");
    } else if (key == "c3") {
      c3 = parse_double(value, line_no);
    } else if (key == "c4") {
      c4 = parse_double(value, line_no);
    } else if (key == "c5") {
      c5 = parse_double(value, line_no);
    } else {
      throw ConfigError(line_no, "unknown key '" + key + "'");
    }
  }

  // Resolve the trajectory. Explicit polynomial coefficients (written by
  // manifests) take precedence so a rerun reproduces the run bit for bit.
  const TrajectorySpec dflt = default_trajectory();
  if (c3 || c4 || c5) {
    if (!(c3 && c4 && c5)) {
      throw ConfigError(line_no, "c3, c4, c5 must be given together");
    }
    run.trajectory = {q0.value_or(dflt.q0), *c3, *c4, *c5, T.value_or(dflt.T)};
  } else if (q0 || qf || T) {
    run.trajectory = fit_quintic(q0.value_or(dflt.q0), qf.value_or(dflt.qf()),
                                 T.value_or(dflt.T));
  } else {
    run.trajectory = dflt;
  }

  if (!seen.count("duration")) {
    run.settings.duration = run.settings.cycles * run.trajectory.T;
  }

  for (const char* key : kScalarKeys) {
    if (!seen.count(key)) run.defaults_applied.push_back(key);
  }
  for (int id : {1, 2, 3, 5, 6, 7, 8}) {
    const std::string key = "mass." + std::to_string(id);
    if (!seen.count(key)) run.defaults_applied.push_back(key);
  }
  if (!dyads_replaced) run.defaults_applied.push_back("dyad");

  return run;
}

std::string render_manifest(const RunConfig& run, std::string_view input_digest_hex) {
  std::ostringstream out;
  out << "# legsim " << kVersion << " run manifest\n";
  out << "# input_digest = " << input_digest_hex << "\n";
  out << "# defaults_applied =";
  if (run.defaults_applied.empty()) {
    out << " none";
  } else {
    for (std::size_t i = 0; i < run.defaults_applied.size(); ++i) {
      out << (i ? ", " : " ") << run.defaults_applied[i];
    }
  }
  out << "\n";

  const MechanismConfig& m = run.mechanism;
  out << "l1 = " << fmt(m.l1) << "\n";
  out << "l2 = " << fmt(m.l2) << "\n";
  out << "l3 = " << fmt(m.l3) << "\n";
  out << "l4 = " << fmt(m.l4) << "\n";
  out << "coupler_pin = " << fmt(m.coupler_pin_fraction) << "\n";
  out << "gravity = " << fmt(m.gravity) << "\n";
  out << "branch.q2 = " << m.branch_sign_q2 << "\n";
  out << "branch.q3 = " << m.branch_sign_q3 << "\n";
  for (const auto& [id, mass] : m.masses) {
    out << "mass." << id << " = " << fmt(mass) << "\n";
  }
  for (const auto& dyad : m.extra_links) {
    out << "dyad = " << dyad.parent_a << "," << dyad.parent_b << ","
        << fmt(dyad.len_a) << "," << fmt(dyad.len_b) << "," << dyad.branch << ",";
    for (std::size_t i = 0; i < dyad.link_ids.size(); ++i) {
      out << (i ? "+" : "") << dyad.link_ids[i];
    }
    out << "," << dyad.label << "\n";
  }

  out << "dt = " << fmt(run.settings.dt) << "\n";
  out << "duration = " << fmt(run.settings.duration) << "\n";
  out << "cycles = " << run.settings.cycles << "\n";
  out << "kp = " << fmt(run.gains.kp) << "\n";
  out << "kv = " << fmt(run.gains.kv) << "\n";
  out << "q0 = " << fmt(run.trajectory.q0) << "\n";
  out << "T = " << fmt(run.trajectory.T) << "\n";
  out << "c3 = " << fmt(run.trajectory.c3) << "\n";
  out << "c4 = " << fmt(run.trajectory.c4) << "\n";
  out << "c5 = " << fmt(run.trajectory.c5) << "\n";
  out << "# qf = " << fmt(run.trajectory.qf()) << "\n";
  return out.str();
}

}  // namespace legsim
