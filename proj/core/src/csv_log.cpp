#include "legsim/csv_log.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include "legsim/errors.hpp"

namespace legsim {

namespace {

// 12 significant digits, locale-independent.
void append_number(std::string& out, double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v,
                                 std::chars_format::general, 12);
  out.append(buf, ptr);
}

std::string render(const SimLog& log) {
  std::string out;
  out.reserve(64 * (log.rows.size() + 1));
  out += kCsvHeader;
  out += '\n';
  for (const SimRecord& r : log.rows) {
    const double fields[] = {r.t,  r.q1, r.q2,     r.q3,     r.w1,      r.w2,
                             r.w3, r.a1, r.a2,     r.a3,     r.qd,      r.qd_dot,
                             r.qd_ddot, r.e, r.tau, r.xB, r.yB, r.xA, r.yA};
    bool first = true;
    for (double f : fields) {
      if (!first) out += ',';
      first = false;
      append_number(out, f);
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::size_t emit_csv(const SimLog& log, std::ostream& out) {
  if (log.rows.empty()) {
    throw SolveError(SolveError::Code::bad_input, "refusing to emit an empty log");
  }
  const std::string text = render(log);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw SolveError(SolveError::Code::bad_input, "log destination unwritable");
  }
  return text.size();
}

std::size_t emit_csv(const SimLog& log, const std::string& path) {
  if (log.rows.empty()) {
    throw SolveError(SolveError::Code::bad_input, "refusing to emit an empty log");
  }
  const std::string text = render(log);
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
