#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "legsim/control.hpp"
#include "legsim/mechanism.hpp"
#include "legsim/simulate.hpp"
#include "legsim/trajectory.hpp"

namespace legsim {

// Everything a run needs, fully resolved. `defaults_applied` lists the keys
// that were not present in the input and took their documented defaults.
struct RunConfig {
  MechanismConfig mechanism;
  SimSettings settings;
  GainSet gains;
  TrajectorySpec trajectory;
  std::vector<std::string> defaults_applied;
};

// Parses the line-oriented `key = value` run configuration. Grammar:
//   l1 l2 l3 l4 coupler_pin gravity branch.q2 branch.q3 mass.<id>
//   dyad = parent_a,parent_b,len_a,len_b,branch,link_ids,label   (repeatable,
//          link_ids one id or two joined by '+'; replaces the default dyads)
//   dt duration cycles kp kv q0 qf T
// Comments start with '#'. Unknown or duplicated scalar keys are errors.
// Unset keys take the built-in machine defaults. Throws ConfigError with the
// offending line number.
RunConfig parse_run_config(std::string_view text);

// FNV-1a 64-bit digest of the raw input, hex-encoded; recorded in manifests.
std::uint64_t config_digest(std::string_view text);

// Renders the fully resolved run as a manifest that is itself a valid run
// configuration: parsing it back reproduces the run bit for bit. Tool
// version, input digest and applied defaults ride along as comments.
std::string render_manifest(const RunConfig& run, std::string_view input_digest_hex);

}  // namespace legsim
