#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "legsim/errors.hpp"
#include "legsim/kinematics.hpp"
#include "legsim/mechanism.hpp"
#include "test_support.hpp"

using namespace legsim;
using legsim::test::Rng;

namespace {

bool has_diagnostic(const std::vector<std::string>& diags, const char* needle) {
  return std::any_of(diags.begin(), diags.end(), [needle](const std::string& d) {
    return d.find(needle) != std::string::npos;
  });
}

}  // namespace

TEST_CASE("from_leg_length reproduces the reference link set exactly") {
  const MechanismConfig cfg = from_leg_length(0.90);
  CHECK(cfg.l1 == 0.18);
  CHECK(cfg.l2 == 0.90);
  CHECK(cfg.l4 == 0.36);
  CHECK(cfg.l3 == 0.45);
  CHECK(cfg.coupler_pin_fraction == 0.5);
  CHECK(cfg.coupler_length() == 0.45);
}

TEST_CASE("from_leg_length scales linearly") {
  const MechanismConfig cfg = from_leg_length(1.80);
  CHECK(cfg.l1 == 0.36);
  CHECK(cfg.l2 == 1.80);
  CHECK(cfg.l4 == 0.72);
  CHECK(cfg.l3 == 0.90);
}

TEST_CASE("from_leg_length rejects degenerate leg lengths") {
  CHECK_THROWS_AS(from_leg_length(0.0), SolveError);
  CHECK_THROWS_AS(from_leg_length(-1.0), SolveError);
}

TEST_CASE("link ratio 1:5:2:2.5 holds to machine precision for any leg") {
  Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    const double leg = rng.uniform(0.05, 4.0);
    const MechanismConfig cfg = from_leg_length(leg);
    CHECK(cfg.l4 == 2.0 * cfg.l1);  // exact by construction
    CHECK(test::rel_err(cfg.l2, 5.0 * cfg.l1) < 1e-15);
    CHECK(test::rel_err(cfg.l3, 2.5 * cfg.l1) < 1e-15);
  }
}

TEST_CASE("default masses: rods at 1 kg/m plus the two 1 kg payloads") {
  const auto masses = default_masses(0.90);
  CHECK(masses.at(1) == doctest::Approx(0.18).epsilon(1e-12));
  CHECK(masses.at(2) == doctest::Approx(0.90).epsilon(1e-12));
  CHECK(masses.at(3) == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(masses.at(5) == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(masses.at(6) == 1.0);
  CHECK(masses.at(7) == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(masses.at(8) == 1.0);
  CHECK(masses.count(4) == 0);
}

TEST_CASE("default config validates and assembles over a full revolution") {
  const auto diags = validate(default_config());
  for (const auto& d : diags) MESSAGE(d);
  CHECK(diags.empty());
}

TEST_CASE("non-Grashof link set is reported as unable to revolve") {
  MechanismConfig cfg = default_config();
  cfg.l1 = 1.0;
  cfg.l2 = 0.1;
  cfg.l3 = 0.1;
  cfg.l4 = 0.1;
  cfg.coupler_pin_fraction = 1.0;
  cfg.extra_links.clear();
  const auto diags = validate(cfg);
  CHECK(has_diagnostic(diags, "crank cannot complete revolution"));
}

TEST_CASE("zero and negative lengths are diagnosed") {
  MechanismConfig cfg = default_config();
  cfg.l2 = 0.0;
  CHECK(has_diagnostic(validate(cfg), "non-positive length l2"));
  cfg.l2 = -0.5;
  CHECK(has_diagnostic(validate(cfg), "non-positive length l2"));
}

TEST_CASE("mass map invariants") {
  MechanismConfig cfg = default_config();

  SUBCASE("missing id") {
    cfg.masses.erase(7);
    CHECK(has_diagnostic(validate(cfg), "mass ids"));
  }
  SUBCASE("link 4 must stay massless") {
    cfg.masses[4] = 0.1;
    CHECK(has_diagnostic(validate(cfg), "mass ids"));
  }
  SUBCASE("negative mass") {
    cfg.masses[5] = -0.1;
    CHECK(has_diagnostic(validate(cfg), "non-negative"));
  }
  SUBCASE("all-zero masses") {
    for (auto& [id, m] : cfg.masses) m = 0.0;
    CHECK(has_diagnostic(validate(cfg), "strictly positive"));
  }
}

TEST_CASE("branch signs and coupler pin are range-checked") {
  MechanismConfig cfg = default_config();
  cfg.branch_sign_q2 = 0;
  CHECK(has_diagnostic(validate(cfg), "branch.q2"));
  cfg = default_config();
  cfg.coupler_pin_fraction = 1.5;
  CHECK(has_diagnostic(validate(cfg), "coupler_pin"));
}

TEST_CASE("dyad specs are checked structurally") {
  MechanismConfig cfg = default_config();

  SUBCASE("unresolvable parent") {
    cfg.extra_links[0].parent_a = "nowhere";
    CHECK(has_diagnostic(validate(cfg), "nowhere"));
  }
  SUBCASE("forward reference") {
    // support_S may not reference a dyad constructed after it
    cfg.extra_links[0].parent_a = "ankle_A";
    CHECK(has_diagnostic(validate(cfg), "ankle_A"));
  }
  SUBCASE("no link ids") {
    cfg.extra_links[1].link_ids.clear();
    CHECK(has_diagnostic(validate(cfg), "one or two link ids"));
  }
  SUBCASE("link id out of range") {
    cfg.extra_links[1].link_ids = {3};
    CHECK(has_diagnostic(validate(cfg), "5..8"));
  }
  SUBCASE("duplicate link id across dyads") {
    cfg.extra_links[1].link_ids = {5};
    CHECK(has_diagnostic(validate(cfg), "already carried"));
  }
  SUBCASE("duplicate label") {
    cfg.extra_links[1].label = "support_S";
    CHECK(has_diagnostic(validate(cfg), "duplicate label"));
  }
}

TEST_CASE("a validated config position-solves at 1000 random crank angles") {
  const MechanismConfig cfg = default_config();
  REQUIRE(validate(cfg).empty());
  const PoseSolver solver(cfg);
  Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    const double q1 = rng.uniform(-10.0, 10.0);
    CHECK_NOTHROW(solver.pose(q1));
  }
}

TEST_CASE("scaled machines validate too") {
  Rng rng(5150);
  for (int i = 0; i < 5; ++i) {
    const double leg = rng.uniform(0.3, 2.5);
    CHECK(validate(from_leg_length(leg)).empty());
  }
}
