#include <cmath>

#include "doctest.h"
#include "magtb/artifacts.hpp"
#include "magtb/atomic.hpp"

using namespace magtb;

TEST_SUITE("atomic") {
  TEST_CASE("Landau oracle: flat potential gives e0 = lambda and a Gaussian") {
    AtomicWell w;
    w.v_min = 0.0;
    for (double lambda : {4.0, 10.0}) {
      const RadialGroundState gs = solve_radial_ground_state(w, lambda, 4000, 6.0);
      CHECK(std::abs(gs.e0_raw - lambda) / lambda < 1e-6);
      const double c = std::sqrt(lambda / (2.0 * kPi));
      for (double r : {0.0, 0.5, 1.0, 2.0}) CHECK(gs.value(r) == doctest::Approx(c * std::exp(-lambda * r * r / 4.0)).epsilon(1e-5));
      CHECK(gs.norm_integral() == doctest::Approx(1.0).epsilon(1e-8));
      // One of the m = +-1 sectors also holds a lowest-Landau-level state.
      CHECK(std::abs(gs.gap) < 1e-6 * lambda);
    }
  }

  TEST_CASE("quartic well: bound state below zero with positive gap") {
    const AtomicWell w;
    const RadialGroundState gs = solve_radial_ground_state_auto(w, 8.0, 6.0);
    CHECK(gs.e0_raw < 0.0);
    CHECK(gs.e0_raw > w.v_min * 64.0);
    CHECK(gs.gap > 0.0);
    CHECK(gs.norm_integral() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(gs.refinement_disagreement < 1e-6);
    CHECK(gaussian_decay_certificate(gs).passes);
  }

  TEST_CASE("m = 0 is the ground-state sector") {
    const AtomicWell w;
    const SectorEnergies s = sector_energies(w, 8.0, -2, 2);
    CHECK(s.m0_minimal);
    CHECK(check_sector_minimum(w, 8.0, -2, 2));
  }

  TEST_CASE("well profiles") {
    AtomicWell q;
    CHECK(q.v0(0.0) == doctest::Approx(q.v_min));
    CHECK(q.v0(q.r0) == doctest::Approx(0.0));
    CHECK(q.v0(2.0 * q.r0) == 0.0);
    AtomicWell hat;
    hat.profile = WellProfile::MexicanHat;
    CHECK(hat.v0(0.0) == doctest::Approx(0.0));
    CHECK(hat.v0(std::sqrt(0.5)) == doctest::Approx(hat.v_min));
    CHECK(well_profile_from_string(to_string(WellProfile::MexicanHat)) == WellProfile::MexicanHat);
    CHECK_THROWS_AS(well_profile_from_string("square"), ArgumentError);
  }

  TEST_CASE("preconditions") {
    AtomicWell bad;
    bad.v_min = 1.0;
    CHECK_THROWS_AS(bad.validate(), ArgumentError);
    bad.v_min = -1.0;
    bad.r0 = 0.0;
    CHECK_THROWS_AS(bad.validate(), ArgumentError);
    const AtomicWell w;
    CHECK_THROWS_AS(solve_radial_ground_state(w, -1.0, 1000, 6.0), PreconditionError);
    CHECK_THROWS_AS(solve_radial_ground_state(w, 8.0, 8, 6.0), ResolutionError);
    CHECK_THROWS_AS(solve_radial_ground_state(w, 8.0, 4000, 1.5), PreconditionError);
  }

  TEST_CASE("radial CSV carries the stored profile") {
    const RadialGroundState gs = solve_radial_ground_state_auto(AtomicWell{}, 6.0, 5.0);
    const CsvTable t = parse_csv(radial_csv(gs));
    CHECK(t.header == std::vector<std::string>{"r", "phi0"});
    CHECK(t.rows.size() == gs.grid.size());
    CHECK(radial_header(gs).contains("e0_raw"));
  }
}
