#include <cmath>
#include <numeric>

#include "doctest.h"
#include "magtb/artifacts.hpp"
#include "magtb/spectral.hpp"

using namespace magtb;

TEST_SUITE("spectral") {
  TEST_CASE("Farey fluxes") {
    const auto f = farey_fluxes(5);
    const std::vector<std::pair<int, int>> expected{{0, 1}, {1, 5}, {1, 4}, {1, 3}, {2, 5}, {1, 2},
                                                    {3, 5}, {2, 3}, {3, 4}, {4, 5}};
    CHECK(f == expected);
    for (auto [p, q] : farey_fluxes(12)) CHECK(std::gcd(p, q) == 1);
  }

  TEST_CASE("butterfly row count equals the sum of eigenvalue counts") {
    const auto rows = butterfly(20, 20, 12);
    CHECK(rows.size() == 400 * farey_fluxes(12).size());
    CHECK(rows.size() >= 1000);
    for (const auto& r : rows) CHECK(std::abs(r.energy) <= 4.0 + 1e-12);
    const CsvTable t = parse_csv(butterfly_csv(rows, {{"command", "butterfly"}}));
    CHECK(t.header == std::vector<std::string>{"flux", "energy"});
    CHECK(t.rows.size() == rows.size());
    CHECK(t.meta.at("command") == "butterfly");
  }

  TEST_CASE("Harper bands at flux 2 pi / 3") {
    const auto bands = harper_bloch_bands(1, 3);
    REQUIRE(bands.size() == 3);
    CHECK(bands.front().first == doctest::Approx(-1.0 - std::sqrt(3.0)).epsilon(1e-6));
    CHECK(bands.back().second == doctest::Approx(1.0 + std::sqrt(3.0)).epsilon(1e-6));
    const Interval g = harper_gap(1, 3, 0);
    CHECK(g.lo < g.hi);
    CHECK(g.hi < 0.0);
    CHECK_THROWS_AS(harper_gap(1, 3, 2), ArgumentError);
  }

  TEST_CASE("projections are idempotent with the right rank") {
    const PointSet ps = build_square_lattice(1.0, 6, 6);
    const SpectralData s = eig_hermitian(build_tb(ps, 0.4));
    CHECK(s.max_residual < 1e-10);
    const SpectralProjection P = fermi_projection(s, 0.05);
    const int expected = static_cast<int>((s.eigenvalues.array() < 0.05).count());
    CHECK(P.rank == expected);
    CHECK(P.idempotency_defect < 1e-12);
    CHECK((P.projector * P.projector - P.projector).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(spectral_projection(s, {1.0, 0.0}), InvalidWindowError);
    CHECK_THROWS_AS(spectral_projection(s, {s.eigenvalues(3), 10.0}), GapError);
  }

  TEST_CASE("smooth steps") {
    const SmoothStep f({-1.0, 1.0});
    const SmoothStep b({-1.0, 1.0}, SmoothStep::Kind::Bump);
    CHECK(f(-1.5) == 1.0);
    CHECK(f(1.5) == 0.0);
    CHECK(b(-1.0) == 1.0);
    CHECK(b(1.0) == 0.0);
    CHECK(f(0.0) == doctest::Approx(0.5));
    for (double e = -0.9; e < 1.0; e += 0.3) {
      CHECK(f(e) > 0.0);
      CHECK(f(e) < 1.0);
      const double fd = (f(e + 1e-6) - f(e - 1e-6)) / 2e-6;
      CHECK(f.derivative(e) == doctest::Approx(fd).epsilon(1e-5));
    }
    const SmoothStep s = SmoothStep::sharp(0.2);
    CHECK(s(0.1) == 1.0);
    CHECK(s(0.3) == 0.0);
    CHECK_THROWS_AS(SmoothStep({1.0, 1.0}), InvalidWindowError);
  }

  TEST_CASE("sharp step calculus reproduces the Fermi projection") {
    const SpectralData s = eig_hermitian(build_tb(build_square_lattice(1.0, 5, 5), 0.9));
    const MatrixXc g = smooth_function_of(s, SmoothStep::sharp(0.01));
    CHECK((g - fermi_projection(s, 0.01).projector).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(unitarity_defect(step_unitary(s, SmoothStep({-0.3, 0.3}))) < 1e-12);
  }

  TEST_CASE("dense size guard") {
    CHECK_THROWS_AS(eig_hermitian(MatrixXc::Zero(3, 4)), ArgumentError);
    MatrixXc N = MatrixXc::Zero(2, 2);
    N(0, 1) = 1.0;
    CHECK_THROWS_AS(eig_hermitian(N), ArgumentError);
  }
}
