#include <cmath>
#include <numeric>

#include "doctest.h"
#include "magtb/acceptance.hpp"
#include "magtb/artifacts.hpp"
#include "magtb/topology.hpp"

using namespace magtb;

namespace {

// Independent TKNN oracle: brute-force search of r = s q + t p, |t| <= q/2.
int tknn_search(int p, int q, int r) {
  for (int t = -q / 2; t <= q / 2; ++t)
    for (int s = -q; s <= q; ++s)
      if (s * q + t * p == r) return t;
  return 999;
}

struct Harper {
  PointSet ps;
  SpectralData spec;
  SpectralProjection P;
  Vec2 c;
};

Harper harper(int n, double flux, double mu) {
  Harper h{build_square_lattice(1.0, n, n), {}, {}, {}};
  h.spec = eig_hermitian(build_tb(h.ps, flux / 2.0));
  h.P = fermi_projection(h.spec, mu);
  h.c = plaquette_center(h.ps);
  return h;
}

}  // namespace

TEST_SUITE("topology") {
  TEST_CASE("TKNN Diophantine solutions") {
    for (int q : {3, 4, 5, 7})
      for (int p = 1; p < q; ++p) {
        if (std::gcd(p, q) != 1) continue;
        for (int r = 1; r < q; ++r) {
          if (q % 2 == 0 && 2 * r == q) continue;
          CHECK(tknn_gap_chern(p, q, r) == tknn_search(p, q, r));
        }
      }
    CHECK(tknn_gap_chern(1, 3, 1) == 1);
    CHECK(tknn_gap_chern(1, 3, 2) == -1);
    CHECK(tknn_gap_chern(2, 5, 1) == -2);
  }

  TEST_CASE("switch functions") {
    const SwitchFunction h{1, 0.5};
    CHECK(h(Vec2(0.6, -3.0)) == 1.0);
    CHECK(h(Vec2(0.4, 9.0)) == 0.0);
    const SwitchFunction s{2, 0.0, SwitchFunction::Kind::Smooth, 2.0};
    CHECK(s(Vec2(0.0, 0.0)) == doctest::Approx(0.5));
    CHECK(s(Vec2(0.0, 60.0)) == doctest::Approx(1.0));
    CHECK(s(Vec2(0.0, -60.0)) == doctest::Approx(0.0));
  }

  TEST_CASE("plaquette centre lies off the lattice") {
    const PointSet ps = build_square_lattice(1.0, 8, 8);
    const Vec2 c = plaquette_center(ps);
    for (const Vec2& p : ps.points) CHECK((p - c).norm() > 0.5);
  }

  TEST_CASE("flux insertion unitary has unit phases") {
    const PointSet ps = build_square_lattice(1.0, 6, 6);
    const FluxInsertionUnitary U = flux_insertion_unitary(ps, plaquette_center(ps));
    for (Eigen::Index k = 0; k < U.phases.size(); ++k) CHECK(std::abs(std::abs(U.phases(k)) - 1.0) < 1e-14);
  }

  TEST_CASE("Kubo and flux insertion on a 24 x 24 Harper sample") {
    const Harper h = harper(24, 2.0 * kPi / 3.0, harper_gap(1, 3, 0).center());
    const IndexReport k = kubo_chern(h.P, h.ps, {1, h.c.x()}, {2, h.c.y()});
    CHECK(k.nearest_integer == 1);
    CHECK(std::abs(k.value - 1.0) < 0.1);
    CHECK(std::abs(k.imaginary_part) < 1e-9);
    const IndexReport f = flux_insertion_index(h.P, h.ps, flux_insertion_unitary(h.ps, h.c));
    CHECK_FALSE(f.indeterminate);
    CHECK(std::abs(f.nearest_integer) == 1);
    CHECK(f.nearest_integer == -k.nearest_integer);
  }

  TEST_CASE("trivial insulator has zero Chern number") {
    const Harper h = harper(16, 2.0 * kPi / 3.0, -10.0 + 1e-3);
    CHECK(h.P.rank == 0);
    const Harper full = harper(16, 2.0 * kPi / 3.0, 10.0);
    const IndexReport k = kubo_chern(full.P, full.ps, {1, full.c.x()}, {2, full.c.y()});
    CHECK(std::abs(k.value) < 1e-10);
  }

  TEST_CASE("edge estimators on a small strip") {
    const Interval gap = harper_gap(1, 3, 0);
    const Interval delta{gap.center() - 0.25 * gap.width(), gap.center() + 0.25 * gap.width()};
    const PointSet ps = build_square_lattice(1.0, 36, 18);
    const TBHamiltonian H = build_tb(ps, kPi / 3.0);
    const SpectralData spec = eig_hermitian(H);
    const SmoothStep g(delta);
    const SwitchFunction L1{1, plaquette_center(ps).x()};
    const IndexReport e = edge_conductance(H, ps, spec, g, L1, gap);
    CHECK(e.nearest_integer == 1);
    CHECK(std::abs(e.value - 1.0) < 0.15);
    const EdgeUnitaryReport u = edge_index_unitary(ps, spec, g, L1, gap);
    CHECK(u.unitarity_defect < 1e-10);
    CHECK(u.index.nearest_integer == e.nearest_integer);
    const DecayProfile d = edge_projection_defect(ps, spec, g, Vec2(0.0, 1.0));
    CHECK(d.kappa > 0.0);
    CHECK(d.spectrum_min >= -0.25 - 1e-12);
    CHECK(d.spectrum_max <= 1e-12);
    const CsvTable t = parse_csv(decay_profile_csv(d));
    CHECK(t.header == std::vector<std::string>{"depth", "max_defect"});
    CHECK_THROWS_AS(require_window_in_gap(SmoothStep({gap.lo - 0.5, gap.hi}), gap), InvalidWindowError);
  }

  TEST_CASE("index report rounding") {
    const IndexReport r = make_index_report(-0.97, "test");
    CHECK(r.nearest_integer == -1);
    CHECK(r.deviation == doctest::Approx(0.03));
    CHECK(to_json(r).at("method") == "test");
  }
}
