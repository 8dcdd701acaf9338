#include <cmath>

#include "doctest.h"
#include "magtb/artifacts.hpp"
#include "magtb/linalg.hpp"
#include "magtb/overlaps.hpp"
#include "magtb/tbmodel.hpp"

using namespace magtb;

namespace {

// Lowest-Landau-level Gaussians sqrt(lambda/2pi) e^{-lambda r^2/4} under a
// magnetic translation by d overlap as e^{-lambda d^2/4}.
double landau_overlap(double lambda, double d) { return std::exp(-lambda * d * d / 4.0); }

RadialGroundState landau(double lambda) {
  AtomicWell w;
  w.v_min = 0.0;
  return solve_radial_ground_state_auto(w, lambda, 8.0);
}

}  // namespace

TEST_SUITE("overlaps") {
  TEST_CASE("pair overlap matches the Landau Gaussian oracle") {
    for (double lambda : {4.0, 8.0})
      for (double d : {0.5, 1.0, 2.0}) {
        double conv = -1.0;
        const double g = gram_pair_overlap(landau(lambda), d, &conv);
        CHECK(g == doctest::Approx(landau_overlap(lambda, d)).epsilon(1e-6));
        CHECK(conv >= 0.0);
      }
  }

  TEST_CASE("Gramian of a Landau patch") {
    const double lambda = 4.0, a = 1.5;
    const PointSet ps = build_square_lattice(a, 3, 3);
    const Gramian G = gramian(ps, landau(lambda));
    CHECK(linalg::hermiticity_defect(G.matrix) < 1e-14);
    for (int n = 0; n < G.matrix.rows(); ++n) CHECK(std::abs(G.matrix(n, n) - 1.0) < 1e-8);
    CHECK(std::abs(G.matrix(0, 1)) == doctest::Approx(landau_overlap(lambda, a)).epsilon(1e-6));
    CHECK(std::abs(G.matrix(0, 4)) == doctest::Approx(landau_overlap(lambda, a * std::sqrt(2.0))).epsilon(1e-6));
    CHECK(G.min_eigenvalue > 0.0);
    const OrthonormalizerM M = inverse_sqrt(G);
    CHECK(M.residual < 1e-10);
    CHECK(linalg::hermiticity_defect(M.matrix) < 1e-12);
  }

  TEST_CASE("Gramian approaches the identity as lambda grows") {
    const AtomicWell w;
    const PointSet ps = build_square_lattice(3.0, 3, 3);
    double prev = 1.0;
    for (double lambda : {6.0, 8.0, 10.0}) {
      const Gramian G = gramian(ps, solve_radial_ground_state_auto(w, lambda, 8.0));
      CHECK(G.deviation_norm < prev);
      prev = G.deviation_norm;
    }
  }

  TEST_CASE("hopping is real and negative") {
    const RadialGroundState gs = solve_radial_ground_state_auto(AtomicWell{}, 8.0, 4.0);
    const HoppingValue h = hopping(gs, Vec2(3.0, 0.0));
    CHECK(h.value.real() < 0.0);
    CHECK(std::abs(h.value.imag()) < 1e-8 * std::abs(h.value));
    CHECK(h.convergence < 1e-6);
    const HoppingValue rotated = hopping(gs, Vec2(0.0, 3.0));
    CHECK(std::abs(rotated.value - h.value) < 1e-8 * std::abs(h.value));
  }

  TEST_CASE("hopping ratio ordering along a bond") {
    const RadialGroundState gs = solve_radial_ground_state_auto(AtomicWell{}, 8.0, 6.0);
    const ReportEntry e = hopping_ratio_check(gs, Vec2(3.0, 0.0), 1.3);
    CHECK(e.value < 1.0);
    CHECK(e.passes);
  }

  TEST_CASE("reduced Hamiltonian reproduces the Peierls phases") {
    const double a = 3.0, lambda = 8.0;
    const PointSet ps = build_square_lattice(a, 3, 3);
    const RadialGroundState gs = solve_radial_ground_state_auto(AtomicWell{}, lambda, 10.0);
    const ReducedHamiltonian R = reduced_hamiltonian(ps, gs, false);
    CHECK(linalg::hermiticity_defect(R.matrix) < 1e-12);
    const double rho = R.matrix(1, 0).real() / magnetic_phase(ps.points[0], ps.points[1], lambda / 2.0).real();
    for (auto [n, m] : neighbor_graph(ps).pairs) {
      const cplx expected = rho * magnetic_phase(ps.points[n], ps.points[m], lambda / 2.0);
      CHECK(std::abs(R.matrix(m, n) - expected) < 1e-3 * std::abs(rho));
    }
  }

  TEST_CASE("complex matrix JSON round trip") {
    MatrixXc M(2, 3);
    M << cplx(1, 2), cplx(0, -1), cplx(3.5, 0), cplx(-1e-300, 4), cplx(0, 0), cplx(7, 7);
    CHECK((complex_matrix_from_json(nlohmann::json::parse(complex_matrix_json(M).dump())) - M).norm() == 0.0);
  }

  TEST_CASE("hopping bounds CSV exposes one row per lambda") {
    const AtomicWell w;
    std::vector<double> lambdas{6.0, 8.0, 10.0}, rho;
    for (double l : lambdas) rho.push_back(std::abs(hopping(solve_radial_ground_state_auto(w, l, 4.0), Vec2(3.0, 0.0)).value));
    const HoppingBoundsFit fit = fit_hopping_bounds(lambdas, rho, 3.0, w);
    CHECK(fit.r_squared > 0.99);
    const CsvTable t = parse_csv(hopping_bounds_csv(fit));
    CHECK(t.rows.size() == lambdas.size());
    CHECK(t.column("lambda") >= 0);
  }
}
