#include <cmath>
#include <numeric>

#include "doctest.h"
#include "magtb/artifacts.hpp"
#include "magtb/continuum.hpp"

using namespace magtb;

namespace {

double max_abs(const SparseC& M) {
  double m = 0.0;
  for (int k = 0; k < M.outerSize(); ++k)
    for (SparseC::InnerIterator it(M, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

PointSet single() { return PointSet::from_points({Vec2(0.0, 0.0)}, "single well"); }

}  // namespace

TEST_SUITE("continuum") {
  TEST_CASE("grid geometry") {
    const AtomicWell w;
    const double lambda = 6.0;
    const double h = max_grid_step(single(), w, lambda);
    CHECK(h <= w.r0 / 20.0 + 1e-15);
    const ContinuumGrid g = make_grid(single(), w, lambda, h);
    CHECK(g.nx % 2 == 0);
    CHECK(g.ny % 2 == 0);
    CHECK(g.lx() / 2.0 >= w.r0 + 6.0 / std::sqrt(lambda));
    CHECK((g.node(g.nx / 2, g.ny / 2) - g.center).norm() == doctest::Approx(h * std::sqrt(0.5)));
    CHECK(g.index(3, 2) == 2 * g.nx + 3);
  }

  TEST_CASE("operator is Hermitian and carries the flux per cell") {
    const AtomicWell w;
    const double lambda = 5.0, h = 0.05;
    for (int order : {2, 4}) {
      const ContinuumHamiltonian C = build_continuum_hamiltonian(single(), w, lambda, make_grid(single(), w, lambda, h), 0.0, order);
      CHECK(max_abs(C.op - SparseC(C.op.adjoint())) <= 1e-14 * C.norm_bound);
      for (auto [i, j] : {std::pair{0, 0}, std::pair{C.grid.nx / 2, C.grid.ny / 3}, std::pair{C.grid.nx - 2, 5}})
        CHECK(std::abs(cell_link_product(C, i, j) - std::exp(-kI * lambda * h * h)) < 1e-12);
    }
  }

  TEST_CASE("preconditions") {
    const AtomicWell w;
    const ContinuumGrid g = make_grid(single(), w, 12.0, 0.04);
    CHECK_THROWS_AS(build_continuum_hamiltonian(single(), w, 12.0, g), PreconditionError);
    const ContinuumGrid coarse = make_grid(single(), w, 6.0, 0.2);
    CHECK_THROWS_AS(build_continuum_hamiltonian(single(), w, 6.0, coarse), ResolutionError);
    const ContinuumGrid tight = make_grid(single(), w, 6.0, 0.04, 1.5);
    CHECK_THROWS_AS(build_continuum_hamiltonian(single(), w, 6.0, tight), GeometryError);
    CHECK_THROWS_AS(build_continuum_hamiltonian(single(), w, 6.0, make_grid(single(), w, 6.0, 0.04), 0.0, 3), ArgumentError);
  }

  TEST_CASE("rotation sectors partition the grid") {
    const ContinuumGrid g = make_box_grid(Vec2(0.3, -0.2), 1.0, 1.0, 0.1);
    for (int order : {2, 4}) {
      const RotationSectors s = rotation_sectors(g, order);
      CHECK(s.reps.size() * order == static_cast<std::size_t>(g.size()));
      for (int k = 0; k < order; ++k) {
        VectorXc f = VectorXc::Random(static_cast<Eigen::Index>(s.reps.size()));
        f /= f.norm();
        const VectorXc v = lift_sector_vector(f, s, k);
        CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("single well agrees with the radial solver") {
    const AtomicWell w;
    const double lambda = 4.0;
    const RadialGroundState gs = solve_radial_ground_state_auto(w, lambda, 8.0);
    const double h = max_grid_step(single(), w, lambda);
    const ContinuumHamiltonian C = build_continuum_hamiltonian(single(), w, lambda, make_grid(single(), w, lambda, h));
    const EigenPairs ep = lowest_eigenpairs(C.op, 1, gs.e0_raw - 0.5 * gs.gap, C.norm_bound);
    CHECK(std::abs(ep.values(0) - gs.e0_raw) < 1e-4 * std::abs(gs.e0_raw));
    CHECK(ep.max_residual < 1e-6 * C.norm_bound);
  }

  TEST_CASE("Green identity recovers eigenvalue differences") {
    const AtomicWell w;
    const double lambda = 4.0, a = 2.6;
    const PointSet pair = PointSet::from_points({Vec2(-a / 2, 0.0), Vec2(a / 2, 0.0)}, "double well");
    const RadialGroundState gs = solve_radial_ground_state_auto(w, lambda, 8.0);
    const ContinuumHamiltonian C = build_continuum_hamiltonian(pair, w, lambda, make_grid(pair, w, lambda, max_grid_step(pair, w, lambda)), gs.e0_raw, 2);
    const EigenPairs ep = lowest_eigenpairs(C.op, 2, -0.5 * gs.gap, C.norm_bound);
    std::vector<char> D(C.grid.size(), 0);
    for (int j = 0; j < C.grid.ny; ++j)
      for (int i = 0; i < C.grid.nx / 2; ++i) D[C.grid.index(i, j)] = 1;
    const cplx diff = green_energy_difference(C.op, ep.vectors.col(0), ep.vectors.col(1), D);
    CHECK(std::abs(diff.real() - (ep.values(1) - ep.values(0))) < 1e-6 * std::abs(ep.values(1) - ep.values(0)) + 1e-10);
  }

  TEST_CASE("eigen CSV layout") {
    const std::string csv = continuum_eigen_csv({4.0}, {{0.0, 0.5}}, {-0.25});
    const CsvTable t = parse_csv(csv);
    CHECK(t.header == std::vector<std::string>{"lambda", "index", "E", "E_over_rho"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.numeric("E_over_rho")[1] == doctest::Approx(-2.0));
  }
}
