#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "magtb/artifacts.hpp"
#include "magtb/linalg.hpp"
#include "magtb/spectral.hpp"
#include "magtb/tbmodel.hpp"

using namespace magtb;

TEST_SUITE("tbmodel") {
  TEST_CASE("zero field: open grid spectrum is a sum of path-graph spectra") {
    const int n = 10;
    const TBHamiltonian H = build_tb(build_square_lattice(1.0, n, n), 0.0);
    std::vector<double> oracle;
    for (int k = 1; k <= n; ++k)
      for (int l = 1; l <= n; ++l) oracle.push_back(2.0 * std::cos(k * kPi / (n + 1)) + 2.0 * std::cos(l * kPi / (n + 1)));
    std::sort(oracle.begin(), oracle.end());
    const SpectralData s = eig_hermitian(H, -1, false);
    REQUIRE(s.size() == n * n);
    for (int k = 0; k < n * n; ++k) CHECK(s.eigenvalues(k) == doctest::Approx(oracle[k]).epsilon(1e-12));
  }

  TEST_CASE("exact Hermiticity and stored lower triangle") {
    const TBHamiltonian H = build_tb(build_square_lattice(1.3, 6, 5), 0.41);
    CHECK(linalg::hermiticity_defect(H.dense()) == 0.0);
    for (int k = 0; k < H.lower.outerSize(); ++k)
      for (SparseC::InnerIterator it(H.lower, k); it; ++it) CHECK(it.row() > it.col());
    CHECK(H.bonds.size() == 6 * 4 + 5 * 5);
  }

  TEST_CASE("entries follow the Peierls phase convention") {
    const double beta = 0.3;
    const PointSet ps = build_square_lattice(2.0, 3, 3);
    const TBHamiltonian H = build_tb(ps, beta);
    for (auto [n, m] : H.bonds) {
      const cplx expected = std::exp(kI * beta * wedge(ps.points[n], ps.points[m]));
      CHECK(std::abs(H.entry(m, n) - expected) < 1e-15);
      CHECK(std::abs(magnetic_phase(ps.points[n], ps.points[m], beta) - expected) < 1e-15);
    }
  }

  TEST_CASE("plaquette flux is 2 beta a^2 and gauge invariant") {
    const double a = 0.9, beta = 1.1;
    const PointSet ps = build_square_lattice(a, 4, 4);
    const TBHamiltonian H = build_tb(ps, beta);
    const cplx expected = std::exp(kI * 2.0 * beta * a * a);
    CHECK(FluxParameter{beta, a}.plaquette_flux() == doctest::Approx(2.0 * beta * a * a));
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i)
        CHECK(std::abs(loop_phase(H, {j * 4 + i, j * 4 + i + 1, (j + 1) * 4 + i + 1, (j + 1) * 4 + i}) - expected) < 1e-13);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    Eigen::VectorXd chi(ps.size());
    for (Eigen::Index k = 0; k < chi.size(); ++k) chi(k) = u(rng);
    const MatrixXc G = gauge_transform(H.dense(), chi);
    const Eigen::VectorXd e1 = eig_hermitian(H.dense(), -1, false).eigenvalues;
    const Eigen::VectorXd e2 = eig_hermitian(G, -1, false).eigenvalues;
    CHECK((e1 - e2).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("admissible lambda sequence") {
    CHECK(admissible_lambda(0.5, 2.0, 1) == doctest::Approx(1.0 + kPi));
    const double beta = (2.0 * kPi / 3.0) / (2.0 * 9.0);
    for (int r : {1, 2, 5}) {
      const double lam = admissible_lambda(beta, 3.0, r);
      const Vec2 n(3.0, 6.0), m(-3.0, 9.0);
      CHECK(std::abs(std::exp(kI * (lam / 2.0) * wedge(n, m)) - std::exp(kI * beta * wedge(n, m))) < 1e-10);
    }
    CHECK_THROWS_AS(admissible_lambda(0.1, 1.0, 0), ArgumentError);
  }

  TEST_CASE("honeycomb Hamiltonian is bipartite") {
    const PointSet ps = build_honeycomb(1.0, 4, 4);
    const TBHamiltonian H = build_honeycomb_tb(ps, 0.2);
    const Eigen::VectorXd e = eig_hermitian(H, -1, false).eigenvalues;
    const int N = static_cast<int>(e.size());
    for (int k = 0; k < N; ++k) CHECK(e(k) == doctest::Approx(-e(N - 1 - k)).epsilon(1e-10));
    CHECK_THROWS_AS(build_honeycomb_tb(build_square_lattice(1.0, 3, 3), 0.2), StructureError);
  }

  TEST_CASE("random hopping is seeded through the displacement") {
    const PointSet ps = build_square_lattice(2.0, 4, 4);
    const PointSet d1 = random_displacement(ps, 16.0, DisplacementSeed::draw(9, ps.size()));
    const PointSet d2 = random_displacement(ps, 16.0, DisplacementSeed::draw(9, ps.size()));
    const TBHamiltonian H1 = build_random_hopping(d1, 0.2, 1.0);
    const TBHamiltonian H2 = build_random_hopping(d2, 0.2, 1.0);
    CHECK((H1.dense() - H2.dense()).norm() == 0.0);
    CHECK(H1.has_seed);
    CHECK(linalg::hermiticity_defect(H1.dense()) == 0.0);
    CHECK_THROWS_AS(build_random_hopping(ps, 0.2, 1.0), ArgumentError);
  }

  TEST_CASE("degenerate graph") {
    CHECK_THROWS_AS(build_tb(PointSet::from_points({Vec2(0, 0)}, "one"), 0.1), DegenerateGraphError);
  }

  TEST_CASE("COO export round trip") {
    const TBHamiltonian H = build_tb(build_square_lattice(1.0, 3, 3), 0.7);
    const CsvTable t = parse_csv(coo_csv(H));
    CHECK(t.header == std::vector<std::string>{"row", "col", "re", "im"});
    MatrixXc back = MatrixXc::Zero(H.size(), H.size());
    const auto r = t.numeric("row"), c = t.numeric("col"), re = t.numeric("re"), im = t.numeric("im");
    for (std::size_t k = 0; k < r.size(); ++k) back(int(r[k]), int(c[k])) = cplx(re[k], im[k]);
    CHECK((back - H.dense()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(tb_metadata(H).at("beta").get<double>() == doctest::Approx(0.7));
  }
}
