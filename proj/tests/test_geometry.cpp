#include <cmath>
#include <set>

#include "doctest.h"
#include "magtb/artifacts.hpp"
#include "magtb/geometry.hpp"

using namespace magtb;

TEST_SUITE("geometry") {
  TEST_CASE("square lattice spacing and next-nearest distance") {
    const PointSet ps = build_square_lattice(1.7, 5, 4);
    CHECK(ps.size() == 20);
    CHECK(ps.a == doctest::Approx(1.7).epsilon(1e-14));
    CHECK(ps.b_nnn == doctest::Approx(1.7 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK((ps.points[1] - ps.points[0]).norm() == doctest::Approx(1.7));
    CHECK((ps.points[5] - ps.points[0]).norm() == doctest::Approx(1.7));
  }

  TEST_CASE("nearest-neighbour bond counts") {
    for (auto [nx, ny] : {std::pair{4, 4}, std::pair{7, 3}, std::pair{1, 6}}) {
      const NeighborGraph g = neighbor_graph(build_square_lattice(1.0, nx, ny));
      CHECK(g.pairs.size() == static_cast<std::size_t>(nx * (ny - 1) + ny * (nx - 1)));
      for (auto [i, j] : g.pairs) CHECK(i < j);
    }
    const PointSet hc = build_honeycomb(1.0, 4, 4);
    const NeighborGraph g = neighbor_graph(hc);
    std::vector<int> degree(hc.size(), 0);
    for (auto [i, j] : g.pairs) {
      ++degree[i];
      ++degree[j];
      CHECK(hc.sublattice[i] != hc.sublattice[j]);
    }
    CHECK(*std::max_element(degree.begin(), degree.end()) == 3);
    CHECK(hc.b_nnn == doctest::Approx(std::sqrt(3.0) * hc.a));
  }

  TEST_CASE("validation of admissible point sets") {
    const ValidationReport ok = validate_assumptions(build_square_lattice(1.0, 10, 10));
    CHECK(ok.passes);
    CHECK(ok.n_points == 100);
    CHECK(ok.b_gt_a);
    const ValidationReport dup =
        validate_assumptions(PointSet::from_points({Vec2(0, 0), Vec2(0, 0), Vec2(1, 0)}, "duplicate"));
    CHECK_FALSE(dup.distinct);
    CHECK_FALSE(dup.passes);
  }

  TEST_CASE("argument errors") {
    CHECK_THROWS_AS(build_square_lattice(0.0, 3, 3), ArgumentError);
    CHECK_THROWS_AS(build_square_lattice(1.0, 0, 3), ArgumentError);
    CHECK_THROWS_AS(truncate_half_plane(build_square_lattice(1.0, 3, 3), 1, 100.0), EmptySetError);
    CHECK_THROWS_AS(truncate_half_plane(build_square_lattice(1.0, 3, 3), 3, 0.0), ArgumentError);
    const PointSet ps = build_square_lattice(1.0, 3, 3);
    CHECK_THROWS_AS(random_displacement(ps, 3.0, DisplacementSeed::draw(1, ps.size())), PreconditionError);
  }

  TEST_CASE("truncation keeps one half-plane") {
    const PointSet ps = truncate_half_plane(build_square_lattice(1.0, 6, 6), 2, 2.5);
    for (const Vec2& p : ps.points) CHECK(p.y() >= 2.5);
  }

  TEST_CASE("random displacement is seeded and bounded") {
    const PointSet ps = build_square_lattice(2.0, 5, 5);
    const double lambda = 16.0;
    const DisplacementSeed s1 = DisplacementSeed::draw(42, ps.size());
    const DisplacementSeed s2 = DisplacementSeed::draw(42, ps.size());
    const DisplacementSeed s3 = DisplacementSeed::draw(43, ps.size());
    CHECK(s1.t_amplitudes == s2.t_amplitudes);
    CHECK(s1.angles == s2.angles);
    CHECK(s1.t_amplitudes != s3.t_amplitudes);
    const PointSet d = random_displacement(ps, lambda, s1);
    REQUIRE(d.disorder.has_value());
    double worst = 0.0;
    for (std::size_t k = 0; k < ps.size(); ++k) worst = std::max(worst, (d.points[k] - ps.points[k]).norm());
    CHECK(worst > 0.0);
    CHECK(worst <= ps.a / lambda + 1e-12);
    CHECK_FALSE(d.disorder->bonds.empty());
  }

  TEST_CASE("bond epsilon vanishes without displacement") {
    CHECK(bond_epsilon(Vec2(0, 0), Vec2(1, 0), 0.0, 0.3, 0.0, 1.1) == doctest::Approx(0.0));
  }

  TEST_CASE("Gaussian lattice sum is bounded by a constant") {
    const PointSet ps = build_square_lattice(1.0, 12, 12);
    const double s = gaussian_sum_sup(ps, 4.0, {Vec2(5.5, 5.5), Vec2(0.0, 0.0), Vec2(3.2, 7.9)});
    CHECK(s >= 1.0);
    CHECK(s < 2.0);
  }

  TEST_CASE("point set JSON round trip") {
    const PointSet ps = build_honeycomb(1.3, 3, 2);
    const PointSet back = pointset_from_json(nlohmann::json::parse(to_json(ps).dump()));
    REQUIRE(back.size() == ps.size());
    for (std::size_t k = 0; k < ps.size(); ++k) CHECK((back.points[k] - ps.points[k]).norm() == 0.0);
    CHECK(back.sublattice == ps.sublattice);
    CHECK(back.a == doctest::Approx(ps.a));
    CHECK_THROWS_AS(pointset_from_json(nlohmann::json{{"points", 3}}), ArgumentError);
  }

  TEST_CASE("bonds CSV lists every classified pair") {
    const PointSet ps = build_square_lattice(1.0, 3, 3);
    const NeighborGraph g = neighbor_graph(ps);
    const CsvTable t = parse_csv(bonds_csv(ps, g));
    CHECK(t.header == std::vector<std::string>{"i", "j", "distance", "class"});
    std::size_t nn = 0;
    for (const auto& row : t.rows) nn += row[3] == "nn";
    CHECK(nn == g.pairs.size());
    CHECK(t.rows.size() == g.pairs.size() + g.beyond.size());
  }
}
