#include <cmath>
#include <numeric>

#include "doctest.h"
#include "magtb/quadrature.hpp"

using namespace magtb;

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Legendre is exact through degree 2n-1") {
    for (int n : {1, 2, 5, 12, 40}) {
      const QuadratureRule q = gauss_legendre(n, -1.0, 2.0);
      for (int d = 0; d <= 2 * n - 1; ++d) {
        double s = 0.0;
        for (std::size_t k = 0; k < q.nodes.size(); ++k) s += q.weights[k] * std::pow(q.nodes[k], d);
        const double exact = (std::pow(2.0, d + 1) - std::pow(-1.0, d + 1)) / (d + 1);
        CHECK(s == doctest::Approx(exact).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("composite rule covers the interval") {
    const QuadratureRule q = composite_gauss_legendre(7, 6, 0.0, 3.0);
    CHECK(q.nodes.size() == 42);
    CHECK(std::accumulate(q.weights.begin(), q.weights.end(), 0.0) == doctest::Approx(3.0).epsilon(1e-14));
    double s = 0.0;
    for (std::size_t k = 0; k < q.nodes.size(); ++k) s += q.weights[k] * std::exp(-q.nodes[k]);
    CHECK(s == doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-14));
    for (double x : q.nodes) {
      CHECK(x > 0.0);
      CHECK(x < 3.0);
    }
  }
}
