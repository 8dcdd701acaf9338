#pragma once

#include <vector>

namespace magtb {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [lo, hi].
QuadratureRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

// Composite rule: `panels` equal sub-intervals with `per_panel` nodes each.
QuadratureRule composite_gauss_legendre(int panels, int per_panel, double lo, double hi);

}  // namespace magtb
