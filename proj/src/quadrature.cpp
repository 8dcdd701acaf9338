#include "magtb/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "magtb/common.hpp"

namespace magtb {

namespace {

const QuadratureRule& reference_rule(int n) {
  static std::map<int, QuadratureRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pn = n == 0 ? 1.0 : p1;
      const double pm = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return cache.emplace(n, std::move(r)).first->second;
}

}  // namespace

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw ArgumentError("Gauss-Legendre rule needs at least one node");
  if (n == 1) return {{0.5 * (lo + hi)}, {hi - lo}};
  const QuadratureRule& ref = reference_rule(n);
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * ref.nodes[i];
    r.weights[i] = half * ref.weights[i];
  }
  return r;
}

QuadratureRule composite_gauss_legendre(int panels, int per_panel, double lo, double hi) {
  if (panels < 1) throw ArgumentError("composite rule needs at least one panel");
  QuadratureRule r;
  r.nodes.reserve(static_cast<std::size_t>(panels) * per_panel);
  r.weights.reserve(r.nodes.capacity());
  const double w = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const QuadratureRule q = gauss_legendre(per_panel, lo + p * w, lo + (p + 1) * w);
    r.nodes.insert(r.nodes.end(), q.nodes.begin(), q.nodes.end());
    r.weights.insert(r.weights.end(), q.weights.begin(), q.weights.end());
  }
  return r;
}

}  // namespace magtb
