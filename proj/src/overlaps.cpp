#include "magtb/overlaps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "magtb/linalg.hpp"
#include "magtb/quadrature.hpp"

namespace magtb {

namespace {

constexpr double kConvergenceGate = 1e-6;
constexpr double kNegligible = 1e-100;
// Overlaps below this magnitude skip the relative convergence gate.
constexpr double kOverlapFloor = 1e-30;

double relative_change(cplx a, cplx b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

int nyquist_minimum(double lambda, double xi_norm, double r0) {
  // phase e^{-i(lambda/2) z^xi} sweeps lambda|xi|r0 radians across the disk
  return static_cast<int>(std::ceil(lambda * xi_norm * r0 / kPi));
}

struct PolarRule {
  std::vector<double> r, w_r, cos_t, sin_t, w_t;
};

PolarRule polar_rule(double r0, int n) {
  PolarRule p;
  const QuadratureRule rr = gauss_legendre(n, 0.0, r0);
  const QuadratureRule tt = gauss_legendre(n, 0.0, 2.0 * kPi);
  p.r = rr.nodes;
  p.w_r = rr.weights;
  for (int i = 0; i < n; ++i) {
    p.cos_t.push_back(std::cos(tt.nodes[i]));
    p.sin_t.push_back(std::sin(tt.nodes[i]));
    p.w_t.push_back(tt.weights[i]);
  }
  return p;
}

// Integral over the disk B_{r0}(c) of
// e^{-i(lambda/2) y^d} phi0(x - p) lambda^2 v0(x - c) phi0(x - q), y = x - p.
cplx disk_integral(const RadialGroundState& gs, const Vec2& c, const Vec2& p, const Vec2& q, const Vec2& d, int n) {
  const PolarRule rule = polar_rule(gs.well.r0, n);
  const double lam = gs.lambda;
  const Vec2 cp = c - p, cq = c - q;
  cplx sum{0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    const double r = rule.r[i];
    const double radial = lam * lam * gs.well.v0(r) * rule.w_r[i] * r;
    if (radial == 0.0) continue;
    cplx ring{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
      const Vec2 z(r * rule.cos_t[j], r * rule.sin_t[j]);
      const Vec2 y = cp + z;
      const double lp = gs.log_value(y.norm());
      const double lq = gs.log_value((cq + z).norm());
      const double mag = std::exp(lp + lq);
      if (mag == 0.0) continue;
      const double phase = -0.5 * lam * wedge(y, d);
      ring += rule.w_t[j] * mag * cplx(std::cos(phase), std::sin(phase));
    }
    sum += radial * ring;
  }
  return sum;
}

}  // namespace

int hopping_node_count(double lambda, double xi_norm, double r0) {
  return std::max(64, static_cast<int>(std::ceil(4.0 * lambda * xi_norm * r0)));
}

HoppingValue hopping(const RadialGroundState& gs, const Vec2& xi, int nodes, bool verify) {
  const double r0 = gs.well.r0;
  const double len = xi.norm();
  if (!(len > 2.0 * r0)) throw PreconditionError("hopping needs |xi| > 2 r0");
  if (gs.r_max < len + r0) throw PreconditionError("radial grid does not reach |xi| + r0");
  if (nodes <= 0) nodes = hopping_node_count(gs.lambda, len, r0);
  if (nodes < nyquist_minimum(gs.lambda, len, r0))
    throw ResolutionError("hopping quadrature under-resolves the magnetic phase");
  HoppingValue out;
  out.xi = xi;
  out.lambda = gs.lambda;
  out.quad_nodes = nodes;
  const Vec2 zero = Vec2::Zero();
  out.value = disk_integral(gs, zero, zero, xi, xi, nodes);
  if (verify) {
    const cplx fine = disk_integral(gs, zero, zero, xi, xi, 2 * nodes);
    out.convergence = relative_change(out.value, fine);
    if (out.convergence > kConvergenceGate)
      throw ResolutionError("hopping integral not converged under node doubling");
  }
  return out;
}

ReportEntry hopping_ratio_check(const RadialGroundState& gs, const Vec2& xi, double x, double c_star) {
  if (!(x >= 1.0)) throw ArgumentError("ratio check needs x >= 1");
  const HoppingValue base = hopping(gs, xi);
  const HoppingValue far = x == 1.0 ? base : hopping(gs, x * xi);
  ReportEntry e;
  e.name = "hopping_ratio";
  e.value = std::abs(far.value) / std::abs(base.value);
  const double factor = std::exp(-(gs.lambda / 8.0) * (x * x - 1.0) * xi.norm());
  const bool fitted = !std::isfinite(c_star);
  if (fitted) c_star = e.value / factor;
  e.bound = c_star * factor;
  e.passes = fitted ? e.value <= 1.0 + 1e-12 : e.value <= e.bound;
  e.detail = {{"x", x},
              {"xi_norm", xi.norm()},
              {"lambda", gs.lambda},
              {"c_star", c_star},
              {"c_star_fitted", fitted},
              {"exponential_factor", factor}};
  return e;
}

HoppingBoundsFit fit_hopping_bounds(const std::vector<double>& lambdas, const std::vector<double>& rho_abs, double a,
                                    const AtomicWell& well) {
  if (lambdas.size() != rho_abs.size() || lambdas.size() < 2)
    throw ArgumentError("bounds fit needs at least two (lambda, |rho|) samples");
  HoppingBoundsFit f;
  f.lambdas = lambdas;
  f.rho_abs = rho_abs;
  const double base_lo = a * a + 4.0 * std::sqrt(std::abs(well.v_min)) * a;
  const double base_hi = (a - well.r0) * (a - well.r0) - well.r0 * well.r0;
  double gamma0 = 0.0, C = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double l = lambdas[i], rho = rho_abs[i];
    if (!(rho > 0.0)) throw ArgumentError("bounds fit needs positive |rho|");
    gamma0 = std::max(gamma0, -4.0 * std::log(rho) / l - base_lo);
    C = std::max(C, rho / (std::pow(l, 2.5) * std::exp(-(l / 4.0) * base_hi)));
  }
  f.gamma0 = gamma0;
  f.C = C;
  for (double l : lambdas) {
    f.bound_lo.push_back(std::exp(-(l / 4.0) * (base_lo + gamma0)));
    f.bound_hi.push_back(C * std::pow(l, 2.5) * std::exp(-(l / 4.0) * base_hi));
  }
  const std::size_t n = lambdas.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double X = lambdas[i], Y = std::log(rho_abs[i]);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
    syy += Y * Y;
  }
  const double cov = sxy - sx * sy / n, vx = sxx - sx * sx / n, vy = syy - sy * sy / n;
  f.slope = cov / vx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r_squared = vy > 0 ? cov * cov / (vx * vy) : 1.0;
  f.slope_lo = -(base_lo + gamma0) / 4.0;
  f.slope_hi = -base_hi / 4.0;
  f.slope_within = f.slope >= f.slope_lo && f.slope <= f.slope_hi;
  return f;
}

std::string hopping_bounds_csv(const HoppingBoundsFit& fit) {
  std::ostringstream os;
  os.precision(17);
  os << "lambda,rho_abs,bound_lo,bound_hi\n";
  for (std::size_t i = 0; i < fit.lambdas.size(); ++i)
    os << fit.lambdas[i] << ',' << fit.rho_abs[i] << ',' << fit.bound_lo[i] << ',' << fit.bound_hi[i] << '\n';
  return os.str();
}

namespace {

double gram_box_integral(const RadialGroundState& gs, double d, int refine) {
  const double lam = gs.lambda;
  const double w = gs.well.r0 + 6.0 / std::sqrt(lam);
  const double panel = std::min(0.2, 1.0 / std::sqrt(lam));
  const int per = 16;
  const int nu = refine * static_cast<int>(std::ceil((d + 2.0 * w) / panel));
  const int min_v = std::max(64, static_cast<int>(std::ceil(4.0 * lam * d * w)));
  const int nv = refine * std::max(static_cast<int>(std::ceil(2.0 * w / panel)), (min_v + per - 1) / per);
  const QuadratureRule U = composite_gauss_legendre(nu, per, -0.5 * d - w, 0.5 * d + w);
  const QuadratureRule V = composite_gauss_legendre(nv, per, 0.0, w);
  double sum = 0.0;
  for (std::size_t j = 0; j < V.nodes.size(); ++j) {
    const double v = V.nodes[j];
    // even in v for the real part, odd for the imaginary part
    const double c = std::cos(0.5 * lam * v * d);
    double line = 0.0;
    for (std::size_t i = 0; i < U.nodes.size(); ++i) {
      const double u = U.nodes[i];
      const double l1 = gs.log_value(std::hypot(u + 0.5 * d, v));
      const double l2 = gs.log_value(std::hypot(u - 0.5 * d, v));
      line += U.weights[i] * std::exp(l1 + l2);
    }
    sum += V.weights[j] * c * line;
  }
  return 2.0 * sum;
}

double pair_overlap_upper(const RadialGroundState& gs, double d) {
  const double w = gs.well.r0 + 6.0 / std::sqrt(gs.lambda);
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 100; ++i) {
    const double s = d * i / 100.0;
    best = std::max(best, gs.log_value(s) + gs.log_value(d - s));
  }
  return std::exp(best) * (d + 2.0 * w) * 2.0 * w;
}

}  // namespace

double gram_pair_overlap(const RadialGroundState& gs, double d, double* convergence) {
  if (convergence) *convergence = 0.0;
  if (d == 0.0) return 1.0;
  if (pair_overlap_upper(gs, d) < kNegligible) return 0.0;
  const double coarse = gram_box_integral(gs, d, 1);
  const double fine = gram_box_integral(gs, d, 2);
  const double change = relative_change(coarse, fine);
  const bool floored = std::max(std::abs(coarse), std::abs(fine)) < kOverlapFloor;
  if (change > kConvergenceGate && !floored) throw ResolutionError("Gramian overlap not converged under node doubling");
  if (convergence) *convergence = floored ? 0.0 : change;
  return fine;
}

Gramian gramian(const PointSet& ps, const RadialGroundState& gs) {
  const int N = static_cast<int>(ps.size());
  if (N == 0) throw EmptySetError("Gramian of an empty point set");
  Gramian g;
  g.lambda = gs.lambda;
  g.matrix = MatrixXc::Identity(N, N);
  std::map<long long, double> cache;
  const double key_scale = 1e9;
  for (int n = 0; n < N; ++n) {
    for (int m = n + 1; m < N; ++m) {
      const Vec2& pn = ps.points[n];
      const Vec2& pm = ps.points[m];
      const double d = (pm - pn).norm();
      const long long key = std::llround(d * key_scale);
      auto it = cache.find(key);
      if (it == cache.end()) {
        double conv = 0.0;
        const double val = gram_pair_overlap(gs, d, &conv);
        g.convergence = std::max(g.convergence, conv);
        it = cache.emplace(key, val).first;
      }
      const double phase = -0.5 * gs.lambda * wedge(pn, pm);
      const cplx v = it->second * cplx(std::cos(phase), std::sin(phase));
      g.matrix(n, m) = v;
      g.matrix(m, n) = std::conj(v);
    }
  }
  const Eigen::MatrixXd dev = (g.matrix - MatrixXc::Identity(N, N)).cwiseAbs();
  g.deviation_norm = std::max(dev.rowwise().sum().maxCoeff(), dev.colwise().sum().maxCoeff());
  if (g.deviation_norm >= 1.0) throw LambdaTooSmallError("||G - Id|| >= 1; lambda too small for invertibility");
  g.min_eigenvalue = linalg::eigh(g.matrix, false).values(0);
  return g;
}

OrthonormalizerM inverse_sqrt(const Gramian& g) {
  const linalg::HermitianEigen e = linalg::eigh(g.matrix);
  const int N = static_cast<int>(g.matrix.rows());
  if (N > 0 && !(e.values(0) > 0.0)) throw DefinitenessError("Gramian has a non-positive eigenvalue");
  OrthonormalizerM out;
  out.min_eigenvalue_G = N > 0 ? e.values(0) : 0.0;
  const Eigen::VectorXd s = e.values.cwiseSqrt().cwiseInverse();
  out.matrix = linalg::hermitian_part(e.vectors * s.asDiagonal() * e.vectors.adjoint());
  out.residual = N > 0 ? (out.matrix * g.matrix * out.matrix - MatrixXc::Identity(N, N)).cwiseAbs().maxCoeff() : 0.0;
  return out;
}

MatrixElement matrix_element(const PointSet& ps, const RadialGroundState& gs, int n, int m, double cutoff_factor) {
  const int N = static_cast<int>(ps.size());
  if (n < 0 || m < 0 || n >= N || m >= N) throw ArgumentError("site index out of range");
  const Vec2& pn = ps.points[n];
  const Vec2& pm = ps.points[m];
  const Vec2 d = pm - pn;
  const Vec2 mid = 0.5 * (pn + pm);
  const double r0 = gs.well.r0;
  const double cutoff = cutoff_factor * ps.a;
  int nodes = hopping_node_count(gs.lambda, d.norm(), r0);
  // phi0(x - n) on a well disk away from n varies on the lattice scale
  nodes = std::max(nodes, static_cast<int>(std::ceil(4.0 * gs.lambda * r0 * r0)));
  MatrixElement out;
  cplx sum{0.0, 0.0};
  double remainder = 0.0;
  const double vmax = gs.lambda * gs.lambda * std::abs(gs.well.v_min) * kPi * r0 * r0;
  for (int k = 0; k < N; ++k) {
    if (k == m) continue;
    const Vec2& pk = ps.points[k];
    if ((pk - mid).norm() <= cutoff + 1e-12) {
      sum += disk_integral(gs, pk, pn, pm, d, nodes);
      ++out.wells_used;
    } else {
      const double dn = std::max(0.0, (pk - pn).norm() - r0);
      const double dm = std::max(0.0, (pk - pm).norm() - r0);
      remainder += vmax * std::exp(gs.log_value(dn) + gs.log_value(dm));
    }
  }
  const double phase = -0.5 * gs.lambda * wedge(pn, pm);
  out.value = cplx(std::cos(phase), std::sin(phase)) * sum;
  out.remainder_bound = remainder;
  return out;
}

ReducedHamiltonian reduced_hamiltonian(const PointSet& ps, const RadialGroundState& gs, bool orthonormalize,
                                       double pair_cutoff_factor) {
  const int N = static_cast<int>(ps.size());
  if (N == 0) throw EmptySetError("reduced Hamiltonian of an empty point set");
  ReducedHamiltonian out;
  out.orthonormalized = orthonormalize;
  out.pair_cutoff = pair_cutoff_factor * ps.a;
  const HoppingValue rho = hopping(gs, Vec2(ps.a, 0.0));
  out.normalization = rho.value.real();
  MatrixXc H = MatrixXc::Zero(N, N);
  for (int n = 0; n < N; ++n) {
    for (int m = n; m < N; ++m) {
      if ((ps.points[m] - ps.points[n]).norm() > out.pair_cutoff + 1e-12) continue;
      const MatrixElement e = matrix_element(ps, gs, n, m);
      out.remainder_bound = std::max(out.remainder_bound, e.remainder_bound / std::abs(rho.value));
      const cplx v = e.value / out.normalization;
      if (n == m) {
        H(n, n) = v.real();
      } else {
        H(n, m) = v;
        H(m, n) = std::conj(v);
      }
    }
  }
  if (orthonormalize) {
    const OrthonormalizerM M = inverse_sqrt(gramian(ps, gs));
    H = M.matrix * H * M.matrix;
  }
  out.matrix = linalg::hermitian_part(H);
  return out;
}

DecayFit off_diagonal_decay(const MatrixXc& M, const PointSet& ps, double floor) {
  const int N = static_cast<int>(ps.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int cnt = 0;
  for (int n = 0; n < N; ++n)
    for (int m = n + 1; m < N; ++m) {
      const double v = std::abs(M(n, m));
      if (!(v > floor)) continue;
      const double X = (ps.points[m] - ps.points[n]).norm(), Y = std::log(v);
      sx += X;
      sy += Y;
      sxx += X * X;
      sxy += X * Y;
      syy += Y * Y;
      ++cnt;
    }
  DecayFit f;
  f.samples = cnt;
  if (cnt < 2) return f;
  const double cov = sxy - sx * sy / cnt, vx = sxx - sx * sx / cnt, vy = syy - sy * sy / cnt;
  if (vx <= 0) return f;
  const double slope = cov / vx;
  f.rate = -slope;
  f.log_C = (sy - slope * sx) / cnt;
  f.r_squared = vy > 0 ? cov * cov / (vx * vy) : 1.0;
  return f;
}

nlohmann::json complex_matrix_json(const MatrixXc& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back({M(i, j).real(), M(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXc complex_matrix_from_json(const nlohmann::json& j) {
  const auto R = static_cast<Eigen::Index>(j.size());
  const auto C = R > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  MatrixXc M(R, C);
  for (Eigen::Index i = 0; i < R; ++i) {
    if (static_cast<Eigen::Index>(j.at(i).size()) != C) throw ArgumentError("ragged complex matrix");
    for (Eigen::Index k = 0; k < C; ++k) M(i, k) = cplx(j[i][k].at(0).get<double>(), j[i][k].at(1).get<double>());
  }
  return M;
}

nlohmann::json to_json(const HoppingValue& h) {
  return {{"xi", {h.xi.x(), h.xi.y()}},
          {"value", {h.value.real(), h.value.imag()}},
          {"lambda", h.lambda},
          {"quad_nodes", h.quad_nodes},
          {"convergence", h.convergence}};
}

nlohmann::json to_json(const ReportEntry& r) {
  return {{"name", r.name}, {"value", r.value}, {"bound", r.bound}, {"passes", r.passes}, {"detail", r.detail}};
}

}  // namespace magtb
