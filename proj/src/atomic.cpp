#include "magtb/atomic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <lapacke.h>

namespace magtb {

double AtomicWell::v0(double r) const {
  if (r >= r0) return 0.0;
  const double s2 = (r / r0) * (r / r0);
  const double q = (1.0 - s2) * (1.0 - s2);
  switch (profile) {
    case WellProfile::Quartic:
      return v_min * q;
    case WellProfile::MexicanHat:
      return v_min * 16.0 * s2 * s2 * q;
  }
  return 0.0;
}

void AtomicWell::validate() const {
  if (!(r0 > 0.0)) throw ArgumentError("well radius r0 must be positive");
  if (!(v_min <= 0.0) || !std::isfinite(v_min)) throw ArgumentError("v_min must be finite and <= 0");
}

std::string to_string(WellProfile p) { return p == WellProfile::Quartic ? "quartic" : "mexican_hat"; }

WellProfile well_profile_from_string(const std::string& s) {
  if (s == "quartic") return WellProfile::Quartic;
  if (s == "mexican_hat") return WellProfile::MexicanHat;
  throw ArgumentError("unknown well profile '" + s + "'");
}

namespace {

struct SectorSolve {
  std::vector<double> evals;
  std::vector<double> logu;  // filled for m = 0 when requested
};

// Finite-volume discretisation of -(1/r)(r u')' + q_m(r) u on r_i = i h with
// Dirichlet data at r_max = N h.  Cell weights are w_0 = h^2/8, w_i = r_i h;
// the symmetric pencil (K, W) is reduced to W^{-1/2} K W^{-1/2}.
SectorSolve sector_solve(const AtomicWell& well, double lambda, int m, int N, double r_max, int n_eig,
                         bool want_vector) {
  const double h = r_max / N;
  const int i0 = m == 0 ? 0 : 1;
  const int n = N - i0;
  std::vector<double> w(N), c(N), d(N);
  for (int i = 0; i < N; ++i) {
    const double r = i * h;
    w[i] = i == 0 ? h * h / 8.0 : r * h;
    c[i] = (r + 0.5 * h) / h;
  }
  for (int i = i0; i < N; ++i) {
    const double r = i * h;
    double q = lambda * lambda * r * r / 4.0 + lambda * lambda * well.v0(r) - lambda * m;
    if (m != 0) q += static_cast<double>(m) * m / (r * r);
    d[i] = c[i] + (i > 0 ? c[i - 1] : 0.0) + w[i] * q;
  }

  std::vector<double> td(n), te(std::max(n, 1));
  for (int k = 0; k < n; ++k) {
    const int i = k + i0;
    td[k] = d[i] / w[i];
    if (k + 1 < n) te[k] = -c[i] / std::sqrt(w[i] * w[i + 1]);
  }
  n_eig = std::min(n_eig, n);
  std::vector<double> ev(n);
  std::vector<double> z(want_vector ? static_cast<std::size_t>(n) * n_eig : 1);
  std::vector<lapack_int> isuppz(2 * std::max(n_eig, 1));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, want_vector ? 'V' : 'N', 'I', n, td.data(), te.data(),
                                         0.0, 0.0, 1, n_eig, 0.0, &found, ev.data(), z.data(), n, isuppz.data());
  if (info != 0 || found != n_eig) throw SolverError("tridiagonal eigensolver failed (dstevr info " +
                                                     std::to_string(info) + ")");
  SectorSolve out;
  out.evals.assign(ev.begin(), ev.begin() + n_eig);
  if (!want_vector || m != 0) return out;

  const double E = out.evals[0];
  std::vector<double> u(N);
  double umax = 0.0;
  for (int i = 0; i < N; ++i) {
    u[i] = z[i] / std::sqrt(w[i]);
    if (std::abs(u[i]) > std::abs(umax)) umax = u[i];
  }
  if (umax < 0)
    for (double& x : u) x = -x;
  umax = std::abs(umax);
  int k = 0;
  for (int i = 0; i < N; ++i)
    if (u[i] >= 1e-3 * umax) k = i;

  // Backward continued fraction s_i = u_i / u_{i+1}, stable where the
  // ground state decays outward.
  std::vector<double> s(N, 0.0);
  out.logu.assign(N, 0.0);
  for (int i = 0; i <= k; ++i) {
    if (!(u[i] > 0.0)) throw SolverError("radial ground state has a node");
    out.logu[i] = std::log(u[i]);
  }
  if (k < N - 1) {
    s[N - 2] = (d[N - 1] - E * w[N - 1]) / c[N - 2];
    for (int i = N - 2; i > k; --i) s[i - 1] = ((d[i] - E * w[i]) - c[i] / s[i]) / c[i - 1];
    for (int i = k + 1; i < N; ++i) {
      if (!(s[i - 1] > 0.0)) throw SolverError("tail recurrence lost positivity");
      out.logu[i] = out.logu[i - 1] - std::log(s[i - 1]);
    }
  }
  double lmax = *std::max_element(out.logu.begin(), out.logu.end());
  double norm = 0.0;
  for (int i = 0; i < N; ++i) norm += 2.0 * kPi * w[i] * std::exp(2.0 * (out.logu[i] - lmax));
  const double shift = lmax + 0.5 * std::log(norm);
  for (double& l : out.logu) l -= shift;
  return out;
}

double lagrange4(const std::vector<double>& y, double h, double r, int n_valid) {
  // Even extension through r = 0; four-point Lagrange on the uniform grid.
  r = std::abs(r);
  const double t = r / h;
  int j = static_cast<int>(std::floor(t));
  if (j + 2 > n_valid - 1) return -std::numeric_limits<double>::infinity();
  const double f = t - j;
  auto at = [&](int i) { return y[static_cast<std::size_t>(std::abs(i))]; };
  const double ym = at(j - 1), y0 = at(j), y1 = at(j + 1), y2 = at(j + 2);
  return -f * (f - 1.0) * (f - 2.0) / 6.0 * ym + (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0 * y0 -
         (f + 1.0) * f * (f - 2.0) / 2.0 * y1 + (f + 1.0) * f * (f - 1.0) / 6.0 * y2;
}

double richardson(double fine, double coarse) { return (4.0 * fine - coarse) / 3.0; }

}  // namespace

double RadialGroundState::log_value(double r) const {
  return lagrange4(log_values, h, r, static_cast<int>(log_values.size()));
}

double RadialGroundState::value(double r) const { return std::exp(log_value(r)); }

std::vector<double> RadialGroundState::values() const {
  std::vector<double> v(log_values.size());
  std::transform(log_values.begin(), log_values.end(), v.begin(), [](double l) { return std::exp(l); });
  return v;
}

double RadialGroundState::norm_integral() const {
  // Nodes 0..N-1 plus the Dirichlet endpoint N with a vanishing integrand.
  const int N = static_cast<int>(log_values.size());
  auto f = [&](int i) { return i >= N ? 0.0 : 2.0 * kPi * (i * h) * std::exp(2.0 * log_values[i]); };
  const int intervals = N;
  const int even = intervals - intervals % 2;
  double s = f(0) + f(even);
  for (int i = 1; i < even; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i);
  s *= h / 3.0;
  if (even < intervals) s += 0.5 * h * (f(even) + f(intervals));
  return s;
}

RadialGroundState solve_radial_ground_state(const AtomicWell& well, double lambda, int n_grid, double r_max) {
  well.validate();
  if (!(lambda > 0.0)) throw PreconditionError("lambda must be positive");
  if (!(r_max >= well.r0 + 8.0 / std::sqrt(lambda)))
    throw PreconditionError("r_max must be at least r0 + 8/sqrt(lambda)");
  if (n_grid < 16) throw ResolutionError("radial grid needs at least 16 nodes");
  const double h = r_max / n_grid;
  if (h > std::min(well.r0 / 50.0, 0.5 / std::sqrt(lambda)) * (1.0 + 1e-12))
    throw ResolutionError("radial grid step exceeds min(r0/50, 0.5/sqrt(lambda))");

  const int Nc = n_grid / 2;
  const SectorSolve f0 = sector_solve(well, lambda, 0, n_grid, r_max, 2, true);
  const SectorSolve c0 = sector_solve(well, lambda, 0, Nc, r_max, 2, true);

  RadialGroundState gs;
  gs.well = well;
  gs.lambda = lambda;
  gs.r_max = r_max;
  gs.n_grid = n_grid;
  gs.h = h;
  gs.e0_fine = f0.evals[0];
  gs.e0_coarse = c0.evals[0];
  gs.e0_raw = richardson(gs.e0_fine, gs.e0_coarse);
  const double scale = std::max(std::abs(gs.e0_fine), lambda);
  gs.refinement_disagreement = std::abs(gs.e0_fine - gs.e0_coarse) / scale;
  if (gs.refinement_disagreement > 1e-4)
    throw ResolutionError("radial refinement disagreement " + std::to_string(gs.refinement_disagreement) +
                          " exceeds 1e-4");

  double e1 = richardson(f0.evals[1], c0.evals[1]);
  std::vector<double> sector_e{gs.e0_raw};
  for (int m : {-2, -1, 1, 2}) {
    const double ef = sector_solve(well, lambda, m, n_grid, r_max, 1, false).evals[0];
    const double ec = sector_solve(well, lambda, m, Nc, r_max, 1, false).evals[0];
    const double em = richardson(ef, ec);
    sector_e.push_back(em);
    if (std::abs(m) == 1) e1 = std::min(e1, em);
  }
  gs.e1 = e1;
  gs.gap = e1 - gs.e0_raw;
  const double tol = std::abs(gs.e0_fine - gs.e0_raw) + 1e-9 * scale;
  gs.angular_sector_check =
      std::all_of(sector_e.begin() + 1, sector_e.end(), [&](double e) { return gs.e0_raw <= e + tol; });

  gs.grid.resize(n_grid);
  gs.log_values.resize(n_grid);
  const double hc = r_max / Nc;
  for (int i = 0; i < n_grid; ++i) {
    const double r = i * h;
    gs.grid[i] = r;
    const double lc = lagrange4(c0.logu, hc, r, Nc);
    gs.log_values[i] = std::isfinite(lc) ? f0.logu[i] + (f0.logu[i] - lc) / 3.0 : f0.logu[i];
  }
  const double shift = 0.5 * std::log(gs.norm_integral());
  for (double& l : gs.log_values) l -= shift;
  return gs;
}

RadialGroundState solve_radial_ground_state_auto(const AtomicWell& well, double lambda, double reach,
                                                 double h_target) {
  const double r_max = well.r0 + std::max(reach, 8.0 / std::sqrt(lambda));
  const double h = std::min({h_target, well.r0 / 50.0, 0.5 / std::sqrt(lambda)});
  int n = static_cast<int>(std::ceil(r_max / h));
  n += n % 2;
  return solve_radial_ground_state(well, lambda, n, r_max);
}

SectorEnergies sector_energies(const AtomicWell& well, double lambda, int m_lo, int m_hi) {
  well.validate();
  if (!(lambda > 0.0)) throw PreconditionError("lambda must be positive");
  if (m_lo > 0 || m_hi < 0) throw ArgumentError("m range must contain 0");
  const int mmax = std::max(std::abs(m_lo), std::abs(m_hi));
  const double r_max = well.r0 + 12.0 / std::sqrt(lambda) + 3.0 * std::sqrt(2.0 * (mmax + 1) / lambda);
  const double h = std::min(well.r0 / 100.0, 0.1 / std::sqrt(lambda));
  int N = static_cast<int>(std::ceil(r_max / h));
  N += N % 2;

  SectorEnergies out;
  double corr = 0.0, scale = lambda;
  for (int m = m_lo; m <= m_hi; ++m) {
    const double ef = sector_solve(well, lambda, m, N, r_max, 1, false).evals[0];
    const double ec = sector_solve(well, lambda, m, N / 2, r_max, 1, false).evals[0];
    const double e = richardson(ef, ec);
    out.m.push_back(m);
    out.energy.push_back(e);
    corr = std::max(corr, std::abs(ef - e));
    scale = std::max(scale, std::abs(e));
  }
  out.tolerance = corr + 1e-9 * scale;
  const auto it0 = std::find(out.m.begin(), out.m.end(), 0);
  const double e0 = out.energy[static_cast<std::size_t>(it0 - out.m.begin())];
  out.m0_minimal = std::all_of(out.energy.begin(), out.energy.end(), [&](double e) { return e0 <= e + out.tolerance; });
  return out;
}

bool check_sector_minimum(const AtomicWell& well, double lambda, int m_lo, int m_hi) {
  return sector_energies(well, lambda, m_lo, m_hi).m0_minimal;
}

DecayCertificate gaussian_decay_certificate(const RadialGroundState& gs) {
  const double r0 = gs.well.r0, lam = gs.lambda;
  const double fit_hi = r0 + 5.0 / std::sqrt(lam);
  if (gs.grid.empty() || gs.grid.back() < fit_hi) throw PreconditionError("grid does not cover the decay fit window");
  DecayCertificate cert;
  double cmax = 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < gs.grid.size(); ++i) {
    const double r = gs.grid[i];
    if (r < r0) continue;
    const double logbound = 0.5 * std::log(lam) - lam * (r * r - r0 * r0) / 4.0;
    cmax = std::max(cmax, std::exp(gs.log_values[i] - logbound));
    if (r <= fit_hi) {
      const double x = r * r, y = gs.log_values[i];
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++cnt;
    }
  }
  cert.C_fit = cmax;
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  cert.rate_fit = -slope;
  cert.passes = std::isfinite(cert.C_fit) && cnt >= 3 && slope <= -lam / 4.0 * (1.0 - 0.05);
  return cert;
}

nlohmann::json radial_header(const RadialGroundState& gs) {
  return {{"lambda", gs.lambda},
          {"e0_raw", gs.e0_raw},
          {"e0_fine", gs.e0_fine},
          {"e0_coarse", gs.e0_coarse},
          {"gap", gs.gap},
          {"angular_sector_check", gs.angular_sector_check},
          {"n_grid", gs.n_grid},
          {"r_max", gs.r_max},
          {"v_min", gs.well.v_min},
          {"r0", gs.well.r0},
          {"profile", to_string(gs.well.profile)}};
}

std::string radial_csv(const RadialGroundState& gs) {
  std::ostringstream os;
  os.precision(17);
  os << "r,phi0\n";
  for (std::size_t i = 0; i < gs.grid.size(); ++i) os << gs.grid[i] << ',' << std::exp(gs.log_values[i]) << '\n';
  return os.str();
}

}  // namespace magtb
