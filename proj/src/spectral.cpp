#include "magtb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "magtb/linalg.hpp"

namespace magtb {

namespace {

constexpr double kResidualGate = 1e-9;
constexpr double kEndpointGap = 1e-9;
constexpr int kFullResidualCheck = 800;
constexpr int kSpotColumns = 64;

void residual_gate(const MatrixXc& H, SpectralData& s) {
  const int k = s.size();
  if (k == 0) return;
  std::vector<int> cols;
  if (H.rows() <= kFullResidualCheck || k <= kSpotColumns) {
    cols.resize(k);
    std::iota(cols.begin(), cols.end(), 0);
  } else {
    for (int i = 0; i < kSpotColumns; ++i) cols.push_back(static_cast<int>((static_cast<long long>(i) * (k - 1)) / (kSpotColumns - 1)));
  }
  double worst = 0.0;
  for (int c : cols) {
    const VectorXc v = s.eigenvectors.col(c);
    worst = std::max(worst, (H * v - s.eigenvalues(c) * v).norm());
  }
  s.max_residual = worst;
  s.checked_columns = static_cast<int>(cols.size());
  if (worst > kResidualGate * std::max(1.0, s.operator_norm))
    throw SolverError("eigenpair residual " + std::to_string(worst) + " exceeds the gate");
}

}  // namespace

SpectralData eig_hermitian(const MatrixXc& H, int k, bool vectors) {
  const int N = static_cast<int>(H.rows());
  if (H.cols() != N) throw ArgumentError("eigensolver needs a square matrix");
  if (vectors && N > kDenseLimit) throw SizeError("dense eigendecomposition refused above 4000 sites");
  const double defect = linalg::hermiticity_defect(H);
  if (defect > 1e-12 * std::max(1.0, H.cwiseAbs().maxCoeff())) throw ArgumentError("operator is not Hermitian");
  SpectralData s;
  if (N == 0) return s;
  linalg::HermitianEigen e;
  if (k < 0 || k >= N) {
    e = linalg::eigh(H, vectors);
  } else {
    if (k == 0) return s;
    e = linalg::eigh_range(H, 0, k - 1);
  }
  s.eigenvalues = e.values;
  s.has_vectors = vectors;
  if (vectors) s.eigenvectors = std::move(e.vectors);
  s.operator_norm = std::max(std::abs(s.eigenvalues(0)), std::abs(s.eigenvalues(s.size() - 1)));
  if (k >= 0 && k < N) s.operator_norm = std::max(s.operator_norm, H.cwiseAbs().rowwise().sum().maxCoeff());
  if (vectors) residual_gate(H, s);
  return s;
}

SpectralData eig_hermitian(const TBHamiltonian& H, int k, bool vectors) { return eig_hermitian(H.dense(), k, vectors); }

SpectralProjection spectral_projection(const SpectralData& spec, const Interval& window) {
  if (!spec.has_vectors) throw ArgumentError("projection needs eigenvectors");
  if (!(window.lo < window.hi)) throw InvalidWindowError("empty spectral window");
  SpectralProjection P;
  P.window = window;
  std::vector<int> idx;
  for (int i = 0; i < spec.size(); ++i) {
    const double e = spec.eigenvalues(i);
    if (std::abs(e - window.lo) < kEndpointGap || std::abs(e - window.hi) < kEndpointGap)
      throw GapError("spectral window endpoint lies on an eigenvalue");
    if (window.contains(e)) idx.push_back(i);
  }
  const int N = static_cast<int>(spec.eigenvectors.rows());
  MatrixXc V(N, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) V.col(static_cast<Eigen::Index>(c)) = spec.eigenvectors.col(idx[c]);
  P.projector = linalg::hermitian_part(V * V.adjoint());
  P.basis = std::move(V);
  P.rank = static_cast<int>(idx.size());
  P.idempotency_defect = N > 0 ? (P.projector * P.projector - P.projector).cwiseAbs().maxCoeff() : 0.0;
  return P;
}

SpectralProjection fermi_projection(const SpectralData& spec, double mu) {
  const double below = spec.size() > 0 ? std::min(spec.eigenvalues(0), mu) - 1.0 : mu - 1.0;
  SpectralProjection P = spectral_projection(spec, {below, mu});
  P.mu = mu;
  return P;
}

SmoothStep::SmoothStep(Interval delta, Kind kind) : delta_(delta), kind_(kind) {
  if (kind != Kind::Sharp && !(delta.lo < delta.hi)) throw InvalidWindowError("smooth step needs lo < hi");
  if (kind == Kind::Fermi) {
    w_ = delta.width() / 8.0;
    f_lo_ = fermi(delta.lo);
    f_hi_ = fermi(delta.hi);
  }
}

SmoothStep SmoothStep::sharp(double mu) { return SmoothStep({mu, mu}, Kind::Sharp); }

double SmoothStep::fermi(double e) const { return 1.0 / (1.0 + std::exp((e - delta_.center()) / w_)); }

namespace {
double psi(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double dpsi(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }
}  // namespace

double SmoothStep::operator()(double e) const {
  if (kind_ == Kind::Sharp) return e < delta_.lo ? 1.0 : 0.0;
  if (e <= delta_.lo) return 1.0;
  if (e >= delta_.hi) return 0.0;
  if (kind_ == Kind::Fermi) return (fermi(e) - f_hi_) / (f_lo_ - f_hi_);
  const double s = (e - delta_.lo) / delta_.width();
  const double a = psi(1.0 - s), b = psi(s);
  return a / (a + b);
}

double SmoothStep::derivative(double e) const {
  if (kind_ == Kind::Sharp) return 0.0;
  if (e <= delta_.lo || e >= delta_.hi) return 0.0;
  if (kind_ == Kind::Fermi) {
    const double f = fermi(e);
    return -f * (1.0 - f) / w_ / (f_lo_ - f_hi_);
  }
  const double s = (e - delta_.lo) / delta_.width();
  const double a = psi(1.0 - s), b = psi(s);
  const double da = -dpsi(1.0 - s), db = dpsi(s);
  return (da * b - a * db) / ((a + b) * (a + b)) / delta_.width();
}

std::string to_string(SmoothStep::Kind k) {
  switch (k) {
    case SmoothStep::Kind::Fermi:
      return "fermi";
    case SmoothStep::Kind::Bump:
      return "bump";
    case SmoothStep::Kind::Sharp:
      return "sharp";
  }
  return "unknown";
}

MatrixXc function_of(const SpectralData& spec, const std::function<cplx(double)>& f) {
  if (!spec.has_vectors) throw ArgumentError("functional calculus needs eigenvectors");
  if (spec.eigenvectors.cols() != spec.eigenvectors.rows())
    throw ArgumentError("functional calculus needs the full eigendecomposition");
  VectorXc d(spec.size());
  for (int i = 0; i < spec.size(); ++i) d(i) = f(spec.eigenvalues(i));
  return spec.eigenvectors * d.asDiagonal() * spec.eigenvectors.adjoint();
}

MatrixXc smooth_function_of(const SpectralData& spec, const SmoothStep& g) {
  return linalg::hermitian_part(function_of(spec, [&](double e) { return cplx(g(e), 0.0); }));
}

MatrixXc smooth_derivative_of(const SpectralData& spec, const SmoothStep& g) {
  return linalg::hermitian_part(function_of(spec, [&](double e) { return cplx(g.derivative(e), 0.0); }));
}

MatrixXc step_unitary(const SpectralData& spec, const SmoothStep& g) {
  return function_of(spec, [&](double e) { return std::exp(-2.0 * kPi * kI * g(e)); });
}

double unitarity_defect(const MatrixXc& U) {
  if (U.size() == 0) return 0.0;
  return (U.adjoint() * U - MatrixXc::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff();
}

std::vector<std::pair<int, int>> farey_fluxes(int q_max) {
  if (q_max < 1) throw ArgumentError("q_max must be >= 1");
  std::vector<std::pair<int, int>> out;
  for (int q = 1; q <= q_max; ++q)
    for (int p = 0; p < q; ++p)
      if (std::gcd(p, q) == 1) out.emplace_back(p, q);
  std::sort(out.begin(), out.end(), [](auto x, auto y) {
    return static_cast<long long>(x.first) * y.second < static_cast<long long>(y.first) * x.second;
  });
  return out;
}

std::vector<ButterflyPoint> butterfly(int nx, int ny, int q_max) {
  if (q_max < 2) throw ArgumentError("butterfly needs q_max >= 2");
  const PointSet ps = build_square_lattice(1.0, nx, ny);
  std::vector<ButterflyPoint> rows;
  for (const auto& [p, q] : farey_fluxes(q_max)) {
    const double flux = 2.0 * kPi * p / q;
    const SpectralData s = eig_hermitian(build_tb(ps, flux / 2.0), -1, false);
    for (int i = 0; i < s.size(); ++i) rows.push_back({p, q, flux, s.eigenvalues(i)});
  }
  return rows;
}

std::string butterfly_csv(const std::vector<ButterflyPoint>& rows, const nlohmann::json& meta) {
  std::ostringstream os;
  os.precision(17);
  os << "# " << meta.dump() << '\n' << "flux,energy\n";
  for (const ButterflyPoint& r : rows) os << r.flux << ',' << r.energy << '\n';
  return os.str();
}

std::vector<std::pair<double, double>> harper_bloch_bands(int p, int q, int nk) {
  if (q < 1 || nk < 2) throw ArgumentError("Bloch scan needs q >= 1 and nk >= 2");
  const double flux = 2.0 * kPi * p / q;
  std::vector<std::pair<double, double>> bands(q, {1e300, -1e300});
  for (int i = 0; i < nk; ++i) {
    const double k1 = 2.0 * kPi * i / nk;
    for (int j = 0; j < nk; ++j) {
      const double K = 2.0 * kPi * j / nk;
      MatrixXc Hk = MatrixXc::Zero(q, q);
      for (int s = 0; s < q; ++s) Hk(s, s) = 2.0 * std::cos(k1 + flux * s);
      if (q == 1) {
        Hk(0, 0) += 2.0 * std::cos(K);
      } else {
        for (int s = 0; s + 1 < q; ++s) {
          Hk(s, s + 1) += 1.0;
          Hk(s + 1, s) += 1.0;
        }
        const cplx wrap = std::exp(kI * K);
        Hk(q - 1, 0) += wrap;
        Hk(0, q - 1) += std::conj(wrap);
      }
      const Eigen::VectorXd ev = linalg::eigh(Hk, false).values;
      for (int b = 0; b < q; ++b) {
        bands[b].first = std::min(bands[b].first, ev(b));
        bands[b].second = std::max(bands[b].second, ev(b));
      }
    }
  }
  return bands;
}

Interval harper_gap(int p, int q, int j, int nk) {
  const auto bands = harper_bloch_bands(p, q, nk);
  if (j < 0 || j + 1 >= static_cast<int>(bands.size())) throw ArgumentError("gap index out of range");
  const Interval gap{bands[j].second, bands[j + 1].first};
  if (!(gap.lo < gap.hi)) throw GapError("requested Harper bands overlap");
  return gap;
}

}  // namespace magtb
