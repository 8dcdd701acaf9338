#include "magtb/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <cholmod.h>

#include "magtb/linalg.hpp"
#include "magtb/overlaps.hpp"
#include "magtb/spectral.hpp"

namespace magtb {

Vec2 ContinuumGrid::node(int i, int j) const {
  return center + h * Vec2(i - 0.5 * (nx - 1), j - 0.5 * (ny - 1));
}

double max_grid_step(const PointSet& patch, const AtomicWell& well, double lambda) {
  const double a = (patch.size() >= 2 && std::isfinite(patch.a)) ? patch.a : 2.0 * well.r0;
  return std::min(2.0 * kPi / (lambda * a) / 8.0, well.r0 / 20.0);
}

namespace {

int even_count(double length, double h) {
  const int n = static_cast<int>(std::ceil(length / h - 1e-9)) + 1;
  return n % 2 == 0 ? n : n + 1;
}

}  // namespace

ContinuumGrid make_grid(const PointSet& patch, const AtomicWell& well, double lambda, double h, double margin) {
  if (patch.size() == 0) throw EmptySetError("continuum grid needs at least one well");
  if (!(h > 0.0)) throw ArgumentError("grid step must be positive");
  if (!std::isfinite(margin)) margin = well.r0 + 8.0 / std::sqrt(lambda);
  double xmin = patch.points[0].x(), xmax = xmin, ymin = patch.points[0].y(), ymax = ymin;
  for (const Vec2& p : patch.points) {
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
  }
  ContinuumGrid g;
  g.center = Vec2(0.5 * (xmin + xmax), 0.5 * (ymin + ymax));
  g.h = h;
  g.nx = even_count(xmax - xmin + 2.0 * margin, h);
  g.ny = even_count(ymax - ymin + 2.0 * margin, h);
  return g;
}

ContinuumGrid make_box_grid(const Vec2& center, double lx, double ly, double h) {
  if (!(h > 0.0) || !(lx > 0.0) || !(ly > 0.0)) throw ArgumentError("box grid needs positive extents and step");
  ContinuumGrid g;
  g.center = center;
  g.h = h;
  g.nx = even_count(lx, h);
  g.ny = even_count(ly, h);
  return g;
}

ContinuumHamiltonian build_continuum_hamiltonian(const PointSet& patch, const AtomicWell& well, double lambda,
                                                 const ContinuumGrid& grid, double e0_shift, int order) {
  if (!(lambda > 0.0)) throw ArgumentError("lambda must be positive");
  if (lambda > kContinuumLambdaCeiling) throw PreconditionError("continuum experiments refuse lambda above 10");
  if (order != 2 && order != 4) throw ArgumentError("stencil order must be 2 or 4");
  if (grid.nx < 4 || grid.ny < 4) throw ArgumentError("grid too small");
  well.validate();
  if (patch.size() >= 2 && !(2.0 * well.r0 < patch.a)) throw PreconditionError("wells overlap: need 2 r0 < a");
  if (patch.size() > 0 && grid.h > max_grid_step(patch, well, lambda) * (1.0 + 1e-12))
    throw ResolutionError("grid step does not resolve the magnetic phase and the well");
  const double need = well.r0 + 6.0 / std::sqrt(lambda);
  const Vec2 lo = grid.node(0, 0), hi = grid.node(grid.nx - 1, grid.ny - 1);
  for (const Vec2& p : patch.points)
    if (p.x() - lo.x() < need || hi.x() - p.x() < need || p.y() - lo.y() < need || hi.y() - p.y() < need)
      throw GeometryError("well support closer than 6/sqrt(lambda) to the Dirichlet boundary");

  const int nx = grid.nx, ny = grid.ny, N = grid.size();
  const double h = grid.h, h2 = h * h;
  std::vector<double> w;
  double center_w;
  if (order == 2) {
    w = {1.0};
    center_w = 4.0;
  } else {
    w = {4.0 / 3.0, -1.0 / 12.0};
    center_w = 5.0;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Constant(N, center_w / h2 - e0_shift);
  const double l2 = lambda * lambda;
  for (const Vec2& p : patch.points) {
    const int i0 = std::max(0, static_cast<int>(std::floor((p.x() - well.r0 - lo.x()) / h)));
    const int i1 = std::min(nx - 1, static_cast<int>(std::ceil((p.x() + well.r0 - lo.x()) / h)));
    const int j0 = std::max(0, static_cast<int>(std::floor((p.y() - well.r0 - lo.y()) / h)));
    const int j1 = std::min(ny - 1, static_cast<int>(std::ceil((p.y() + well.r0 - lo.y()) / h)));
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) diag(grid.index(i, j)) += l2 * well.v0((grid.node(i, j) - p).norm());
  }

  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(N) * (1 + 4 * w.size()));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int r = grid.index(i, j);
      const Vec2 x = grid.node(i, j) - grid.center;
      trip.emplace_back(r, r, diag(r));
      for (std::size_t kk = 0; kk < w.size(); ++kk) {
        const int k = static_cast<int>(kk) + 1;
        const double c = -w[kk] / h2;
        for (int sgn : {-1, 1}) {
          const double step = sgn * k * h;
          // x-link: A(mid).(step, 0) = -y step / 2 ; y-link: A(mid).(0, step) = x step / 2
          if (i + sgn * k >= 0 && i + sgn * k < nx) {
            const double ph = 0.5 * lambda * x.y() * step;
            trip.emplace_back(r, grid.index(i + sgn * k, j), c * cplx(std::cos(ph), std::sin(ph)));
          }
          if (j + sgn * k >= 0 && j + sgn * k < ny) {
            const double ph = -0.5 * lambda * x.x() * step;
            trip.emplace_back(r, grid.index(i, j + sgn * k), c * cplx(std::cos(ph), std::sin(ph)));
          }
        }
      }
    }
  }
  ContinuumHamiltonian H;
  H.op.resize(N, N);
  H.op.setFromTriplets(trip.begin(), trip.end());
  H.op.makeCompressed();
  H.grid = grid;
  H.lambda = lambda;
  H.wells = patch;
  H.well = well;
  H.e0_shift = e0_shift;
  H.order = order;
  double nb = 0.0;
  for (int c = 0; c < H.op.outerSize(); ++c) {
    double s = 0.0;
    for (SparseC::InnerIterator it(H.op, c); it; ++it) s += std::abs(it.value());
    nb = std::max(nb, s);
  }
  H.norm_bound = nb;
  return H;
}

cplx cell_link_product(const ContinuumHamiltonian& H, int i, int j) {
  const ContinuumGrid& g = H.grid;
  if (i < 0 || j < 0 || i + 1 >= g.nx || j + 1 >= g.ny) throw ArgumentError("cell outside the grid");
  const double w1 = H.order == 2 ? 1.0 : 4.0 / 3.0;
  auto link = [&](int a, int b) { return -H.op.coeff(a, b) * g.h * g.h / w1; };
  const int p00 = g.index(i, j), p10 = g.index(i + 1, j), p11 = g.index(i + 1, j + 1), p01 = g.index(i, j + 1);
  return link(p00, p10) * link(p10, p11) * link(p11, p01) * link(p01, p00);
}

RotationSectors rotation_sectors(const ContinuumGrid& g, int order) {
  if (order != 1 && order != 2 && order != 4) throw ArgumentError("rotation order must be 1, 2 or 4");
  if (order == 4 && g.nx != g.ny) throw StructureError("quarter-turn symmetry needs a square grid");
  if (g.nx % 2 || g.ny % 2) throw StructureError("rotation sectors need even node counts");
  const int N = g.size();
  auto rotate = [&](int node) {
    const int i = node % g.nx, j = node / g.nx;
    if (order == 2) return g.index(g.nx - 1 - i, g.ny - 1 - j);
    return g.index(g.nx - 1 - j, i);
  };
  RotationSectors s;
  s.order = order;
  s.rep_index.assign(N, -1);
  s.power.assign(N, 0);
  for (int n = 0; n < N; ++n) {
    if (s.rep_index[n] >= 0) continue;
    const int r = static_cast<int>(s.reps.size());
    s.reps.push_back(n);
    int cur = n;
    for (int k = 0; k < order; ++k) {
      if (s.rep_index[cur] >= 0) throw StructureError("rotation orbit is not free");
      s.rep_index[cur] = r;
      s.power[cur] = k;
      cur = order == 1 ? n : rotate(cur);
    }
    if (cur != n) throw StructureError("rotation does not close on the grid");
  }
  return s;
}

SparseC sector_operator(const SparseC& H, const RotationSectors& s, int k) {
  const int M = static_cast<int>(s.reps.size());
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(H.nonZeros() / s.order + M));
  for (int y = 0; y < H.outerSize(); ++y) {
    const double ang = -2.0 * kPi * k * s.power[y] / s.order;
    const cplx phase(std::cos(ang), std::sin(ang));
    for (SparseC::InnerIterator it(H, y); it; ++it) {
      const int p = static_cast<int>(it.row());
      if (s.power[p] != 0) continue;
      trip.emplace_back(s.rep_index[p], s.rep_index[y], it.value() * phase);
    }
  }
  SparseC Hk(M, M);
  Hk.setFromTriplets(trip.begin(), trip.end());
  Hk.makeCompressed();
  return Hk;
}

VectorXc lift_sector_vector(const VectorXc& f, const RotationSectors& s, int k) {
  const int N = static_cast<int>(s.rep_index.size());
  VectorXc psi(N);
  for (int n = 0; n < N; ++n) {
    const double ang = -2.0 * kPi * k * s.power[n] / s.order;
    psi(n) = std::polar(1.0, ang) * f(s.rep_index[n]);
  }
  const double nrm = psi.norm();
  return nrm > 0 ? VectorXc(psi / nrm) : psi;
}

struct ShiftInvert::Impl {
  cholmod_common c;
  cholmod_factor* L = nullptr;
  int n = 0;
};

ShiftInvert::ShiftInvert(const SparseC& H, double sigma) : impl_(std::make_unique<Impl>()) {
  Impl& m = *impl_;
  cholmod_start(&m.c);
  m.c.supernodal = CHOLMOD_SUPERNODAL;
  m.n = static_cast<int>(H.rows());
  std::size_t nz = 0;
  for (int col = 0; col < H.outerSize(); ++col)
    for (SparseC::InnerIterator it(H, col); it; ++it)
      if (it.row() >= col) ++nz;
  cholmod_sparse* A = cholmod_allocate_sparse(m.n, m.n, nz, 1, 1, -1, CHOLMOD_COMPLEX, &m.c);
  if (!A) {
    cholmod_finish(&m.c);
    throw SolverError("CHOLMOD could not allocate the matrix");
  }
  auto* Ap = static_cast<int*>(A->p);
  auto* Ai = static_cast<int*>(A->i);
  auto* Ax = static_cast<double*>(A->x);
  std::size_t k = 0;
  for (int col = 0; col < H.outerSize(); ++col) {
    Ap[col] = static_cast<int>(k);
    for (SparseC::InnerIterator it(H, col); it; ++it) {
      if (it.row() < col) continue;
      Ai[k] = static_cast<int>(it.row());
      Ax[2 * k] = it.value().real();
      Ax[2 * k + 1] = it.value().imag();
      ++k;
    }
  }
  Ap[m.n] = static_cast<int>(k);
  m.L = cholmod_analyze(A, &m.c);
  double beta[2] = {-sigma, 0.0};
  const int ok = m.L ? cholmod_factorize_p(A, beta, nullptr, 0, m.L, &m.c) : 0;
  const int status = m.c.status;
  cholmod_free_sparse(&A, &m.c);
  if (!ok || status != CHOLMOD_OK) {
    if (m.L) cholmod_free_factor(&m.L, &m.c);
    cholmod_finish(&m.c);
    impl_.reset();
    if (status == CHOLMOD_NOT_POSDEF) throw SolverError("shift lies above the lowest eigenvalue (H - sigma not positive)");
    throw SolverError("CHOLMOD factorisation failed");
  }
}

ShiftInvert::~ShiftInvert() {
  if (!impl_) return;
  if (impl_->L) cholmod_free_factor(&impl_->L, &impl_->c);
  cholmod_finish(&impl_->c);
}

MatrixXc ShiftInvert::solve(const MatrixXc& B) const {
  Impl& m = *impl_;
  cholmod_dense* b = cholmod_allocate_dense(m.n, B.cols(), m.n, CHOLMOD_COMPLEX, &m.c);
  std::copy(B.data(), B.data() + B.size(), static_cast<cplx*>(b->x));
  cholmod_dense* x = cholmod_solve(CHOLMOD_A, m.L, b, &m.c);
  cholmod_free_dense(&b, &m.c);
  if (!x) throw SolverError("CHOLMOD solve failed");
  MatrixXc X = Eigen::Map<MatrixXc>(static_cast<cplx*>(x->x), m.n, B.cols());
  cholmod_free_dense(&x, &m.c);
  return X;
}

double ShiftInvert::factor_nonzeros() const {
  const cholmod_factor* L = impl_->L;
  return L->is_super ? static_cast<double>(L->xsize) : static_cast<double>(L->nzmax);
}

EigenPairs lowest_eigenpairs(const SparseC& H, int k, double sigma, double norm_bound, int guard, unsigned seed) {
  const int n = static_cast<int>(H.rows());
  const int b = std::min(n, k + guard);
  if (k < 1 || k > n) throw ArgumentError("eigenpair count out of range");
  const ShiftInvert op(H, sigma);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  MatrixXc X(n, b);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = cplx(nd(rng), nd(rng));
  EigenPairs out;
  Eigen::VectorXd prev = Eigen::VectorXd::Constant(k, 1e300);
  int settled = 0;
  for (int it = 1; it <= 400; ++it) {
    MatrixXc Y = op.solve(X);
    Eigen::HouseholderQR<MatrixXc> qr(Y);
    const MatrixXc Q = qr.householderQ() * MatrixXc::Identity(n, b);
    const MatrixXc HQ = H * Q;
    const MatrixXc small = linalg::hermitian_part(Q.adjoint() * HQ);
    const linalg::HermitianEigen e = linalg::eigh(small);
    X = Q * e.vectors;
    const MatrixXc HX = HQ * e.vectors;
    double res = 0.0;
    for (int c = 0; c < k; ++c) res = std::max(res, (HX.col(c) - e.values(c) * X.col(c)).norm());
    const Eigen::VectorXd theta = e.values.head(k);
    const double change = (theta - prev).cwiseAbs().maxCoeff();
    prev = theta;
    out.iterations = it;
    out.max_residual = res;
    out.values = theta;
    if (res < 1e-11 * norm_bound || change <= 1e-15 * std::max(1.0, theta.cwiseAbs().maxCoeff())) ++settled;
    if (settled >= 4 && it >= 12) break;
  }
  if (out.max_residual > 1e-8 * norm_bound) throw SolverError("subspace iteration did not reach the residual gate");
  out.vectors = X.leftCols(k);
  return out;
}

cplx green_energy_difference(const SparseC& H, const VectorXc& a, const VectorXc& b, const std::vector<char>& D) {
  cplx num{0.0, 0.0}, den{0.0, 0.0};
  for (int col = 0; col < H.outerSize(); ++col) {
    if (D[col]) den += std::conj(a(col)) * b(col);
    for (SparseC::InnerIterator it(H, col); it; ++it) {
      const int r = static_cast<int>(it.row());
      if (D[r] == D[col]) continue;
      const cplx t = std::conj(a(r)) * it.value() * b(col);
      num += D[r] ? t : -t;
    }
  }
  if (std::abs(den) < 1e-3) throw SolverError("Green identity overlap on the subdomain vanishes");
  return num / den;
}

namespace {

int cluster_order(const PointSet& patch, Vec2& centroid) {
  const int n = static_cast<int>(patch.size());
  if (n != 1 && n != 2 && n != 4) throw ArgumentError("continuum clusters support 1, 2 or 4 wells");
  centroid = Vec2::Zero();
  for (const Vec2& p : patch.points) centroid += p / n;
  if (n == 1) return 1;
  const double tol = 1e-9 * patch.a;
  const int order = n;
  const double ang = 2.0 * kPi / order;
  const Eigen::Rotation2Dd R(ang);
  for (const Vec2& p : patch.points) {
    const Vec2 q = centroid + R * (p - centroid);
    bool hit = false;
    for (const Vec2& r : patch.points) hit = hit || (r - q).norm() < tol;
    if (!hit) throw StructureError("well cluster is not rotation symmetric about its centroid");
  }
  return order;
}

void check_rotation_invariance(const SparseC& H, const ContinuumGrid& g, const RotationSectors& s) {
  if (s.order == 1) return;
  auto rot = [&](int node) {
    const int i = node % g.nx, j = node / g.nx;
    return s.order == 2 ? g.index(g.nx - 1 - i, g.ny - 1 - j) : g.index(g.nx - 1 - j, i);
  };
  const SparseC& A = H;
  double worst = 0.0, scale = 0.0;
  for (int col = 0; col < A.outerSize(); ++col)
    for (SparseC::InnerIterator it(A, col); it; ++it) {
      scale = std::max(scale, std::abs(it.value()));
      worst = std::max(worst, std::abs(A.coeff(rot(static_cast<int>(it.row())), rot(col)) - it.value()));
    }
  if (worst > 1e-11 * scale) throw StructureError("continuum operator is not rotation invariant");
}

}  // namespace

ClusterSolve solve_cluster(const PointSet& patch, const AtomicWell& well, double lambda, double h,
                           const RadialGroundState& gs, int order_fd) {
  Vec2 centroid;
  const int order = cluster_order(patch, centroid);
  ContinuumGrid grid = make_grid(patch, well, lambda, h);
  if (order == 4) {
    const int n = std::max(grid.nx, grid.ny);
    grid.nx = grid.ny = n;
  }
  const ContinuumHamiltonian H = build_continuum_hamiltonian(patch, well, lambda, grid, gs.e0_raw, order_fd);
  const RotationSectors sec = rotation_sectors(grid, order);
  check_rotation_invariance(H.op, grid, sec);
  const double sigma = -0.5 * gs.gap;
  ClusterSolve out;
  out.h = h;
  out.nodes = grid.size();
  out.norm_bound = H.norm_bound;
  std::vector<VectorXc> psi;
  for (int k = 0; k < order; ++k) {
    const SparseC Hk = sector_operator(H.op, sec, k);
    const EigenPairs ep = lowest_eigenpairs(Hk, 1, sigma, H.norm_bound);
    out.energies.push_back(ep.values(0));
    out.max_residual = std::max(out.max_residual, ep.max_residual);
    psi.push_back(lift_sector_vector(ep.vectors.col(0), sec, k));
  }
  out.differences.push_back(0.0);
  if (order > 1) {
    std::vector<char> D(grid.size(), 0);
    const Vec2 sep = order == 2 ? Vec2(patch.points[1] - patch.points[0]).normalized() : Vec2(1.0, 0.0);
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        const Vec2 x = grid.node(i, j) - centroid;
        D[grid.index(i, j)] = order == 2 ? sep.dot(x) < 0.0 : (x.x() < 0.0 && x.y() < 0.0);
      }
    for (int k = 1; k < order; ++k) out.differences.push_back(green_energy_difference(H.op, psi[0], psi[k], D).real());
  }
  return out;
}

namespace {

RadialGroundState cluster_ground_state(const AtomicWell& well, double lambda, double a) {
  return solve_radial_ground_state_auto(well, lambda, std::max(a, 2.0 * well.r0) + 4.0);
}

double extrapolate(double coarse, double fine, int order) {
  const double f = order == 4 ? 15.0 : 3.0;
  return fine + (fine - coarse) / f;
}

}  // namespace

DoubleWellResult double_well_splitting(const AtomicWell& well, double lambda, double a, double h, int order) {
  if (lambda < 4.0 || lambda > 10.0) throw PreconditionError("double-well splitting is resolution-feasible for lambda in [4, 10]");
  const PointSet patch = PointSet::from_points({Vec2(0.0, 0.0), Vec2(a, 0.0)}, "double_well");
  const RadialGroundState gs = cluster_ground_state(well, lambda, a);
  DoubleWellResult r;
  r.lambda = lambda;
  r.a = a;
  r.rho = hopping(gs, Vec2(a, 0.0)).value.real();
  const double h0 = std::isfinite(h) ? h : max_grid_step(patch, well, lambda);
  std::vector<double> ratios;
  for (double hh : {h0, 0.5 * h0}) {
    r.grids.push_back(solve_cluster(patch, well, lambda, hh, gs, order));
    const double s = std::abs(r.grids.back().differences[1]);
    ratios.push_back(s / (2.0 * std::abs(r.rho)));
    r.s = s;
  }
  const double s_coarse = std::abs(r.grids[0].differences[1]);
  r.ratio = ratios[1];
  r.refinement_change = std::abs(r.s - s_coarse) / r.s;
  r.refinement_ok = r.refinement_change < 0.02;
  r.ratio_extrapolated = extrapolate(ratios[0], ratios[1], order);
  r.ratio_error = std::abs(r.ratio_extrapolated - r.ratio);
  return r;
}

ScaledSpectrumReport scaled_spectrum_compare(const PointSet& patch, const AtomicWell& well, double lambda,
                                             double beta, double h, int order) {
  ScaledSpectrumReport r;
  r.lambda = lambda;
  r.beta = beta;
  const int n = static_cast<int>(patch.size());
  if (n == 1) {
    r.tb = {0.0};
  } else {
    const SpectralData s = eig_hermitian(build_tb(patch, beta), -1, false);
    r.tb.assign(s.eigenvalues.data(), s.eigenvalues.data() + s.size());
  }
  const RadialGroundState gs = cluster_ground_state(well, lambda, n > 1 ? patch.a : 2.0 * well.r0 + 1.0);
  r.rho = n > 1 ? hopping(gs, Vec2(patch.a, 0.0)).value.real() : hopping(gs, Vec2(2.0 * well.r0 + 1.0, 0.0)).value.real();
  const double h0 = std::isfinite(h) ? h : max_grid_step(patch, well, lambda);
  std::vector<std::vector<double>> scaled;
  for (double hh : {h0, 0.5 * h0}) {
    r.grids.push_back(solve_cluster(patch, well, lambda, hh, gs, order));
    const std::vector<double>& d = r.grids.back().differences;
    double mean = 0.0;
    for (double v : d) mean += v / d.size();
    std::vector<double> sc;
    for (double v : d) sc.push_back((v - mean) / r.rho);
    std::sort(sc.begin(), sc.end());
    scaled.push_back(sc);
  }
  for (std::size_t i = 0; i < scaled[1].size(); ++i) {
    const double ext = extrapolate(scaled[0][i], scaled[1][i], order);
    r.scaled.push_back(ext);
    r.deviation = std::max(r.deviation, std::abs(ext - r.tb[i]));
    r.deviation_error = std::max(r.deviation_error, std::abs(ext - scaled[1][i]));
    r.cluster_bound = std::max(r.cluster_bound, std::abs(ext));
  }
  return r;
}

std::string continuum_eigen_csv(const std::vector<double>& lambdas, const std::vector<std::vector<double>>& energies,
                                const std::vector<double>& rho) {
  std::ostringstream os;
  os.precision(17);
  os << "lambda,index,E,E_over_rho\n";
  for (std::size_t l = 0; l < lambdas.size(); ++l)
    for (std::size_t i = 0; i < energies[l].size(); ++i)
      os << lambdas[l] << ',' << i << ',' << energies[l][i] << ',' << energies[l][i] / rho[l] << '\n';
  return os.str();
}

nlohmann::json to_json(const ContinuumGrid& g) {
  return {{"center", {g.center.x(), g.center.y()}}, {"h", g.h}, {"nx", g.nx}, {"ny", g.ny}, {"bc", "dirichlet"}};
}

namespace {
nlohmann::json to_json(const ClusterSolve& c) {
  return {{"h", c.h},
          {"nodes", c.nodes},
          {"energies", c.energies},
          {"differences", c.differences},
          {"max_residual", c.max_residual},
          {"norm_bound", c.norm_bound}};
}
}  // namespace

nlohmann::json to_json(const DoubleWellResult& r) {
  nlohmann::json grids = nlohmann::json::array();
  for (const auto& g : r.grids) grids.push_back(to_json(g));
  return {{"lambda", r.lambda},
          {"a", r.a},
          {"rho", r.rho},
          {"s", r.s},
          {"ratio", r.ratio},
          {"ratio_extrapolated", r.ratio_extrapolated},
          {"ratio_error", r.ratio_error},
          {"refinement_change", r.refinement_change},
          {"refinement_ok", r.refinement_ok},
          {"grids", grids}};
}

nlohmann::json to_json(const ScaledSpectrumReport& r) {
  nlohmann::json grids = nlohmann::json::array();
  for (const auto& g : r.grids) grids.push_back(to_json(g));
  return {{"lambda", r.lambda},
          {"beta", r.beta},
          {"rho", r.rho},
          {"tb", r.tb},
          {"scaled", r.scaled},
          {"deviation", r.deviation},
          {"deviation_error", r.deviation_error},
          {"cluster_bound", r.cluster_bound},
          {"grids", grids}};
}

}  // namespace magtb
