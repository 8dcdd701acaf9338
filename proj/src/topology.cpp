#include "magtb/topology.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "magtb/linalg.hpp"

namespace magtb {

namespace {

struct Box {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
};

Box bounding_box(const PointSet& ps) {
  if (ps.size() == 0) throw EmptySetError("empty sample");
  Box b{ps.points[0].x(), ps.points[0].x(), ps.points[0].y(), ps.points[0].y()};
  for (const Vec2& p : ps.points) {
    b.xmin = std::min(b.xmin, p.x());
    b.xmax = std::max(b.xmax, p.x());
    b.ymin = std::min(b.ymin, p.y());
    b.ymax = std::max(b.ymax, p.y());
  }
  return b;
}

double spacing(const PointSet& ps) { return std::isfinite(ps.a) ? ps.a : 1.0; }

double window_weight(const VectorXc& v, const std::vector<char>& inside) {
  double w = 0.0, total = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double p = std::norm(v(i));
    total += p;
    if (inside[i]) w += p;
  }
  return total > 0 ? w / total : 0.0;
}

std::vector<char> mask_of(std::size_t n, const std::vector<int>& sites) {
  std::vector<char> m(n, 0);
  for (int s : sites) m[s] = 1;
  return m;
}

struct SvdCount {
  int index = 0;
  bool indeterminate = false;
  nlohmann::json spectrum = nlohmann::json::array();
  std::vector<double> small;
};

// right vectors localised count +1, left vectors localised count -1
SvdCount localized_singular_count(const linalg::SVD& svd, const std::function<VectorXc(const VectorXc&)>& lift,
                                  const std::vector<char>& inside, double tau) {
  SvdCount c;
  for (Eigen::Index i = 0; i < svd.s.size(); ++i) {
    const double s = svd.s(i);
    if (std::abs(s - tau) < 0.05) c.indeterminate = true;
    if (s >= 0.5) continue;
    const double wr = window_weight(lift(svd.V.col(i)), inside);
    const double wl = window_weight(lift(svd.U.col(i)), inside);
    c.small.push_back(s);
    c.spectrum.push_back({{"s", s}, {"right_weight", wr}, {"left_weight", wl}});
    if (s < tau) {
      if (wr > 0.5) ++c.index;
      if (wl > 0.5) --c.index;
    }
  }
  return c;
}

}  // namespace

double SwitchFunction::operator()(const Vec2& x) const {
  const double c = axis == 1 ? x.x() : x.y();
  if (kind == Kind::Heaviside) return c >= center ? 1.0 : 0.0;
  return 0.5 * (1.0 + std::tanh((c - center) / width));
}

Vec2 plaquette_center(const PointSet& ps) {
  const Box b = bounding_box(ps);
  Vec2 c(0.5 * (b.xmin + b.xmax), 0.5 * (b.ymin + b.ymax));
  const double a = spacing(ps);
  for (const Vec2& p : ps.points)
    if ((p - c).norm() < 0.25 * a) {
      c += Vec2(0.5 * a, 0.5 * a);
      break;
    }
  return c;
}

FluxInsertionUnitary flux_insertion_unitary(const PointSet& ps, const Vec2& origin) {
  FluxInsertionUnitary U;
  U.origin = origin;
  U.phases.resize(static_cast<Eigen::Index>(ps.size()));
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const Vec2 d = ps.points[i] - origin;
    if (d.norm() < 1e-12) throw GeometryError("flux insertion origin coincides with a site");
    U.phases(static_cast<Eigen::Index>(i)) = std::polar(1.0, std::atan2(d.y(), d.x()));
  }
  return U;
}

IndexReport make_index_report(double value, std::string method) {
  IndexReport r;
  r.value = value;
  r.nearest_integer = static_cast<int>(std::lround(value));
  r.deviation = std::abs(value - r.nearest_integer);
  r.method = std::move(method);
  return r;
}

std::vector<int> window_sites(const PointSet& ps, const Vec2& center, double fraction) {
  const Box b = bounding_box(ps);
  const double hx = 0.5 * fraction * (b.xmax - b.xmin), hy = 0.5 * fraction * (b.ymax - b.ymin);
  std::vector<int> out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const Vec2& p = ps.points[i];
    if (std::abs(p.x() - center.x()) <= hx + 1e-12 && std::abs(p.y() - center.y()) <= hy + 1e-12)
      out.push_back(static_cast<int>(i));
  }
  return out;
}

IndexReport kubo_chern(const SpectralProjection& P, const PointSet& ps, const SwitchFunction& L1,
                       const SwitchFunction& L2) {
  if (L1.axis != 1 || L2.axis != 2) throw ArgumentError("Kubo formula needs L1 along axis 1 and L2 along axis 2");
  const int N = static_cast<int>(ps.size());
  if (P.projector.rows() != N) throw ArgumentError("projection and sample sizes differ");
  const Box box = bounding_box(ps);
  const Vec2 crossing(L1.center, L2.center);
  std::vector<std::string> warnings;
  const double mx = 0.25 * (box.xmax - box.xmin), my = 0.25 * (box.ymax - box.ymin);
  if (crossing.x() < box.xmin + mx || crossing.x() > box.xmax - mx || crossing.y() < box.ymin + my ||
      crossing.y() > box.ymax - my)
    warnings.push_back("switch centres closer than 25% of the sample to its boundary");

  const std::vector<int> outer = window_sites(ps, crossing, 0.5);
  const std::vector<char> inner = mask_of(ps.size(), window_sites(ps, crossing, 0.3));
  Eigen::VectorXd l1(N), l2(N);
  for (int i = 0; i < N; ++i) {
    l1(i) = L1(ps.points[i]);
    l2(i) = L2(ps.points[i]);
  }
  const int W = static_cast<int>(outer.size());
  MatrixXc Pd(W, N);
  for (int r = 0; r < W; ++r) Pd.row(r) = P.projector.row(outer[r]);
  const MatrixXc B1 = (Pd * l1.asDiagonal()) * P.projector;  // rows of P L1 P
  const MatrixXc B2 = (Pd * l2.asDiagonal()) * P.projector;  // rows of P L2 P
  cplx t50{0.0, 0.0}, t30{0.0, 0.0};
  for (int r = 0; r < W; ++r) {
    const int x = outer[r];
    cplx a{0.0, 0.0}, b1{0.0, 0.0}, b2{0.0, 0.0};
    for (int y = 0; y < N; ++y) {
      const cplx pyx = P.projector(y, x);
      a += std::norm(pyx) * l1(y) * l2(y);
      b1 += B1(r, y) * l2(y) * pyx;
      b2 += B2(r, y) * l1(y) * pyx;
    }
    // X = P L1 Q L2 P and X^* = P L2 Q L1 P
    const cplx x_xx = a - b1, xs_xx = a - b2;
    const cplx term = 2.0 * kPi * (-kI) * (x_xx - xs_xx);
    t50 += term;
    if (inner[x]) t30 += term;
  }
  IndexReport r = make_index_report(t50.real(), "kubo");
  r.imaginary_part = t50.imag();
  r.contamination = std::abs(t50.real() - t30.real());
  r.warnings = warnings;
  r.sample = {{"sites", N}, {"window_fraction", 0.5}, {"window_sites", W}, {"crossing", {crossing.x(), crossing.y()}},
              {"rank", P.rank}};
  r.detail = {{"value_window_30", t30.real()}};
  return r;
}

IndexReport flux_insertion_index(const SpectralProjection& P, const PointSet& ps, const FluxInsertionUnitary& U,
                                 double tau) {
  const int N = static_cast<int>(ps.size());
  if (U.phases.size() != N) throw ArgumentError("flux unitary and sample sizes differ");
  const std::vector<char> inside = mask_of(ps.size(), window_sites(ps, U.origin, 0.5));
  const Box box = bounding_box(ps);
  std::vector<std::string> warnings;
  if (U.origin.x() < box.xmin + 0.25 * (box.xmax - box.xmin) || U.origin.x() > box.xmax - 0.25 * (box.xmax - box.xmin) ||
      U.origin.y() < box.ymin + 0.25 * (box.ymax - box.ymin) || U.origin.y() > box.ymax - 0.25 * (box.ymax - box.ymin))
    warnings.push_back("flux insertion origin outside the sample bulk");
  SvdCount count;
  if (P.rank > 0) {
    const MatrixXc& V = P.basis;
    const MatrixXc C = V.adjoint() * U.phases.asDiagonal() * V;
    const linalg::SVD svd = linalg::svd(C);
    count = localized_singular_count(
        svd, [&](const VectorXc& c) { return VectorXc(V * c); }, inside, tau);
  }
  IndexReport r = make_index_report(count.index, "flux_insertion");
  r.indeterminate = count.indeterminate;
  r.warnings = warnings;
  r.sample = {{"sites", N}, {"origin", {U.origin.x(), U.origin.y()}}, {"tau", tau}, {"rank", P.rank}};
  r.detail = {{"near_zero_singular_values", count.spectrum}};
  return r;
}

EdgeSpectrum edge_spectrum(const SpectralData& spec, const SmoothStep& g) {
  if (!spec.has_vectors) throw ArgumentError("edge quantities need eigenvectors");
  std::vector<int> idx;
  for (int i = 0; i < spec.size(); ++i)
    if (g.delta().contains(spec.eigenvalues(i))) idx.push_back(i);
  EdgeSpectrum e;
  e.energies.resize(static_cast<Eigen::Index>(idx.size()));
  e.vectors.resize(spec.eigenvectors.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) {
    e.energies(static_cast<Eigen::Index>(c)) = spec.eigenvalues(idx[c]);
    e.vectors.col(static_cast<Eigen::Index>(c)) = spec.eigenvectors.col(idx[c]);
  }
  return e;
}

void require_window_in_gap(const SmoothStep& g, const Interval& bulk_gap) {
  if (!(bulk_gap.lo < bulk_gap.hi)) throw InvalidWindowError("bulk gap is empty");
  if (g.delta().lo < bulk_gap.lo || g.delta().hi > bulk_gap.hi)
    throw InvalidWindowError("support of g^2 - g is not inside the bulk gap");
}

IndexReport edge_conductance(const TBHamiltonian& Hedge, const PointSet& ps, const SpectralData& spec,
                             const SmoothStep& g, const SwitchFunction& L1, const Interval& bulk_gap) {
  require_window_in_gap(g, bulk_gap);
  if (L1.axis != 1) throw ArgumentError("edge switch must act along axis 1");
  const int N = static_cast<int>(ps.size());
  if (Hedge.size() != N || spec.eigenvectors.rows() != N) throw ArgumentError("edge operator and sample sizes differ");
  const EdgeSpectrum es = edge_spectrum(spec, g);
  Eigen::VectorXd gp(es.energies.size());
  for (Eigen::Index k = 0; k < gp.size(); ++k) gp(k) = g.derivative(es.energies(k));
  const Box box = bounding_box(ps);
  const double height = box.ymax - box.ymin;
  Eigen::VectorXd l1(N);
  for (int i = 0; i < N; ++i) l1(i) = L1(ps.points[i]);

  const SparseC H = Hedge.full();
  cplx half{0.0, 0.0}, third{0.0, 0.0};
  // (g'(H) J)_xx = sum_y g'_xy J_yx with J_yx = -i H_yx (L1(x) - L1(y))
  for (int x = 0; x < H.outerSize(); ++x) {
    const double depth = ps.points[x].y() - box.ymin;
    if (depth >= 0.5 * height) continue;
    for (SparseC::InnerIterator it(H, x); it; ++it) {
      const int y = static_cast<int>(it.row());
      const double dl = l1(x) - l1(y);
      if (dl == 0.0) continue;
      const cplx J = -kI * it.value() * dl;
      const cplx gxy = (es.vectors.row(x).array() * gp.transpose().cast<cplx>().array() *
                        es.vectors.row(y).conjugate().array())
                           .sum();
      const cplx term = 2.0 * kPi * gxy * J;
      half += term;
      if (depth < height / 3.0) third += term;
    }
  }
  IndexReport r = make_index_report(half.real(), "edge_conductance");
  r.imaginary_part = half.imag();
  r.contamination = std::abs(half.real() - third.real());
  r.sample = {{"sites", N}, {"edge_states_in_window", es.energies.size()}, {"switch_center", L1.center},
              {"delta", {g.delta().lo, g.delta().hi}}, {"step", to_string(g.kind())}};
  return r;
}

DecayProfile depth_profile(const MatrixXc& M, const PointSet& ps, const Vec2& d_hat_in, double floor) {
  const Vec2 d_hat = d_hat_in.normalized();
  const Vec2 along(d_hat.y(), -d_hat.x());
  const int N = static_cast<int>(ps.size());
  double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin, smin = tmin, smax = -tmin;
  for (const Vec2& p : ps.points) {
    tmin = std::min(tmin, d_hat.dot(p));
    tmax = std::max(tmax, d_hat.dot(p));
    smin = std::min(smin, along.dot(p));
    smax = std::max(smax, along.dot(p));
  }
  const double a = spacing(ps);
  const double s_mid = 0.5 * (smin + smax), s_half = 0.25 * (smax - smin);
  std::map<long, double> bins;
  for (int n = 0; n < N; ++n) {
    const Vec2& p = ps.points[n];
    if (std::abs(along.dot(p) - s_mid) > s_half + 1e-12) continue;
    const double depth = d_hat.dot(p) - tmin;
    if (depth > 0.5 * (tmax - tmin) + 1e-12) continue;
    const long key = std::lround(depth / a);
    const double row_max = M.row(n).cwiseAbs().maxCoeff();
    auto [it, fresh] = bins.emplace(key, row_max);
    if (!fresh) it->second = std::max(it->second, row_max);
  }
  DecayProfile out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int cnt = 0;
  for (const auto& [k, v] : bins) {
    out.depth.push_back(k * a);
    out.max_value.push_back(v);
    if (v > floor) {
      const double X = k * a, Y = std::log(v);
      sx += X;
      sy += Y;
      sxx += X * X;
      sxy += X * Y;
      syy += Y * Y;
      ++cnt;
    }
  }
  if (cnt < 2) {
    out.kappa = std::numeric_limits<double>::infinity();
    out.r_squared = 1.0;
    out.passes = true;
    return out;
  }
  const double cov = sxy - sx * sy / cnt, vx = sxx - sx * sx / cnt, vy = syy - sy * sy / cnt;
  out.kappa = vx > 0 ? -cov / vx : 0.0;
  out.r_squared = (vx > 0 && vy > 0) ? cov * cov / (vx * vy) : 1.0;
  out.passes = out.kappa > 0.0;
  return out;
}

DecayProfile edge_projection_defect(const PointSet& ps, const SpectralData& spec, const SmoothStep& g,
                                    const Vec2& d_hat) {
  const EdgeSpectrum es = edge_spectrum(spec, g);
  Eigen::VectorXd d(es.energies.size());
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    const double v = g(es.energies(k));
    d(k) = v * v - v;
  }
  const MatrixXc D = es.vectors * d.asDiagonal() * es.vectors.adjoint();
  DecayProfile p = depth_profile(D, ps, d_hat);
  p.hermiticity_defect = linalg::hermiticity_defect(D);
  if (d.size() > 0) {
    // D vanishes off span(V), so its nonzero spectrum is that of the k x k compression.
    const MatrixXc gram = es.vectors.adjoint() * es.vectors;
    const Eigen::VectorXd ev = linalg::eigh(linalg::hermitian_part(gram * d.asDiagonal() * gram), false).values;
    p.spectrum_min = ev(0);
    p.spectrum_max = ev(ev.size() - 1);
    if (d.size() < static_cast<Eigen::Index>(ps.size())) {
      p.spectrum_min = std::min(p.spectrum_min, 0.0);
      p.spectrum_max = std::max(p.spectrum_max, 0.0);
    }
  }
  return p;
}

std::string decay_profile_csv(const DecayProfile& p) {
  std::ostringstream os;
  os.precision(17);
  os << "depth,max_defect\n";
  for (std::size_t i = 0; i < p.depth.size(); ++i) os << p.depth[i] << ',' << p.max_value[i] << '\n';
  return os.str();
}

EdgeUnitaryReport edge_index_unitary(const PointSet& ps, const SpectralData& spec, const SmoothStep& g,
                                     const SwitchFunction& L1, const Interval& bulk_gap, double tau) {
  require_window_in_gap(g, bulk_gap);
  if (L1.axis != 1) throw ArgumentError("edge switch must act along axis 1");
  const int N = static_cast<int>(ps.size());
  const EdgeSpectrum es = edge_spectrum(spec, g);
  VectorXc phase(es.energies.size());
  for (Eigen::Index k = 0; k < phase.size(); ++k) phase(k) = std::exp(-2.0 * kPi * kI * g(es.energies(k))) - 1.0;
  EdgeUnitaryReport out;
  out.W = MatrixXc::Identity(N, N) + es.vectors * phase.asDiagonal() * es.vectors.adjoint();
  {
    const MatrixXc gram = es.vectors.adjoint() * es.vectors;
    const MatrixXc E = MatrixXc(phase.asDiagonal()) + MatrixXc(phase.conjugate().asDiagonal()) +
                       phase.conjugate().asDiagonal() * gram * phase.asDiagonal();
    const double orth = phase.size() ? (gram - MatrixXc::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() : 0.0;
    out.unitarity_defect = (phase.size() ? E.cwiseAbs().maxCoeff() : 0.0) + orth;
  }

  const Box box = bounding_box(ps);
  std::vector<char> lower(ps.size(), 0);
  for (int i = 0; i < N; ++i) lower[i] = ps.points[i].y() - box.ymin < 0.5 * (box.ymax - box.ymin);

  SvdCount count;
  if (L1.kind == SwitchFunction::Kind::Heaviside) {
    std::vector<int> S;
    for (int i = 0; i < N; ++i)
      if (L1(ps.points[i]) > 0.5) S.push_back(i);
    const int k = static_cast<int>(S.size());
    MatrixXc C(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) C(i, j) = out.W(S[i], S[j]);
    std::vector<char> lower_S(k);
    for (int i = 0; i < k; ++i) lower_S[i] = lower[S[i]];
    count = localized_singular_count(linalg::svd(C), [](const VectorXc& c) { return c; }, lower_S, tau);
  } else {
    Eigen::VectorXd l(N);
    for (int i = 0; i < N; ++i) l(i) = L1(ps.points[i]);
    MatrixXc T = l.asDiagonal() * out.W * l.asDiagonal();
    T.diagonal() += (Eigen::VectorXd::Ones(N) - l).cast<cplx>();
    count = localized_singular_count(linalg::svd(T), [](const VectorXc& c) { return c; }, lower, tau);
  }
  out.index = make_index_report(count.index, "edge_unitary");
  out.index.indeterminate = count.indeterminate;
  out.index.sample = {{"sites", N}, {"edge_states_in_window", es.energies.size()}, {"tau", tau},
                      {"switch_center", L1.center}};
  out.index.detail = {{"near_zero_singular_values", count.spectrum}, {"unitarity_defect", out.unitarity_defect}};
  out.small_singular_values = count.small;
  return out;
}

BecReport bec_check(const TBHamiltonian& Hbulk, const PointSet& bulk, const TBHamiltonian& Hedge,
                    const PointSet& edge, const Interval& gap, const SmoothStep& g) {
  require_window_in_gap(g, gap);
  BecReport r;
  const SpectralData sb = eig_hermitian(Hbulk);
  const SpectralProjection P = fermi_projection(sb, gap.center());
  const Vec2 cb = plaquette_center(bulk);
  r.kubo = kubo_chern(P, bulk, {1, cb.x()}, {2, cb.y()});
  r.flux = flux_insertion_index(P, bulk, flux_insertion_unitary(bulk, cb));
  const SpectralData se = eig_hermitian(Hedge);
  const SwitchFunction L1{1, plaquette_center(edge).x()};
  r.edge = edge_conductance(Hedge, edge, se, g, L1, gap);
  r.edge_unitary = edge_index_unitary(edge, se, g, L1, gap).index;
  // The flux-insertion Fredholm index carries the opposite orientation to the Kubo trace.
  const int v[4] = {r.kubo.nearest_integer, -r.flux.nearest_integer, r.edge.nearest_integer,
                    r.edge_unitary.nearest_integer};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) r.max_disagreement = std::max(r.max_disagreement, std::abs(v[i] - v[j]));
  r.consistent = r.max_disagreement == 0 && !r.flux.indeterminate && !r.edge_unitary.indeterminate;
  return r;
}

nlohmann::json to_json(const IndexReport& r) {
  return {{"value", r.value},
          {"nearest_integer", r.nearest_integer},
          {"deviation", r.deviation},
          {"method", r.method},
          {"imaginary_part", r.imaginary_part},
          {"contamination", r.contamination},
          {"indeterminate", r.indeterminate},
          {"warnings", r.warnings},
          {"sample", r.sample},
          {"detail", r.detail}};
}

nlohmann::json to_json(const BecReport& r) {
  return {{"kubo", to_json(r.kubo)},
          {"flux_insertion", to_json(r.flux)},
          {"edge_conductance", to_json(r.edge)},
          {"edge_unitary", to_json(r.edge_unitary)},
          {"flux_insertion_sign", -1},
          {"max_disagreement", r.max_disagreement},
          {"consistent", r.consistent}};
}

}  // namespace magtb
