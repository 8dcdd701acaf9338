#include "magtb/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "magtb/atomic.hpp"
#include "magtb/continuum.hpp"
#include "magtb/linalg.hpp"
#include "magtb/overlaps.hpp"
#include "magtb/spectral.hpp"
#include "magtb/tbmodel.hpp"
#include "magtb/topology.hpp"

namespace magtb {

namespace {

Check check(std::string name, double value, const std::string& relation, double threshold, double upper = kNan) {
  Check c{std::move(name), value, threshold, upper, relation, false};
  if (relation == "<") c.passed = value < threshold;
  else if (relation == "<=") c.passed = value <= threshold;
  else if (relation == ">") c.passed = value > threshold;
  else if (relation == ">=") c.passed = value >= threshold;
  else if (relation == "==") c.passed = value == threshold;
  else if (relation == "in") c.passed = value >= threshold && value <= upper;
  else if (relation == "true") c.passed = value != 0.0;
  return c;
}

struct HarperSample {
  PointSet ps;
  TBHamiltonian H;
  SpectralData spec;
};

HarperSample harper_sample(int nx, int ny, double flux) {
  HarperSample s{build_square_lattice(1.0, nx, ny), {}, {}};
  s.H = build_tb(s.ps, flux / 2.0);
  s.spec = eig_hermitian(s.H);
  return s;
}

Interval central_half(const Interval& gap) {
  return {gap.center() - 0.25 * gap.width(), gap.center() + 0.25 * gap.width()};
}

IndexReport bulk_kubo(const SpectralProjection& P, const PointSet& ps, double shift1 = 0.0, double shift2 = 0.0) {
  const Vec2 c = plaquette_center(ps);
  return kubo_chern(P, ps, {1, c.x() + shift1}, {2, c.y() + shift2});
}

// Criterion bodies fill `r.checks` and `r.detail`.

void landau_oracle(CriterionResult& r) {
  const AtomicWell free{0.0, 1.0};
  const double lambda = 10.0;
  const RadialGroundState gs = solve_radial_ground_state(free, lambda, 4000, 6.0);
  const double rel = std::abs(gs.e0_raw - lambda) / lambda;
  const std::vector<double> v = gs.values();
  const double norm = std::sqrt(lambda / (2.0 * kPi));
  double err2 = 0.0;
  for (std::size_t i = 0; i + 1 < gs.grid.size(); ++i) {
    auto f = [&](std::size_t k) {
      const double ex = norm * std::exp(-lambda * gs.grid[k] * gs.grid[k] / 4.0);
      const double d = v[k] - ex;
      return d * d * 2.0 * kPi * gs.grid[k];
    };
    err2 += 0.5 * (f(i) + f(i + 1)) * (gs.grid[i + 1] - gs.grid[i]);
  }
  const double l2 = std::sqrt(err2);
  r.checks.push_back(check("e0_relative_error", rel, "<", 1e-6));
  r.checks.push_back(check("profile_L2_error", l2, "<", 1e-6));
  r.detail = {{"lambda", lambda}, {"n_grid", gs.n_grid}, {"e0_raw", gs.e0_raw}, {"r_max", gs.r_max}};
}

void hopping_bounds(CriterionResult& r) {
  const AtomicWell well;
  const double a = 2.0 * well.r0 + 1.0;
  std::vector<double> lams{6, 8, 10, 12, 14}, rho;
  double im_worst = 0.0;
  for (double lam : lams) {
    const RadialGroundState gs = solve_radial_ground_state_auto(well, lam, a + 1.0);
    const HoppingValue h = hopping(gs, Vec2(a, 0.0));
    rho.push_back(std::abs(h.value));
    im_worst = std::max(im_worst, std::abs(h.value.imag()) / std::abs(h.value));
  }
  const HoppingBoundsFit fit = fit_hopping_bounds(lams, rho, a, well);
  r.checks.push_back(check("r_squared", fit.r_squared, ">", 0.99));
  r.checks.push_back(check("slope_within_bounds", fit.slope, "in", fit.slope_lo, fit.slope_hi));
  r.checks.push_back(check("im_over_abs", im_worst, "<", 1e-8));
  r.detail = {{"a", a},
              {"lambda", lams},
              {"rho_abs", rho},
              {"slope", fit.slope},
              {"slope_lo", fit.slope_lo},
              {"slope_hi", fit.slope_hi},
              {"gamma0_fit", fit.gamma0},
              {"C_fit", fit.C}};
}

void gramian_decay(CriterionResult& r) {
  const AtomicWell well;
  const double a = 2.0 * well.r0 + 1.0;
  const PointSet ps = build_square_lattice(a, 4, 4);
  std::vector<double> lams{8, 10, 12}, dev, resid;
  for (double lam : lams) {
    const RadialGroundState gs = solve_radial_ground_state_auto(well, lam, 8.0);
    const Gramian G = gramian(ps, gs);
    const OrthonormalizerM M = inverse_sqrt(G);
    dev.push_back(G.deviation_norm);
    resid.push_back(M.residual);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lams.size(); ++i) {
    const double y = std::log(dev[i]);
    sx += lams[i];
    sy += y;
    sxx += lams[i] * lams[i];
    sxy += lams[i] * y;
  }
  const double n = static_cast<double>(lams.size());
  const double c_fit = -(sxy - sx * sy / n) / (sxx - sx * sx / n);
  bool monotone = true;
  for (std::size_t i = 1; i < dev.size(); ++i) monotone = monotone && dev[i] < dev[i - 1];
  r.checks.push_back(check("c_fit", c_fit, ">", 0.0));
  r.checks.push_back(check("deviation_decreasing", monotone, "true", 0.0));
  r.checks.push_back(check("max_MGM_residual", *std::max_element(resid.begin(), resid.end()), "<", 1e-10));
  r.detail = {{"a", a}, {"lambda", lams}, {"deviation_norm", dev}, {"MGM_residual", resid}, {"c_fit", c_fit}};
}

void matrix_element_convergence(CriterionResult& r) {
  const AtomicWell well;
  const double a = 2.0 * well.r0 + 1.0;
  const double flux = 2.0 * kPi / 3.0;
  const double beta = flux / (2.0 * a * a);
  const PointSet ps = build_square_lattice(a, 3, 3);
  const MatrixXc T = build_tb(ps, beta).dense();
  std::vector<int> rs;
  std::vector<double> lams, dev_nn, nnn, dev_ortho;
  for (int k = 1; rs.size() < 2; ++k) {
    const double lam = admissible_lambda(beta, a, k);
    if (lam < 4.0) continue;
    rs.push_back(k);
    lams.push_back(lam);
  }
  for (double lam : lams) {
    const RadialGroundState gs = solve_radial_ground_state_auto(well, lam, 3.0 * a + 1.0);
    for (bool ortho : {false, true}) {
      const ReducedHamiltonian R = reduced_hamiltonian(ps, gs, ortho);
      double d = 0.0, beyond = 0.0;
      for (int i = 0; i < static_cast<int>(ps.size()); ++i)
        for (int j = 0; j < static_cast<int>(ps.size()); ++j) {
          if (i == j) continue;
          const double dist = (ps.points[i] - ps.points[j]).norm();
          if (std::abs(dist - a) < kNeighborTol * a) d = std::max(d, std::abs(R.matrix(i, j) - T(i, j)));
          else beyond = std::max(beyond, std::abs(R.matrix(i, j)));
        }
      if (ortho) {
        dev_ortho.push_back(d);
      } else {
        dev_nn.push_back(d);
        nnn.push_back(beyond);
      }
    }
  }
  r.checks.push_back(check("nn_deviation_decrease", dev_nn[1] - dev_nn[0], "<", 0.0));
  r.checks.push_back(check("nnn_over_rho_at_larger_lambda", nnn[1], "<", 0.1));
  r.detail = {{"a", a},
              {"beta", beta},
              {"r", rs},
              {"lambda", lams},
              {"nn_deviation", dev_nn},
              {"nn_deviation_orthonormalized", dev_ortho},
              {"nnn_over_rho", nnn}};
}

void bulk_chern(CriterionResult& r) {
  const double flux = 2.0 * kPi / 3.0;
  const Interval gap = harper_gap(1, 3, 0);
  const HarperSample s = harper_sample(40, 40, flux);
  const SpectralProjection P = fermi_projection(s.spec, gap.center());
  const IndexReport k = bulk_kubo(P, s.ps);
  const IndexReport f = flux_insertion_index(P, s.ps, flux_insertion_unitary(s.ps, plaquette_center(s.ps)));
  const int oracle = tknn_gap_chern(1, 3, 1);
  r.checks.push_back(check("kubo_minus_tknn", std::abs(k.value - oracle), "<=", 0.1));
  r.checks.push_back(check("kubo_imaginary", k.imaginary_part, "<", 1e-9));
  r.checks.push_back(check("flux_index_magnitude_agrees", std::abs(f.nearest_integer) == std::abs(k.nearest_integer),
                           "true", 0.0));
  r.checks.push_back(check("flux_index_determinate", !f.indeterminate, "true", 0.0));
  r.detail = {{"gap", {gap.lo, gap.hi}}, {"tknn", oracle}, {"kubo", to_json(k)}, {"flux_insertion", to_json(f)}};
}

void edge_conductance_bec(CriterionResult& r) {
  const double flux = 2.0 * kPi / 3.0;
  const Interval gap = harper_gap(1, 3, 0);
  const PointSet bulk = build_square_lattice(1.0, 40, 40), edge = build_square_lattice(1.0, 60, 30);
  const TBHamiltonian Hb = build_tb(bulk, flux / 2.0), He = build_tb(edge, flux / 2.0);
  const SmoothStep g(central_half(gap), SmoothStep::Kind::Fermi);
  const SmoothStep g2(central_half(gap), SmoothStep::Kind::Bump);
  const BecReport bec = bec_check(Hb, bulk, He, edge, gap, g);
  const SpectralData se = eig_hermitian(He);
  const IndexReport e2 = edge_conductance(He, edge, se, g2, {1, plaquette_center(edge).x()}, gap);
  r.checks.push_back(check("edge_minus_bulk", std::abs(bec.edge.value - bec.kubo.value), "<=", 0.1));
  r.checks.push_back(check("nearest_integers_equal", bec.edge.nearest_integer == bec.kubo.nearest_integer, "true", 0.0));
  r.checks.push_back(check("g_tilde_same_integer", e2.nearest_integer == bec.edge.nearest_integer, "true", 0.0));
  r.detail = {{"bec", to_json(bec)},
              {"edge_g_tilde", to_json(e2)},
              {"g_tilde_change", std::abs(e2.value - bec.edge.value)},
              {"delta", {g.delta().lo, g.delta().hi}}};
}

void edge_defect_decay(CriterionResult& r) {
  const double flux = 2.0 * kPi / 3.0;
  const Interval gap = harper_gap(1, 3, 0);
  const HarperSample s = harper_sample(60, 30, flux);
  const SmoothStep g(central_half(gap));
  const DecayProfile d = edge_projection_defect(s.ps, s.spec, g, Vec2(0.0, 1.0));
  r.checks.push_back(check("kappa", d.kappa, ">", 0.0));
  r.checks.push_back(check("defect_spectrum_min", d.spectrum_min, ">=", -0.25 - 1e-12));
  r.checks.push_back(check("defect_spectrum_max", d.spectrum_max, "<=", 1e-12));
  r.detail = {{"kappa", d.kappa},
              {"r_squared", d.r_squared},
              {"depth", d.depth},
              {"max_defect", d.max_value},
              {"hermiticity_defect", d.hermiticity_defect}};
}

void continuum_trend(CriterionResult& r) {
  const AtomicWell well;
  const double a_dw = 2.0 * well.r0 + 1.5;
  nlohmann::json dw = nlohmann::json::array();
  std::vector<double> excess, ratio;
  bool refine_ok = true;
  for (double lam : {4.0, 5.0, 6.0}) {
    const DoubleWellResult d = double_well_splitting(well, lam, a_dw);
    excess.push_back(std::abs(d.ratio_extrapolated - 1.0));
    ratio.push_back(d.ratio);
    refine_ok = refine_ok && d.refinement_ok;
    dw.push_back(to_json(d));
  }
  const double worst_step = std::max(excess[1] - excess[0], excess[2] - excess[1]);
  r.checks.push_back(check("ratio_at_lambda_6", ratio[2], "in", 0.5, 2.0));
  r.checks.push_back(check("refinement_change_below_2pct", refine_ok, "true", 0.0));
  r.checks.push_back(check("ratio_excess_decreasing", worst_step, "<", 0.0));

  const double a_p = 2.0 * well.r0 + 0.5;
  const double beta = (2.0 * kPi / 3.0) / (2.0 * a_p * a_p);
  const PointSet patch = build_square_lattice(a_p, 2, 2);
  std::vector<int> rs;
  std::vector<double> lams;
  for (int k = 1; rs.size() < 2; ++k) {
    const double lam = admissible_lambda(beta, a_p, k);
    if (lam < 4.0) continue;
    if (lam > kContinuumLambdaCeiling) break;
    rs.push_back(k);
    lams.push_back(lam);
  }
  nlohmann::json sp = nlohmann::json::array();
  std::vector<double> dev;
  double bound = 0.0;
  for (double lam : lams) {
    const ScaledSpectrumReport s = scaled_spectrum_compare(patch, well, lam, beta);
    dev.push_back(s.deviation);
    bound = std::max(bound, s.cluster_bound);
    sp.push_back(to_json(s));
  }
  r.checks.push_back(check("patch_deviation_decrease", dev.size() == 2 ? dev[1] - dev[0] : 1.0, "<", 0.0));
  r.checks.push_back(check("cluster_bound", bound, "<=", 6.0));
  r.detail = {{"double_well_a", a_dw},
              {"ratio_excess_extrapolated", excess},
              {"double_well", dw},
              {"patch_a", a_p},
              {"patch_beta", beta},
              {"patch_r", rs},
              {"patch_deviation", dev},
              {"patch", sp}};
}

double max_spectrum_gap(const Eigen::VectorXd& x, const Eigen::VectorXd& y) { return (x - y).cwiseAbs().maxCoeff(); }

void property_suites(CriterionResult& r) {
  const AtomicWell well;
  // Hermiticity of every operator family.
  {
    const PointSet sq = build_square_lattice(1.0, 12, 12);
    const double tb = linalg::hermiticity_defect(build_tb(sq, 0.41).dense());
    const PointSet patch = build_square_lattice(3.0, 3, 3);
    const RadialGroundState gs = solve_radial_ground_state_auto(well, 8.0, 10.0);
    const double gd = linalg::hermiticity_defect(gramian(patch, gs).matrix);
    const double rd = linalg::hermiticity_defect(reduced_hamiltonian(patch, gs, true).matrix);
    const PointSet one = PointSet::from_points({Vec2(0.0, 0.0)}, "single well");
    const double h = max_grid_step(one, well, 4.0);
    const ContinuumHamiltonian C =
        build_continuum_hamiltonian(one, well, 4.0, make_grid(one, well, 4.0, h), 0.0, 4);
    const SparseC diff = C.op - SparseC(C.op.adjoint());
    double cd = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
      for (SparseC::InnerIterator it(diff, k); it; ++it) cd = std::max(cd, std::abs(it.value()));
    const cplx link = cell_link_product(C, C.grid.nx / 2, C.grid.ny / 3);
    const double phase_err = std::abs(link - std::exp(-kI * 4.0 * h * h));
    r.checks.push_back(check("hermiticity_tb", tb, "<=", 1e-12));
    r.checks.push_back(check("hermiticity_gramian", gd, "<=", 1e-12));
    r.checks.push_back(check("hermiticity_reduced", rd, "<=", 1e-12));
    r.checks.push_back(check("hermiticity_continuum", cd / C.norm_bound, "<=", 1e-12));
    r.checks.push_back(check("continuum_cell_phase", phase_err, "<=", 1e-12));
  }
  // Gauge covariance and plaquette flux on a square sample.
  {
    const double a = 1.3, beta = 0.37;
    const int n = 12;
    const PointSet ps = build_square_lattice(a, n, n);
    const TBHamiltonian H = build_tb(ps, beta);
    const MatrixXc D = H.dense();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    Eigen::VectorXd chi(ps.size());
    for (Eigen::Index i = 0; i < chi.size(); ++i) chi(i) = u(rng);
    const MatrixXc G = gauge_transform(D, chi);
    const double spec_gap =
        max_spectrum_gap(eig_hermitian(D, -1, false).eigenvalues, eig_hermitian(G, -1, false).eigenvalues);
    double plaq = 0.0, plaq_gauge = 0.0;
    const cplx expected = std::exp(kI * 2.0 * beta * a * a);
    for (int j = 0; j + 1 < n; ++j)
      for (int i = 0; i + 1 < n; ++i) {
        const std::vector<int> cyc{j * n + i, j * n + i + 1, (j + 1) * n + i + 1, (j + 1) * n + i};
        plaq = std::max(plaq, std::abs(loop_phase(H, cyc) - expected));
        cplx prod{1.0, 0.0};
        for (int k = 0; k < 4; ++k) prod *= G(cyc[(k + 1) % 4], cyc[k]);
        plaq_gauge = std::max(plaq_gauge, std::abs(prod - expected));
      }
    r.checks.push_back(check("gauge_spectrum", spec_gap, "<=", 1e-10));
    r.checks.push_back(check("plaquette_flux", plaq, "<=", 1e-12));
    r.checks.push_back(check("plaquette_flux_gauged", plaq_gauge, "<=", 1e-12));
  }
  // Kubo properties on the 40 x 40 Harper sample at flux 2 pi / 3.
  {
    const double flux = 2.0 * kPi / 3.0;
    const Interval g1 = harper_gap(1, 3, 0), g2 = harper_gap(1, 3, 1);
    const HarperSample s = harper_sample(40, 40, flux);
    const HarperSample m = harper_sample(40, 40, -flux);
    const SpectralProjection P = fermi_projection(s.spec, g1.center());
    const IndexReport base = bulk_kubo(P, s.ps);
    const double shift = std::max({std::abs(bulk_kubo(P, s.ps, 1.0, 0.0).value - base.value),
                                   std::abs(bulk_kubo(P, s.ps, 0.0, 1.0).value - base.value),
                                   std::abs(bulk_kubo(P, s.ps, -1.0, -1.0).value - base.value)});
    const IndexReport mirrored = bulk_kubo(fermi_projection(m.spec, g1.center()), m.ps);
    const double top = s.spec.eigenvalues(s.spec.size() - 1) + 1.0;
    const double c1 = base.value;
    const double c2 = bulk_kubo(spectral_projection(s.spec, {g1.center(), g2.center()}), s.ps).value;
    const double c3 = bulk_kubo(spectral_projection(s.spec, {g2.center(), top}), s.ps).value;
    r.checks.push_back(check("kubo_switch_shift", shift, "<", 0.02));
    r.checks.push_back(check("kubo_beta_antisymmetry", std::abs(base.value + mirrored.value), "<", 0.02));
    r.checks.push_back(check("band_chern_sum", std::abs(c1 + c2 + c3), "<", 0.3));
    r.detail["band_cherns"] = {c1, c2, c3};
    r.detail["kubo"] = base.value;
    r.detail["kubo_reversed"] = mirrored.value;
  }
}

}  // namespace

int tknn_gap_chern(int p, int q, int r) {
  if (q < 1 || r < 0 || r > q) throw ArgumentError("TKNN gap needs q >= 1 and 0 <= r <= q");
  for (int t = -q / 2; t <= q / 2; ++t) {
    const int rem = ((r - p * t) % q + q) % q;
    if (rem == 0) return t;
  }
  throw ArgumentError("Diophantine equation for the gap has no solution");
}

const std::vector<int>& acceptance_criteria() {
  static const std::vector<int> ids{1, 2, 3, 4, 5, 6, 7, 8, 9};
  return ids;
}

double criterion_time_limit(int id) {
  switch (id) {
    case 1: return 5.0;
    case 2: return 120.0;
    case 3: return 120.0;
    case 4: return 600.0;
    case 5: return 180.0;
    case 6: return 300.0;
    case 7: return 120.0;
    case 8: return 1200.0;
    case 9: return 600.0;
    default: throw ArgumentError("unknown acceptance criterion " + std::to_string(id));
  }
}

std::string criterion_title(int id) {
  switch (id) {
    case 1: return "Landau oracle";
    case 2: return "Hopping bounds";
    case 3: return "Gramian decay";
    case 4: return "Matrix-element convergence";
    case 5: return "Bulk Chern";
    case 6: return "Edge conductance and bulk-edge correspondence";
    case 7: return "Edge-Hamiltonian defect decay";
    case 8: return "Continuum reduction trend";
    case 9: return "Property suites";
    default: throw ArgumentError("unknown acceptance criterion " + std::to_string(id));
  }
}

CriterionResult run_criterion(int id) {
  CriterionResult r;
  r.id = id;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.title = criterion_title(id);
    r.time_limit = criterion_time_limit(id);
    switch (id) {
      case 1: landau_oracle(r); break;
      case 2: hopping_bounds(r); break;
      case 3: gramian_decay(r); break;
      case 4: matrix_element_convergence(r); break;
      case 5: bulk_chern(r); break;
      case 6: edge_conductance_bec(r); break;
      case 7: edge_defect_decay(r); break;
      case 8: continuum_trend(r); break;
      case 9: property_suites(r); break;
    }
  } catch (const std::exception& e) {
    r.errored = true;
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!r.errored) r.checks.push_back(check("runtime_s", r.seconds, "<", r.time_limit));
  r.passed = !r.errored && !r.checks.empty();
  for (const Check& c : r.checks) r.passed = r.passed && c.passed;
  return r;
}

std::string summary_line(const CriterionResult& r) {
  std::ostringstream os;
  os << "criterion " << r.id << " [" << (r.passed ? "PASS" : (r.errored ? "ERROR" : "FAIL")) << "] " << r.title;
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.1f s, limit %.0f s)", r.seconds, r.time_limit);
  os << buf;
  if (r.errored) os << ": " << r.error;
  for (const Check& c : r.checks)
    if (!c.passed) {
      std::snprintf(buf, sizeof buf, "%.3e", c.value);
      os << "; failed " << c.name << " = " << buf;
    }
  return os.str();
}

nlohmann::json to_json(const CriterionResult& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const Check& c : r.checks)
    checks.push_back(
        {{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"threshold", c.threshold},
                      {"upper", std::isfinite(c.upper) ? nlohmann::json(c.upper) : nlohmann::json()}, {"passed", c.passed}});
  return {{"id", r.id},
          {"title", r.title},
          {"passed", r.passed},
          {"errored", r.errored},
          {"error", r.error},
          {"seconds", r.seconds},
          {"time_limit", r.time_limit},
          {"checks", checks},
          {"detail", r.detail}};
}

}  // namespace magtb
