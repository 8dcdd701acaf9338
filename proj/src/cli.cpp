#include "magtb/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <sstream>

#include "magtb/acceptance.hpp"
#include "magtb/artifacts.hpp"
#include "magtb/atomic.hpp"
#include "magtb/continuum.hpp"
#include "magtb/geometry.hpp"
#include "magtb/overlaps.hpp"
#include "magtb/spectral.hpp"
#include "magtb/tbmodel.hpp"
#include "magtb/topology.hpp"

namespace magtb {

const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> cmds{"validate", "atomic", "hopping", "gramian", "tb",    "butterfly",
                                             "chern",    "edge",   "bec",     "reduce",  "acceptance"};
  return cmds;
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"lattice", c.lattice},
          {"a", c.a},
          {"nx", c.nx},
          {"ny", c.ny},
          {"lambda", c.lambda},
          {"lambdas", c.lambdas},
          {"flux", c.flux},
          {"beta", c.beta},
          {"vmin", c.vmin},
          {"r0", c.r0},
          {"profile", c.profile},
          {"size", c.size},
          {"gap", c.gap},
          {"seed", c.seed},
          {"out", c.out},
          {"qmax", c.qmax},
          {"disorder_c", c.disorder_c},
          {"displace_lambda", c.displace_lambda},
          {"edge_nx", c.edge_nx},
          {"edge_ny", c.edge_ny},
          {"wells", c.wells},
          {"admissible_r", c.admissible_r},
          {"criteria", c.criteria},
          {"suite", c.suite}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ArgumentError("config must be a JSON object");
  RunConfig c;
  const nlohmann::json known = to_json(c);
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ArgumentError("unknown config key '" + key + "'");
    (void)value;
  }
  auto get = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const nlohmann::json::exception&) {
      throw ArgumentError(std::string("config key '") + key + "' has the wrong type");
    }
  };
  get("command", c.command);
  get("lattice", c.lattice);
  get("a", c.a);
  get("nx", c.nx);
  get("ny", c.ny);
  get("lambda", c.lambda);
  get("lambdas", c.lambdas);
  get("flux", c.flux);
  get("beta", c.beta);
  get("vmin", c.vmin);
  get("r0", c.r0);
  get("profile", c.profile);
  get("size", c.size);
  get("gap", c.gap);
  get("seed", c.seed);
  get("out", c.out);
  get("qmax", c.qmax);
  get("disorder_c", c.disorder_c);
  get("displace_lambda", c.displace_lambda);
  get("edge_nx", c.edge_nx);
  get("edge_ny", c.edge_ny);
  get("wells", c.wells);
  get("admissible_r", c.admissible_r);
  get("criteria", c.criteria);
  get("suite", c.suite);
  return c;
}

std::string config_hash(const RunConfig& c) {
  nlohmann::json j = to_json(c);
  j.erase("out");
  return hex64(fnv1a64(j.dump()));
}

std::pair<int, int> parse_flux(const std::string& pq) {
  const auto slash = pq.find('/');
  if (slash == std::string::npos) throw ArgumentError("flux must be written p/q, got '" + pq + "'");
  std::size_t used_p = 0, used_q = 0;
  int p = 0, q = 0;
  try {
    p = std::stoi(pq.substr(0, slash), &used_p);
    q = std::stoi(pq.substr(slash + 1), &used_q);
  } catch (const std::exception&) {
    throw ArgumentError("flux must be written p/q, got '" + pq + "'");
  }
  if (used_p != slash || used_q != pq.size() - slash - 1 || q <= 0)
    throw ArgumentError("flux must be written p/q with q > 0, got '" + pq + "'");
  return {p, q};
}

double resolved_beta(const RunConfig& c) {
  if (c.flux.empty()) return c.beta;
  const auto [p, q] = parse_flux(c.flux);
  return (2.0 * kPi * p / q) / (2.0 * c.a * c.a);
}

namespace {

struct Context {
  const RunConfig& cfg;
  std::filesystem::path dir;
  ArtifactMeta meta;
  RunOutcome out;

  void csv(const std::string& name, const std::string& body) {
    write_text(dir / name, with_csv_meta(meta, body));
    out.artifacts.push_back(name);
  }
  void json(const std::string& name, const nlohmann::json& data) {
    write_text(dir / name, with_json_meta(meta, data));
    out.artifacts.push_back(name);
  }
  void raw(const std::string& name, const std::string& text) {
    write_text(dir / name, text);
    out.artifacts.push_back(name);
  }
  void fail_check(const std::string& why) {
    out.exit_code = kExitCheckFailed;
    if (!out.message.empty()) out.message += "; ";
    out.message += why;
  }
};

AtomicWell make_well(const RunConfig& c) {
  AtomicWell w;
  w.v_min = c.vmin;
  w.r0 = c.r0;
  w.profile = well_profile_from_string(c.profile);
  w.validate();
  return w;
}

PointSet make_lattice(const RunConfig& c, int nx, int ny) {
  PointSet ps;
  if (c.lattice == "square") ps = build_square_lattice(c.a, nx, ny);
  else if (c.lattice == "honeycomb") ps = build_honeycomb(c.a, nx, ny);
  else throw ArgumentError("unknown lattice '" + c.lattice + "' (square or honeycomb)");
  if (c.displace_lambda > 0.0) ps = random_displacement(ps, c.displace_lambda, DisplacementSeed::draw(c.seed, ps.size()));
  return ps;
}

std::pair<int, int> harper_flux(const RunConfig& c) {
  if (c.flux.empty()) throw ArgumentError(c.command + " needs --flux p/q");
  if (c.lattice != "square") throw ArgumentError(c.command + " runs the Harper model on the square lattice");
  return parse_flux(c.flux);
}

Interval harper_window(const RunConfig& c, int p, int q) {
  if (c.gap < 1 || c.gap >= q) throw ArgumentError("--gap must lie in [1, q-1]");
  return harper_gap(p, q, c.gap - 1);
}

Interval central_half(const Interval& gap) {
  return {gap.center() - 0.25 * gap.width(), gap.center() + 0.25 * gap.width()};
}

void cmd_validate(Context& x) {
  const PointSet ps = make_lattice(x.cfg, x.cfg.nx, x.cfg.ny);
  const ValidationReport rep = validate_assumptions(ps);
  x.json("pointset.json", to_json(ps));
  x.csv("bonds.csv", bonds_csv(ps, neighbor_graph(ps)));
  x.json("validate.json", to_json(rep));
  x.out.summary = to_json(rep);
  if (!rep.passes) x.fail_check("point set violates the lattice assumptions");
}

void cmd_atomic(Context& x) {
  const AtomicWell w = make_well(x.cfg);
  const RadialGroundState gs = solve_radial_ground_state_auto(w, x.cfg.lambda, 8.0 / std::sqrt(x.cfg.lambda) + 2.0);
  const DecayCertificate cert = gaussian_decay_certificate(gs);
  const bool sector = w.oracle_mode() || check_sector_minimum(w, x.cfg.lambda, -3, 3);
  nlohmann::json data = radial_header(gs);
  data["decay_certificate"] = {{"C_fit", cert.C_fit}, {"rate_fit", cert.rate_fit}, {"passes", cert.passes}};
  data["sector_minimum"] = sector;
  x.csv("atomic.csv", radial_csv(gs));
  x.json("atomic.json", data);
  x.out.summary = {{"e0_raw", gs.e0_raw}, {"gap", gs.gap}, {"decay_passes", cert.passes}, {"sector_minimum", sector}};
  if (!(gs.gap > 0.0)) x.fail_check("non-positive spectral gap");
  if (!cert.passes) x.fail_check("Gaussian decay certificate failed");
  if (!sector) x.fail_check("m = 0 sector is not the ground-state sector");
}

void cmd_hopping(Context& x) {
  const AtomicWell w = make_well(x.cfg);
  const double a = x.cfg.a;
  if (!(a > 2.0 * w.r0)) throw PreconditionError("hopping needs --a > 2 r0");
  std::vector<double> rho;
  nlohmann::json values = nlohmann::json::array();
  double im = 0.0;
  for (double lam : x.cfg.lambdas) {
    const RadialGroundState gs = solve_radial_ground_state_auto(w, lam, a + 1.0);
    const HoppingValue h = hopping(gs, Vec2(a, 0.0));
    rho.push_back(std::abs(h.value));
    im = std::max(im, std::abs(h.value.imag()) / std::abs(h.value));
    values.push_back(to_json(h));
  }
  nlohmann::json data = {{"a", a}, {"values", values}, {"im_over_abs", im}};
  if (rho.size() >= 2) {
    const HoppingBoundsFit fit = fit_hopping_bounds(x.cfg.lambdas, rho, a, w);
    data["fit"] = {{"slope", fit.slope},       {"intercept", fit.intercept}, {"r_squared", fit.r_squared},
                   {"slope_lo", fit.slope_lo}, {"slope_hi", fit.slope_hi},   {"slope_within", fit.slope_within},
                   {"gamma0", fit.gamma0},     {"C", fit.C}};
    x.csv("hopping_bounds.csv", hopping_bounds_csv(fit));
    if (!(fit.r_squared > 0.99)) x.fail_check("ln|rho| is not affine in lambda (R^2 <= 0.99)");
    if (!fit.slope_within) x.fail_check("fitted slope outside the hopping bounds");
  }
  if (!(im < 1e-8)) x.fail_check("imaginary part of rho above 1e-8 relative");
  x.json("hopping.json", data);
  x.out.summary = data;
}

void cmd_gramian(Context& x) {
  const AtomicWell w = make_well(x.cfg);
  const PointSet ps = make_lattice(x.cfg, x.cfg.nx, x.cfg.ny);
  const RadialGroundState gs = solve_radial_ground_state_auto(w, x.cfg.lambda, 8.0);
  const Gramian G = gramian(ps, gs);
  const OrthonormalizerM M = inverse_sqrt(G);
  const DecayFit fit = off_diagonal_decay(M.matrix, ps);
  const nlohmann::json data = {{"lambda", x.cfg.lambda},
                               {"deviation_norm", G.deviation_norm},
                               {"min_eigenvalue", G.min_eigenvalue},
                               {"MGM_residual", M.residual},
                               {"M_decay", {{"log_C", fit.log_C}, {"rate", fit.rate}, {"r_squared", fit.r_squared}}},
                               {"G", complex_matrix_json(G.matrix)},
                               {"M", complex_matrix_json(M.matrix)}};
  x.json("gramian.json", data);
  x.out.summary = {{"deviation_norm", G.deviation_norm}, {"MGM_residual", M.residual}};
  if (!(M.residual < 1e-10)) x.fail_check("M G M - Id residual above 1e-10");
}

void cmd_tb(Context& x) {
  const PointSet ps = make_lattice(x.cfg, x.cfg.nx, x.cfg.ny);
  const double beta = resolved_beta(x.cfg);
  TBHamiltonian H;
  if (x.cfg.disorder_c != 0.0) H = build_random_hopping(ps, beta, x.cfg.disorder_c);
  else if (x.cfg.lattice == "honeycomb") H = build_honeycomb_tb(ps, beta);
  else H = build_tb(ps, beta);
  const SpectralData s = eig_hermitian(H, -1, false);
  nlohmann::json data = tb_metadata(H);
  data["sites"] = H.size();
  data["spectrum_min"] = s.eigenvalues(0);
  data["spectrum_max"] = s.eigenvalues(s.size() - 1);
  x.csv("tb_coo.csv", coo_csv(H));
  x.json("tb.json", data);
  x.out.summary = data;
}

void cmd_butterfly(Context& x) {
  const auto rows = butterfly(x.cfg.size, x.cfg.size, x.cfg.qmax);
  nlohmann::json meta = to_json(x.meta);
  meta["size"] = x.cfg.size;
  meta["qmax"] = x.cfg.qmax;
  x.raw("butterfly.csv", butterfly_csv(rows, meta));
  x.out.summary = {{"rows", rows.size()}, {"fluxes", farey_fluxes(x.cfg.qmax).size()}};
}

void cmd_chern(Context& x) {
  const auto [p, q] = harper_flux(x.cfg);
  const Interval gap = harper_window(x.cfg, p, q);
  const double flux = 2.0 * kPi * p / q;
  const PointSet ps = build_square_lattice(1.0, x.cfg.size, x.cfg.size);
  const SpectralData spec = eig_hermitian(build_tb(ps, flux / 2.0));
  const SpectralProjection P = fermi_projection(spec, gap.center());
  const Vec2 c = plaquette_center(ps);
  const IndexReport k = kubo_chern(P, ps, {1, c.x()}, {2, c.y()});
  const IndexReport f = flux_insertion_index(P, ps, flux_insertion_unitary(ps, c));
  const int oracle = tknn_gap_chern(p, q, x.cfg.gap);
  const nlohmann::json data = {{"flux", x.cfg.flux},
                               {"gap", {gap.lo, gap.hi}},
                               {"mu", gap.center()},
                               {"nearest_integer", k.nearest_integer},
                               {"tknn", oracle},
                               {"kubo", to_json(k)},
                               {"flux_insertion", to_json(f)}};
  x.json("chern.json", data);
  x.out.summary = {{"kubo", k.value}, {"nearest_integer", k.nearest_integer}, {"flux_index", f.nearest_integer},
                   {"tknn", oracle}};
  if (k.nearest_integer != oracle) x.fail_check("Kubo Chern number differs from the TKNN value");
  if (std::abs(f.nearest_integer) != std::abs(k.nearest_integer) || f.indeterminate)
    x.fail_check("flux-insertion index does not match the Kubo value");
}

void cmd_edge(Context& x) {
  const auto [p, q] = harper_flux(x.cfg);
  const Interval gap = harper_window(x.cfg, p, q);
  const double flux = 2.0 * kPi * p / q;
  const PointSet ps = build_square_lattice(1.0, x.cfg.edge_nx, x.cfg.edge_ny);
  const TBHamiltonian H = build_tb(ps, flux / 2.0);
  const SpectralData spec = eig_hermitian(H);
  const SmoothStep g(central_half(gap));
  const SmoothStep g2(central_half(gap), SmoothStep::Kind::Bump);
  const SwitchFunction L1{1, plaquette_center(ps).x()};
  const IndexReport e = edge_conductance(H, ps, spec, g, L1, gap);
  const IndexReport e2 = edge_conductance(H, ps, spec, g2, L1, gap);
  const EdgeUnitaryReport u = edge_index_unitary(ps, spec, g, L1, gap);
  const DecayProfile d = edge_projection_defect(ps, spec, g, Vec2(0.0, 1.0));
  x.csv("edge_decay.csv", decay_profile_csv(d));
  const nlohmann::json data = {{"flux", x.cfg.flux},
                               {"delta", {g.delta().lo, g.delta().hi}},
                               {"edge_conductance", to_json(e)},
                               {"edge_conductance_bump", to_json(e2)},
                               {"edge_unitary", to_json(u.index)},
                               {"decay", {{"kappa", d.kappa}, {"r_squared", d.r_squared}, {"passes", d.passes}}}};
  x.json("edge.json", data);
  x.out.summary = {{"edge", e.value}, {"edge_bump", e2.value}, {"edge_unitary", u.index.nearest_integer},
                   {"kappa", d.kappa}};
  if (e.nearest_integer != e2.nearest_integer) x.fail_check("edge index changed under g -> g~");
  if (u.index.nearest_integer != e.nearest_integer || u.index.indeterminate)
    x.fail_check("edge unitary index differs from the edge conductance");
  if (!d.passes) x.fail_check("edge projection defect does not decay into the bulk");
}

void cmd_bec(Context& x) {
  const auto [p, q] = harper_flux(x.cfg);
  const Interval gap = harper_window(x.cfg, p, q);
  const double flux = 2.0 * kPi * p / q;
  const PointSet bulk = build_square_lattice(1.0, x.cfg.size, x.cfg.size);
  const PointSet edge = build_square_lattice(1.0, x.cfg.edge_nx, x.cfg.edge_ny);
  const BecReport r =
      bec_check(build_tb(bulk, flux / 2.0), bulk, build_tb(edge, flux / 2.0), edge, gap, SmoothStep(central_half(gap)));
  nlohmann::json data = to_json(r);
  data["tknn"] = tknn_gap_chern(p, q, x.cfg.gap);
  x.json("bec.json", data);
  x.out.summary = {{"kubo", r.kubo.nearest_integer},       {"flux_insertion", r.flux.nearest_integer},
                   {"edge", r.edge.nearest_integer},       {"edge_unitary", r.edge_unitary.nearest_integer},
                   {"max_disagreement", r.max_disagreement}, {"consistent", r.consistent}};
  if (!r.consistent) x.fail_check("bulk and edge indices disagree");
}

void cmd_reduce(Context& x) {
  const AtomicWell w = make_well(x.cfg);
  const double a = x.cfg.a;
  if (x.cfg.wells == 2) {
    const DoubleWellResult d = double_well_splitting(w, x.cfg.lambda, a);
    x.json("reduce.json", to_json(d));
    x.json("grid.json", to_json(make_grid(PointSet::from_points({Vec2(0, 0), Vec2(a, 0)}, "double well"), w,
                                          x.cfg.lambda, d.grids.back().h)));
    const auto& e = d.grids.back().energies;
    x.csv("continuum_eigen.csv", continuum_eigen_csv({x.cfg.lambda}, {{e[0], e[1]}}, {d.rho}));
    x.out.summary = {{"s", d.s}, {"ratio", d.ratio}, {"ratio_extrapolated", d.ratio_extrapolated},
                     {"refinement_change", d.refinement_change}};
    if (!(d.ratio >= 0.5 && d.ratio <= 2.0)) x.fail_check("splitting ratio outside [0.5, 2]");
    if (!d.refinement_ok) x.fail_check("grid refinement changed s by 2% or more");
    return;
  }
  PointSet patch;
  if (x.cfg.wells == 1) patch = PointSet::from_points({Vec2(0, 0)}, "single well");
  else if (x.cfg.wells == 4) patch = build_square_lattice(a, 2, 2);
  else throw ArgumentError("--wells must be 1, 2 or 4");
  const double beta = resolved_beta(x.cfg);
  const double lam = x.cfg.admissible_r > 0 ? admissible_lambda(beta, a, x.cfg.admissible_r) : x.cfg.lambda;
  const ScaledSpectrumReport s = scaled_spectrum_compare(patch, w, lam, beta);
  x.json("reduce.json", to_json(s));
  x.json("grid.json", to_json(make_grid(patch, w, lam, s.grids.back().h)));
  std::vector<double> e = s.grids.back().differences;
  x.csv("continuum_eigen.csv", continuum_eigen_csv({lam}, {e}, {s.rho}));
  x.out.summary = {{"lambda", lam}, {"deviation", s.deviation}, {"cluster_bound", s.cluster_bound}};
  if (!(s.cluster_bound <= 6.0)) x.fail_check("low-lying spectrum not clustered within 6 |rho|");
}

void cmd_acceptance(Context& x) {
  nlohmann::json results = nlohmann::json::array();
  for (int id : x.cfg.criteria) {
    const CriterionResult r = run_criterion(id);
    std::cout << summary_line(r) << std::endl;
    results.push_back(to_json(r));
    if (r.errored) throw Error("criterion " + std::to_string(id) + " errored: " + r.error);
    if (!r.passed) x.fail_check("criterion " + std::to_string(id) + " failed");
  }
  x.json("acceptance.json", results);
  x.out.summary = {{"criteria", x.cfg.criteria}};
}

}  // namespace

RunOutcome run(const RunConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  Context x{c, std::filesystem::path(c.out), {c.command, config_hash(c)}, {}};
  try {
    if (c.command == "validate") cmd_validate(x);
    else if (c.command == "atomic") cmd_atomic(x);
    else if (c.command == "hopping") cmd_hopping(x);
    else if (c.command == "gramian") cmd_gramian(x);
    else if (c.command == "tb") cmd_tb(x);
    else if (c.command == "butterfly") cmd_butterfly(x);
    else if (c.command == "chern") cmd_chern(x);
    else if (c.command == "edge") cmd_edge(x);
    else if (c.command == "bec") cmd_bec(x);
    else if (c.command == "reduce") cmd_reduce(x);
    else if (c.command == "acceptance") cmd_acceptance(x);
    else throw ArgumentError("unknown command '" + c.command + "'");
  } catch (const std::exception& e) {
    x.out.exit_code = kExitError;
    x.out.message = e.what();
    std::cerr << "magtb " << c.command << ": error: " << e.what() << std::endl;
  }
  if (x.out.exit_code == kExitCheckFailed) std::cerr << "magtb " << c.command << ": check failed: " << x.out.message << std::endl;
  if (x.out.exit_code != kExitError || !x.out.artifacts.empty()) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const nlohmann::json manifest = {{"command", c.command},       {"config", to_json(c)},
                                     {"config_hash", x.meta.config_hash}, {"version", kVersion},
                                     {"timestamp", utc_timestamp()},  {"seconds", secs},
                                     {"exit_code", x.out.exit_code}, {"artifacts", x.out.artifacts},
                                     {"summary", x.out.summary},      {"message", x.out.message}};
    try {
      write_text(x.dir / "manifest.json", manifest.dump(2) + "\n");
    } catch (const std::exception& e) {
      std::cerr << "magtb " << c.command << ": error: " << e.what() << std::endl;
      x.out.exit_code = kExitError;
    }
  }
  return x.out;
}

std::string SuiteSummary::table() const {
  std::ostringstream os;
  std::size_t w = 4;
  for (const auto& c : cases) w = std::max(w, c.name.size());
  char buf[64];
  os << "case" << std::string(w - 4 + 2, ' ') << "status  seconds\n";
  for (const auto& c : cases) {
    std::snprintf(buf, sizeof buf, "%-6s  %7.1f", c.status.c_str(), c.seconds);
    os << c.name << std::string(w - c.name.size() + 2, ' ') << buf;
    if (!c.message.empty()) os << "  " << c.message;
    os << '\n';
  }
  const auto passed = std::count_if(cases.begin(), cases.end(), [](const SuiteCase& c) { return c.status == "pass"; });
  os << passed << "/" << cases.size() << " passed\n";
  return os.str();
}

nlohmann::json default_suite() {
  nlohmann::json cases = nlohmann::json::array();
  for (int id : acceptance_criteria()) cases.push_back({{"name", "criterion-" + std::to_string(id)}, {"criterion", id}});
  return {{"cases", cases}};
}

SuiteSummary reproduce_all(const nlohmann::json& suite, const std::filesystem::path& out_dir) {
  SuiteSummary s;
  if (!suite.is_object() || !suite.contains("cases") || !suite.at("cases").is_array())
    throw ArgumentError("suite must be an object with a \"cases\" array");
  int index = 0;
  for (const auto& item : suite.at("cases")) {
    SuiteCase c;
    c.name = item.is_object() && item.contains("name") && item.at("name").is_string()
                 ? item.at("name").get<std::string>()
                 : "case-" + std::to_string(index);
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (!item.is_object()) throw ArgumentError("suite case is not an object");
      if (item.contains("criterion")) {
        const CriterionResult r = run_criterion(item.at("criterion").get<int>());
        std::cout << summary_line(r) << std::endl;
        c.exit_code = r.errored ? kExitError : (r.passed ? kExitOk : kExitCheckFailed);
        if (r.errored) c.message = r.error;
        write_text(out_dir / c.name / "criterion.json", to_json(r).dump(2) + "\n");
      } else if (item.contains("config")) {
        RunConfig cfg = run_config_from_json(item.at("config"));
        cfg.out = (out_dir / c.name).string();
        const RunOutcome o = run(cfg);
        c.exit_code = o.exit_code;
        c.message = o.message;
      } else {
        throw ArgumentError("suite case needs \"criterion\" or \"config\"");
      }
    } catch (const std::exception& e) {
      c.exit_code = kExitError;
      c.message = e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.status = c.exit_code == kExitOk ? "pass" : (c.exit_code == kExitCheckFailed ? "fail" : "error");
    s.cases.push_back(c);
  }
  const bool any_error = std::any_of(s.cases.begin(), s.cases.end(), [](const SuiteCase& c) { return c.status == "error"; });
  const bool any_fail = std::any_of(s.cases.begin(), s.cases.end(), [](const SuiteCase& c) { return c.status == "fail"; });
  s.exit_code = any_error ? kExitError : (any_fail ? kExitCheckFailed : kExitOk);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : s.cases)
    rows.push_back({{"name", c.name}, {"status", c.status}, {"exit_code", c.exit_code}, {"seconds", c.seconds},
                    {"message", c.message}});
  write_text(out_dir / "reproduce_summary.json",
             nlohmann::json({{"cases", rows}, {"exit_code", s.exit_code}}).dump(2) + "\n");
  return s;
}

SuiteSummary reproduce_all(const std::filesystem::path& suite_path, const std::filesystem::path& out_dir) {
  nlohmann::json suite;
  try {
    suite = nlohmann::json::parse(read_text(suite_path));
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError("suite " + suite_path.string() + " is not valid JSON: " + e.what());
  }
  return reproduce_all(suite, out_dir);
}

}  // namespace magtb
