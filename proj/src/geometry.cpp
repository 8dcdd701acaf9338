#include "magtb/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace magtb {

namespace {

void pairwise_spacings(const std::vector<Vec2>& pts, double& a, double& b) {
  a = kNan;
  b = kNan;
  const std::size_t n = pts.size();
  if (n < 2) return;
  double dmin2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dmin2 = std::min(dmin2, (pts[i] - pts[j]).squaredNorm());
  a = std::sqrt(dmin2);
  const double thresh = a * (1.0 + kNeighborTol);
  double b2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d2 = (pts[i] - pts[j]).squaredNorm();
      if (std::sqrt(d2) > thresh) b2 = std::min(b2, d2);
    }
  if (std::isfinite(b2)) b = std::sqrt(b2);
}

double uniform01(std::mt19937_64& gen) {
  // 53 random mantissa bits; identical on every platform, unlike std::uniform_real_distribution.
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

PointSet PointSet::from_points(std::vector<Vec2> pts, std::string label, std::vector<int> sublattice) {
  if (!sublattice.empty() && sublattice.size() != pts.size())
    throw ArgumentError("sublattice tags must match the number of points");
  PointSet ps;
  ps.points = std::move(pts);
  ps.label = std::move(label);
  ps.sublattice = std::move(sublattice);
  pairwise_spacings(ps.points, ps.a, ps.b_nnn);
  return ps;
}

NeighborGraph neighbor_graph(const PointSet& ps, double cutoff_factor) {
  NeighborGraph g;
  g.a = ps.a;
  g.cutoff = cutoff_factor * ps.a;
  if (!(ps.a > 0.0)) return g;
  const double nn_hi = ps.a * (1.0 + kNeighborTol);
  const double nn_lo = ps.a * (1.0 - kNeighborTol);
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      const double d = (ps.points[i] - ps.points[j]).norm();
      if (d >= nn_lo && d <= nn_hi)
        g.pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
      else if (d > nn_hi && d <= g.cutoff * (1.0 + kNeighborTol))
        g.beyond.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  return g;
}

DisplacementSeed DisplacementSeed::draw(std::uint64_t seed, std::size_t n) {
  DisplacementSeed s;
  s.rng_seed = seed;
  std::mt19937_64 gen(seed);
  s.t_amplitudes.resize(n);
  s.angles.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    s.t_amplitudes[k] = uniform01(gen);
    s.angles[k] = 2.0 * kPi * uniform01(gen);
  }
  return s;
}

PointSet build_square_lattice(double a, int nx, int ny) {
  if (!(a > 0.0) || nx < 1 || ny < 1) throw ArgumentError("square lattice needs a > 0 and nx, ny >= 1");
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) pts.emplace_back(a * i, a * j);
  std::ostringstream label;
  label << "square a=" << a << " " << nx << "x" << ny;
  return PointSet::from_points(std::move(pts), label.str());
}

PointSet build_honeycomb(double a, int n1, int n2) {
  if (!(a > 0.0) || n1 < 1 || n2 < 1) throw ArgumentError("honeycomb needs a > 0 and n1, n2 >= 1");
  const double s3 = std::sqrt(3.0);
  const Vec2 v1(s3 / 2.0, 0.5), v2(s3 / 2.0, -0.5), vB(1.0 / s3, 0.0);
  std::vector<Vec2> pts;
  std::vector<int> sub;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      const Vec2 cell = a * (i * v1 + j * v2);
      pts.push_back(cell);
      sub.push_back(0);
      pts.push_back(cell + a * vB);
      sub.push_back(1);
    }
  std::ostringstream label;
  label << "honeycomb a=" << a << " " << n1 << "x" << n2;
  return PointSet::from_points(std::move(pts), label.str(), std::move(sub));
}

PointSet truncate_half_plane(const PointSet& ps, int axis, double threshold) {
  if (axis != 1 && axis != 2) throw ArgumentError("axis must be 1 or 2");
  const double slack = 1e-12 * std::max(1.0, std::abs(threshold));
  std::vector<Vec2> kept;
  std::vector<int> sub;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (ps.points[k][axis - 1] >= threshold - slack) {
      kept.push_back(ps.points[k]);
      if (!ps.sublattice.empty()) sub.push_back(ps.sublattice[k]);
    }
  }
  if (kept.empty()) throw EmptySetError("half-plane truncation removed every point");
  std::ostringstream label;
  label << ps.label << " | x" << axis << ">=" << threshold;
  return PointSet::from_points(std::move(kept), label.str(), std::move(sub));
}

double bond_epsilon(const Vec2& n, const Vec2& m, double t_n, double theta_n, double t_m, double theta_m) {
  const Vec2 e = (m - n).normalized();
  const Vec2 un(std::cos(theta_n), std::sin(theta_n));
  const Vec2 um(std::cos(theta_m), std::sin(theta_m));
  return 2.0 * e.dot(t_m * um - t_n * un);
}

PointSet random_displacement(const PointSet& ps, double lambda, const DisplacementSeed& seed_in) {
  if (!(lambda > 4.0)) throw PreconditionError("random displacement needs lambda > 4");
  DisplacementSeed seed = seed_in;
  if (seed.t_amplitudes.empty() && seed.angles.empty()) seed = DisplacementSeed::draw(seed_in.rng_seed, ps.size());
  if (seed.t_amplitudes.size() != ps.size() || seed.angles.size() != ps.size())
    throw ArgumentError("displacement draws must match the number of sites");
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (seed.t_amplitudes[k] < 0.0 || seed.t_amplitudes[k] > 1.0) throw ArgumentError("t must lie in [0,1]");
    if (seed.angles[k] < 0.0 || seed.angles[k] >= 2.0 * kPi) throw ArgumentError("theta must lie in [0,2pi)");
  }

  const double step = ps.a / lambda;
  std::vector<Vec2> moved(ps.size());
  for (std::size_t k = 0; k < ps.size(); ++k)
    moved[k] = ps.points[k] + step * seed.t_amplitudes[k] * Vec2(std::cos(seed.angles[k]), std::sin(seed.angles[k]));

  Disorder dis;
  dis.reference = ps.points;
  dis.reference_a = ps.a;
  dis.lambda = lambda;
  dis.seed = seed.rng_seed;
  dis.t = seed.t_amplitudes;
  dis.theta = seed.angles;
  for (const auto& [i, j] : neighbor_graph(ps).pairs)
    dis.bonds.push_back({i, j,
                         bond_epsilon(ps.points[i], ps.points[j], dis.t[i], dis.theta[i], dis.t[j], dis.theta[j])});

  std::ostringstream label;
  label << ps.label << " | displaced lambda=" << lambda << " seed=" << seed.rng_seed;
  PointSet out = PointSet::from_points(std::move(moved), label.str(), ps.sublattice);
  out.disorder = std::move(dis);
  return out;
}

ValidationReport validate_assumptions(const PointSet& ps) {
  ValidationReport r;
  r.n_points = ps.size();
  if (ps.size() < 2) {
    r.distinct = true;
    r.passes = ps.size() == 1;
    if (ps.size() == 1) r.gaussian_sup = 1.0;
    return r;
  }
  r.nn_defined = true;
  r.a = ps.a;
  r.b_nnn = ps.b_nnn;
  r.distinct = ps.a > 0.0;
  r.a_positive = ps.a > 0.0;
  // A set in which every pair is a nearest-neighbour pair has no b to violate.
  r.b_gt_a = std::isnan(ps.b_nnn) ? r.a_positive : ps.b_nnn > ps.a;

  std::vector<Vec2> probes = ps.points;
  if (r.a_positive)
    for (const auto& [i, j] : neighbor_graph(ps, 1.0).pairs) probes.push_back(0.5 * (ps.points[i] + ps.points[j]));
  r.gaussian_sup = gaussian_sum_sup(ps, 1.0, probes);
  r.passes = r.distinct && r.a_positive && r.b_gt_a && std::isfinite(r.gaussian_sup);
  return r;
}

double gaussian_sum_sup(const PointSet& ps, double lambda, const std::vector<Vec2>& probes) {
  if (!(lambda >= 1.0)) throw PreconditionError("gaussian_sum_sup needs lambda >= 1");
  double best = 0.0;
  for (const Vec2& x : probes) {
    double s = 0.0;
    for (const Vec2& m : ps.points) s += std::exp(-lambda * (x - m).squaredNorm());
    best = std::max(best, s);
  }
  return best;
}

nlohmann::json to_json(const PointSet& ps) {
  nlohmann::json j;
  j["a"] = std::isnan(ps.a) ? nlohmann::json(nullptr) : nlohmann::json(ps.a);
  nlohmann::json pts = nlohmann::json::array();
  for (const Vec2& p : ps.points) pts.push_back({p.x(), p.y()});
  j["points"] = std::move(pts);
  j["label"] = ps.label;
  if (!ps.sublattice.empty()) j["sublattice"] = ps.sublattice;
  return j;
}

PointSet pointset_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array())
    throw ArgumentError("point set JSON needs a \"points\" array");
  std::vector<Vec2> pts;
  for (const auto& p : j["points"]) {
    if (!p.is_array() || p.size() != 2) throw ArgumentError("each point must be [x, y]");
    pts.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  std::vector<int> sub;
  if (j.contains("sublattice")) sub = j["sublattice"].get<std::vector<int>>();
  PointSet ps = PointSet::from_points(std::move(pts), j.value("label", std::string()), std::move(sub));
  if (j.contains("a") && j["a"].is_number() && ps.size() >= 2) {
    const double stated = j["a"].get<double>();
    if (std::abs(stated - ps.a) > 1e-9 * std::max(1.0, ps.a))
      throw ArgumentError("stated spacing a disagrees with the points");
  }
  return ps;
}

nlohmann::json to_json(const ValidationReport& r) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"n_points", r.n_points}, {"a", num(r.a)},          {"b_nnn", num(r.b_nnn)},
          {"nn_defined", r.nn_defined}, {"distinct", r.distinct}, {"a_positive", r.a_positive},
          {"b_gt_a", r.b_gt_a}, {"gaussian_sup", num(r.gaussian_sup)}, {"passes", r.passes}};
}

std::string bonds_csv(const PointSet& ps, const NeighborGraph& g) {
  std::ostringstream os;
  os.precision(17);
  os << "i,j,distance,class\n";
  for (const auto& [i, j] : g.pairs) os << i << ',' << j << ',' << (ps.points[i] - ps.points[j]).norm() << ",nn\n";
  for (const auto& [i, j] : g.beyond)
    os << i << ',' << j << ',' << (ps.points[i] - ps.points[j]).norm() << ",beyond\n";
  return os.str();
}

}  // namespace magtb
