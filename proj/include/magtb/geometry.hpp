#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "magtb/common.hpp"

namespace magtb {

inline constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Relative tolerance separating nearest neighbours from longer pairs.
inline constexpr double kNeighborTol = 1e-9;

// Per-bond length disorder of a displaced lattice; bond (i,j) of the
// reference graph has length approximately a*sqrt(1 + eps/lambda).
struct BondDisorder {
  int i = 0;
  int j = 0;
  double eps = 0.0;
};

struct Disorder {
  std::vector<Vec2> reference;
  double reference_a = kNan;
  double lambda = kNan;
  std::uint64_t seed = 0;
  std::vector<double> t;
  std::vector<double> theta;
  std::vector<BondDisorder> bonds;
};

struct PointSet {
  std::vector<Vec2> points;
  double a = kNan;
  double b_nnn = kNan;
  std::string label;
  // Empty, or one entry per site: 0 for the A sublattice, 1 for B.
  std::vector<int> sublattice;
  std::optional<Disorder> disorder;

  std::size_t size() const { return points.size(); }

  // Computes a and b_nnn by a full pairwise scan.
  static PointSet from_points(std::vector<Vec2> pts, std::string label,
                              std::vector<int> sublattice = {});
};

struct NeighborGraph {
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::pair<int, int>> beyond;
  double a = kNan;
  double cutoff = kNan;
};

NeighborGraph neighbor_graph(const PointSet& ps, double cutoff_factor = 3.0);

struct DisplacementSeed {
  std::uint64_t rng_seed = 0;
  std::vector<double> t_amplitudes;
  std::vector<double> angles;

  // Deterministic draws t ~ U[0,1], theta ~ U[0, 2pi) for n sites.
  static DisplacementSeed draw(std::uint64_t seed, std::size_t n);
};

PointSet build_square_lattice(double a, int nx, int ny);
PointSet build_honeycomb(double a, int n1, int n2);
PointSet truncate_half_plane(const PointSet& ps, int axis, double threshold);
PointSet random_displacement(const PointSet& ps, double lambda, const DisplacementSeed& seed);

// eps for the bond n-m given the displacement draws of both ends.
double bond_epsilon(const Vec2& n, const Vec2& m, double t_n, double theta_n, double t_m,
                    double theta_m);

struct ValidationReport {
  std::size_t n_points = 0;
  double a = kNan;
  double b_nnn = kNan;
  bool nn_defined = false;
  bool distinct = false;
  bool a_positive = false;
  bool b_gt_a = false;
  double gaussian_sup = kNan;
  bool passes = false;
};

ValidationReport validate_assumptions(const PointSet& ps);

double gaussian_sum_sup(const PointSet& ps, double lambda, const std::vector<Vec2>& probes);

nlohmann::json to_json(const PointSet& ps);
PointSet pointset_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ValidationReport& r);

// CSV with header "i,j,distance,class"; class is "nn" or "beyond".
std::string bonds_csv(const PointSet& ps, const NeighborGraph& g);

}  // namespace magtb
