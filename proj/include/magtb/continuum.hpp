#pragma once

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "magtb/atomic.hpp"
#include "magtb/common.hpp"
#include "magtb/geometry.hpp"
#include "magtb/tbmodel.hpp"

namespace magtb {

inline constexpr double kContinuumLambdaCeiling = 10.0;

// Node (i, j) sits at center + h (i - (nx-1)/2, j - (ny-1)/2). Even node
// counts keep every node off the centre, so rotations about it act freely.
struct ContinuumGrid {
  Vec2 center = Vec2::Zero();
  double h = 0.0;
  int nx = 0;
  int ny = 0;

  int size() const { return nx * ny; }
  int index(int i, int j) const { return j * nx + i; }
  Vec2 node(int i, int j) const;
  double lx() const { return h * (nx - 1); }
  double ly() const { return h * (ny - 1); }
};

// Required step: h <= min(2 pi / (lambda a) / 8, r0 / 20).
double max_grid_step(const PointSet& patch, const AtomicWell& well, double lambda);
// Box around the wells with `margin` beyond each well centre (default
// r0 + 8/sqrt(lambda)).
ContinuumGrid make_grid(const PointSet& patch, const AtomicWell& well, double lambda, double h, double margin = kNan);
ContinuumGrid make_box_grid(const Vec2& center, double lx, double ly, double h);

struct ContinuumHamiltonian {
  SparseC op;
  ContinuumGrid grid;
  double lambda = 0.0;
  PointSet wells;
  AtomicWell well;
  double e0_shift = 0.0;
  int order = 4;
  double norm_bound = 0.0;
};

// (P - lambda A)^2 + lambda^2 V - e0_shift with A = (-(y - c_y), x - c_x)/2
// about the grid centre, exact link phases e^{-i lambda int A.dl}, Dirichlet
// boundary. order 2 is the 5-point stencil, order 4 the 9-point cross.
ContinuumHamiltonian build_continuum_hamiltonian(const PointSet& patch, const AtomicWell& well, double lambda,
                                                 const ContinuumGrid& grid, double e0_shift = 0.0, int order = 4);

// Product of the unit-step link variables around the grid cell with lower
// left node (i, j), counter-clockwise.
cplx cell_link_product(const ContinuumHamiltonian& H, int i, int j);

// Rotation by 2 pi / order about the grid centre as a node permutation.
struct RotationSectors {
  int order = 1;
  std::vector<int> reps;        // one node per orbit
  std::vector<int> rep_index;   // node -> position of its orbit in reps
  std::vector<int> power;       // node = R^power(rep)
};

RotationSectors rotation_sectors(const ContinuumGrid& g, int order);
// Restriction of H to the subspace with U psi = e^{2 pi i k / order} psi.
SparseC sector_operator(const SparseC& H, const RotationSectors& s, int k);
// Full-grid vector from its values on the orbit representatives (unit norm).
VectorXc lift_sector_vector(const VectorXc& f, const RotationSectors& s, int k);

struct EigenPairs {
  Eigen::VectorXd values;
  MatrixXc vectors;
  double max_residual = 0.0;
  int iterations = 0;
};

// Factorisation of H - sigma for repeated solves (CHOLMOD supernodal LL^*).
class ShiftInvert {
 public:
  ShiftInvert(const SparseC& H, double sigma);
  ~ShiftInvert();
  ShiftInvert(const ShiftInvert&) = delete;
  ShiftInvert& operator=(const ShiftInvert&) = delete;
  MatrixXc solve(const MatrixXc& B) const;
  double factor_nonzeros() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Lowest k eigenpairs by block shift-invert subspace iteration with
// Rayleigh-Ritz; sigma must lie below the spectrum.
EigenPairs lowest_eigenpairs(const SparseC& H, int k, double sigma, double norm_bound, int guard = 3,
                             unsigned seed = 7);

// E_b - E_a from the discrete Green identity on the node set D:
// (E_b - E_a) <a, b>_D = sum_{x in D, y not in D} conj(a_x) H_xy b_y - conj(a_y) H_yx b_x.
cplx green_energy_difference(const SparseC& H, const VectorXc& a, const VectorXc& b, const std::vector<char>& D);

struct ClusterSolve {
  double h = 0.0;
  int nodes = 0;
  std::vector<double> energies;     // absolute, one per rotation sector
  std::vector<double> differences;  // E_k - E_0 from the Green identity
  double max_residual = 0.0;
  double norm_bound = 0.0;
};

// Lowest eigenvalue in each rotation sector of a patch with 1, 2 or 4 sites
// arranged symmetrically about their centroid.
ClusterSolve solve_cluster(const PointSet& patch, const AtomicWell& well, double lambda, double h,
                           const RadialGroundState& gs, int order = 4);

struct DoubleWellResult {
  double lambda = 0.0;
  double a = 0.0;
  double rho = 0.0;
  double s = 0.0;      // finest grid
  double ratio = 0.0;  // s / (2|rho|), finest grid
  double ratio_extrapolated = 0.0;
  double ratio_error = 0.0;  // |extrapolated - finest|
  double refinement_change = 0.0;
  bool refinement_ok = false;
  std::vector<ClusterSolve> grids;
};

DoubleWellResult double_well_splitting(const AtomicWell& well, double lambda, double a, double h = kNan,
                                       int order = 4);

struct ScaledSpectrumReport {
  double lambda = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  std::vector<double> tb;      // sorted
  std::vector<double> scaled;  // sorted, extrapolated
  double deviation = 0.0;
  double deviation_error = 0.0;
  double cluster_bound = 0.0;  // max |E - mean| / |rho| over the cluster
  std::vector<ClusterSolve> grids;
};

ScaledSpectrumReport scaled_spectrum_compare(const PointSet& patch, const AtomicWell& well, double lambda,
                                             double beta, double h = kNan, int order = 4);

std::string continuum_eigen_csv(const std::vector<double>& lambdas, const std::vector<std::vector<double>>& energies,
                                const std::vector<double>& rho);
nlohmann::json to_json(const ContinuumGrid& g);
nlohmann::json to_json(const DoubleWellResult& r);
nlohmann::json to_json(const ScaledSpectrumReport& r);

}  // namespace magtb
