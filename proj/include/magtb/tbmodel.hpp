#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "json.hpp"
#include "magtb/common.hpp"
#include "magtb/geometry.hpp"

namespace magtb {

using SparseC = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

struct FluxParameter {
  double beta = 0.0;
  double a = 1.0;
  double plaquette_flux() const { return 2.0 * beta * a * a; }
};

// Only the strictly lower triangle is stored; full() mirrors it with exact
// conjugates, so the operator is Hermitian bit for bit.
struct TBHamiltonian {
  SparseC lower;
  Eigen::VectorXd diagonal;
  double beta = 0.0;
  double a = kNan;
  std::string label;
  std::vector<std::pair<int, int>> bonds;  // (n, m) with n < m
  std::vector<double> hopping_weights;     // per bond
  std::uint64_t seed = 0;
  bool has_seed = false;

  int size() const { return static_cast<int>(diagonal.size()); }
  SparseC full() const;
  MatrixXc dense() const;
  cplx entry(int row, int col) const;
};

// e^{i beta n^m}
cplx magnetic_phase(const Vec2& n, const Vec2& m, double beta);

// Hermitian operator with H[m][n] = w_nm e^{i beta n^m} on the given bonds.
TBHamiltonian tb_from_bonds(const PointSet& ps, const std::vector<Vec2>& phase_points,
                            const std::vector<std::pair<int, int>>& bonds, const std::vector<double>& weights,
                            double beta);

TBHamiltonian build_tb(const PointSet& ps, double beta);
TBHamiltonian build_honeycomb_tb(const PointSet& ps, double beta);
TBHamiltonian build_random_hopping(const PointSet& ps, double beta, double c);

// lambda = 2 beta + 4 pi r / a^2, so e^{i(lambda/2) n^m} = e^{i beta n^m} on (aZ)^2.
double admissible_lambda(double beta, double a, int r);

// Product of H[next][cur] around a closed site cycle.
cplx loop_phase(const TBHamiltonian& H, const std::vector<int>& cycle);

// diag(e^{i chi}) H diag(e^{-i chi})
MatrixXc gauge_transform(const MatrixXc& H, const Eigen::VectorXd& chi);

// "row,col,re,im" over every stored entry of the full operator.
std::string coo_csv(const TBHamiltonian& H);
nlohmann::json tb_metadata(const TBHamiltonian& H);

}  // namespace magtb
