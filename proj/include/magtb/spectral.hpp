#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "magtb/common.hpp"
#include "magtb/tbmodel.hpp"

namespace magtb {

inline constexpr int kDenseLimit = 4000;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double e) const { return e > lo && e < hi; }
  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
};

struct SpectralData {
  Eigen::VectorXd eigenvalues;
  MatrixXc eigenvectors;
  bool has_vectors = false;
  double operator_norm = 0.0;
  double max_residual = 0.0;  // max ||Hv - Ev|| over the checked columns
  int checked_columns = 0;

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

// k < 0 requests the full spectrum.
SpectralData eig_hermitian(const MatrixXc& H, int k = -1, bool vectors = true);
SpectralData eig_hermitian(const TBHamiltonian& H, int k = -1, bool vectors = true);

struct SpectralProjection {
  MatrixXc projector;
  MatrixXc basis;  // orthonormal columns spanning the range
  Interval window;
  double mu = kNan;
  int rank = 0;
  double idempotency_defect = 0.0;
};

SpectralProjection spectral_projection(const SpectralData& spec, const Interval& window);
// Projection onto (-inf, mu).
SpectralProjection fermi_projection(const SpectralData& spec, double mu);

class SmoothStep {
 public:
  enum class Kind { Fermi, Bump, Sharp };

  SmoothStep(Interval delta, Kind kind = Kind::Fermi);
  static SmoothStep sharp(double mu);

  double operator()(double e) const;
  double derivative(double e) const;
  const Interval& delta() const { return delta_; }
  Kind kind() const { return kind_; }

 private:
  Interval delta_;
  Kind kind_;
  double w_ = 0.0;
  double f_lo_ = 1.0, f_hi_ = 0.0;
  double fermi(double e) const;
};

std::string to_string(SmoothStep::Kind k);

MatrixXc function_of(const SpectralData& spec, const std::function<cplx(double)>& f);
MatrixXc smooth_function_of(const SpectralData& spec, const SmoothStep& g);
MatrixXc smooth_derivative_of(const SpectralData& spec, const SmoothStep& g);
// exp(-2 pi i g(H))
MatrixXc step_unitary(const SpectralData& spec, const SmoothStep& g);
double unitarity_defect(const MatrixXc& U);

// Reduced fractions p/q with 0 <= p < q <= q_max in increasing order.
std::vector<std::pair<int, int>> farey_fluxes(int q_max);

struct ButterflyPoint {
  int p = 0;
  int q = 1;
  double flux = 0.0;
  double energy = 0.0;
};

// Harper model on an nx x ny open square sample, unit spacing.
std::vector<ButterflyPoint> butterfly(int nx, int ny, int q_max);
std::string butterfly_csv(const std::vector<ButterflyPoint>& rows, const nlohmann::json& meta);

// Infinite-lattice Harper bands at plaquette flux 2 pi p / q: (min, max) per
// band from a Bloch scan of the magnetic unit cell.
std::vector<std::pair<double, double>> harper_bloch_bands(int p, int q, int nk = 48);
// Open interval between band j and band j+1 (0-based).
Interval harper_gap(int p, int q, int j, int nk = 48);

}  // namespace magtb
