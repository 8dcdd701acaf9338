#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "magtb/common.hpp"
#include "magtb/geometry.hpp"
#include "magtb/spectral.hpp"

namespace magtb {

struct SwitchFunction {
  enum class Kind { Heaviside, Smooth };
  int axis = 1;  // 1 or 2
  double center = 0.0;
  Kind kind = Kind::Heaviside;
  double width = 1.0;

  double operator()(const Vec2& x) const;
};

struct FluxInsertionUnitary {
  Vec2 origin = Vec2::Zero();
  VectorXc phases;
};

FluxInsertionUnitary flux_insertion_unitary(const PointSet& ps, const Vec2& origin);
// Bounding-box centre of the sample, moved off any site onto a plaquette centre.
Vec2 plaquette_center(const PointSet& ps);

struct IndexReport {
  double value = 0.0;
  int nearest_integer = 0;
  double deviation = 0.0;
  std::string method;
  double imaginary_part = 0.0;
  double contamination = 0.0;
  bool indeterminate = false;
  std::vector<std::string> warnings;
  nlohmann::json sample = nlohmann::json::object();
  nlohmann::json detail = nlohmann::json::object();
};

IndexReport make_index_report(double value, std::string method);

// Rectangular window covering `fraction` of the sample extent per axis,
// centred on `center`.
std::vector<int> window_sites(const PointSet& ps, const Vec2& center, double fraction);

// 2 pi sigma = 4 pi Im tr_D(P L1 Q L2 P), D the inner window around the
// switch crossing covering 50% of the sample per axis.
// contamination = |T(50%) - T(30%)|.
IndexReport kubo_chern(const SpectralProjection& P, const PointSet& ps, const SwitchFunction& L1,
                       const SwitchFunction& L2);

// Near-zero singular values of T = P U P + Q, counted with the localisation
// of their singular vectors (bulk window weight > 1/2): right minus left.
IndexReport flux_insertion_index(const SpectralProjection& P, const PointSet& ps, const FluxInsertionUnitary& U,
                                 double tau = 0.2);

// Eigenpairs whose energy lies in the support of g^2 - g.
struct EdgeSpectrum {
  Eigen::VectorXd energies;
  MatrixXc vectors;
};
EdgeSpectrum edge_spectrum(const SpectralData& spec, const SmoothStep& g);

void require_window_in_gap(const SmoothStep& g, const Interval& bulk_gap);

// 2 pi tr_D g'(H)(-i[H, L1]) with D the half of the sample next to the lower
// edge along axis 1 (edge at minimal coordinate along axis 2).
IndexReport edge_conductance(const TBHamiltonian& Hedge, const PointSet& ps, const SpectralData& spec,
                             const SmoothStep& g, const SwitchFunction& L1, const Interval& bulk_gap);

struct DecayProfile {
  std::vector<double> depth;
  std::vector<double> max_value;
  double kappa = 0.0;
  double r_squared = 0.0;
  bool passes = false;
  double hermiticity_defect = 0.0;
  double spectrum_min = 0.0;
  double spectrum_max = 0.0;
};

// Row maxima of |M_nm| binned by depth d_hat.(n - edge), over rows in the
// central half along the edge and depths below half the sample.
DecayProfile depth_profile(const MatrixXc& M, const PointSet& ps, const Vec2& d_hat, double floor = 1e-14);
DecayProfile edge_projection_defect(const PointSet& ps, const SpectralData& spec, const SmoothStep& g,
                                    const Vec2& d_hat);
std::string decay_profile_csv(const DecayProfile& p);

struct EdgeUnitaryReport {
  MatrixXc W;
  double unitarity_defect = 0.0;
  IndexReport index;
  std::vector<double> small_singular_values;
};

EdgeUnitaryReport edge_index_unitary(const PointSet& ps, const SpectralData& spec, const SmoothStep& g,
                                     const SwitchFunction& L1, const Interval& bulk_gap, double tau = 0.2);

struct BecReport {
  IndexReport kubo;
  IndexReport flux;
  IndexReport edge;
  IndexReport edge_unitary;
  int max_disagreement = 0;
  bool consistent = false;
};

BecReport bec_check(const TBHamiltonian& Hbulk, const PointSet& bulk, const TBHamiltonian& Hedge,
                    const PointSet& edge, const Interval& gap, const SmoothStep& g);

nlohmann::json to_json(const IndexReport& r);
nlohmann::json to_json(const BecReport& r);

}  // namespace magtb
