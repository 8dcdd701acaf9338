#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "magtb/common.hpp"

namespace magtb {

enum class WellProfile {
  Quartic,    // v_min (1 - s^2)^2
  MexicanHat  // v_min 16 s^4 (1 - s^2)^2, deepest on the ring s^2 = 1/2
};

struct AtomicWell {
  double v_min = -4.0;
  double r0 = 1.0;
  WellProfile profile = WellProfile::Quartic;

  double v0(double r) const;
  bool oracle_mode() const { return v_min == 0.0; }
  void validate() const;
};

std::string to_string(WellProfile p);
WellProfile well_profile_from_string(const std::string& s);

// Ground state of (P - lambda A)^2 + lambda^2 v0 in the m = 0 sector.
// Energies are Richardson extrapolated from the n_grid and n_grid/2 solves.
// The profile is stored as ln(phi0) and interpolated in the log domain.
struct RadialGroundState {
  AtomicWell well;
  double lambda = 0.0;
  double r_max = 0.0;
  int n_grid = 0;
  double h = 0.0;
  std::vector<double> grid;
  std::vector<double> log_values;
  double e0_raw = 0.0;
  double e0_fine = 0.0;
  double e0_coarse = 0.0;
  double e1 = 0.0;
  double gap = 0.0;
  double refinement_disagreement = 0.0;
  bool angular_sector_check = false;

  double log_value(double r) const;
  double value(double r) const;
  std::vector<double> values() const;
  // 2D normalisation integral of the stored profile (composite Simpson).
  double norm_integral() const;
};

RadialGroundState solve_radial_ground_state(const AtomicWell& well, double lambda, int n_grid, double r_max);

// Convenience: r_max = r0 + reach, grid step h_target (both clipped to the
// solver preconditions).
RadialGroundState solve_radial_ground_state_auto(const AtomicWell& well, double lambda, double reach,
                                                 double h_target = 5e-4);

struct SectorEnergies {
  std::vector<int> m;
  std::vector<double> energy;
  double tolerance = 0.0;
  bool m0_minimal = false;
};

SectorEnergies sector_energies(const AtomicWell& well, double lambda, int m_lo, int m_hi);

// True when the m = 0 sector attains the minimum over [m_lo, m_hi], up to the
// discretisation tolerance reported by sector_energies.
bool check_sector_minimum(const AtomicWell& well, double lambda, int m_lo, int m_hi);

struct DecayCertificate {
  double C_fit = 0.0;
  double rate_fit = 0.0;
  bool passes = false;
};

DecayCertificate gaussian_decay_certificate(const RadialGroundState& gs);

nlohmann::json radial_header(const RadialGroundState& gs);
std::string radial_csv(const RadialGroundState& gs);

}  // namespace magtb
