#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cavmag/core.hpp"

namespace cavmag {

/// One standing-wave mode of the quarter-wave resonator. Rates are angular.
struct ResonatorMode {
  Frequency freq;
  double kappa_internal = 0.0;
  std::optional<double> kappa_ext_override;
};

/// External damping known at one reference frequency, scaled as omega^2.
struct KappaCalibration {
  Frequency omega_ref;
  double kappa_ref = 0.0;
};

/// Quarter-wave coplanar-waveguide resonator capacitively coupled to a feedline.
struct ResonatorSpec {
  double z0 = 50.0;
  Frequency omega_r1;
  std::vector<ResonatorMode> modes;
  std::optional<double> coupling_capacitance;
  std::optional<KappaCalibration> calibration;

  /// Throws ValidationError on broken invariants.
  void validate() const;

  /// Modes that are not an odd multiple of omega_r1 within rel_tol.
  std::vector<std::string> harmonic_warnings(double rel_tol = 1e-6) const;

  const ResonatorMode& mode(Frequency f) const;
};

double total_capacitance(const ResonatorSpec& spec);
double total_inductance(const ResonatorSpec& spec);

/// Zero-point current at the current antinode of the fundamental, A.
double i_zpf(const ResonatorSpec& spec, const PhysicalConstants& c = kConstants);

// Comparison geometries for the quarter-wave result above.
double i_zpf_half_wave(double z0, double omega, const PhysicalConstants& c = kConstants);
double i_zpf_lumped(double z, double omega, const PhysicalConstants& c = kConstants);

/// kappa_ext = Z0 w^2 Cc^2 / C_total, with the high-pass scaling used for calibration.
/// Precedence: per-mode override, then calibration pair, then coupling capacitance.
double external_damping(const ResonatorSpec& spec, Frequency mode);

/// External damping at an arbitrary frequency, ignoring per-mode overrides.
double external_damping_at(const ResonatorSpec& spec, Frequency omega);

double coupling_q(const ResonatorSpec& spec, Frequency mode);

/// kappa_internal + kappa_ext for a listed mode.
double total_damping(const ResonatorSpec& spec, Frequency mode);

} // namespace cavmag
