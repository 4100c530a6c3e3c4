#pragma once

#include <map>
#include <optional>

#include "cavmag/core.hpp"
#include "cavmag/magnon.hpp"
#include "cavmag/resonator.hpp"

namespace cavmag {

/// Values that replace derived quantities when set (rates in rad/s).
struct DeviceOverrides {
  std::optional<double> g_xz1;
  std::optional<double> kappa_m_ext;
  std::map<double, double> g_xx;  // keyed by mode angular frequency
};

/// One of the two geometries with its resonator, magnet and couplings bound together.
///
/// TopCPW: single resonator mode, magnon driving line present (kappa_m,ext > 0).
/// FortyFive: fundamental plus two XX-coupled harmonics (modes[1], modes[2]),
/// no magnon driving line (kappa_m,ext = 0).
struct DeviceConfig {
  Geometry geometry = Geometry::TopCPW;
  ResonatorSpec resonator;
  MagnetSpec magnet;
  double wire_width = 0.0;
  CouplingSet couplings;
  double kappa_m_internal = 0.0;
  std::optional<double> kappa_m_ext_override;
  /// Apply the thin-film anisotropy corrections with H = B / mu0.
  bool anisotropy = false;
  PhysicalConstants constants = kConstants;

  void validate() const;

  Frequency omega_r1() const { return resonator.omega_r1; }
  Frequency omega_r2() const;
  Frequency omega_r3() const;
  double kappa_r1() const;

  double kappa_m_ext(double omega_m) const;
  double kappa_m(double omega_m) const { return kappa_m_internal + kappa_m_ext(omega_m); }

  /// XX rate to a harmonic at the given static field, anisotropy applied if enabled.
  double g_xx_at(Frequency mode, double b_field) const;

  double spins() const { return spin_count(magnet, constants); }
};

/// Derives couplings from geometry, applying overrides, and validates the result.
DeviceConfig make_device(Geometry geometry, ResonatorSpec resonator, MagnetSpec magnet,
                         double wire_width, double kappa_m_internal,
                         const DeviceOverrides& overrides = {}, bool anisotropy = false,
                         const PhysicalConstants& constants = kConstants);

double g_xz(const DeviceConfig& device);
double g_xx_harmonic(const DeviceConfig& device, Frequency harmonic);

/// C1 = 1/sqrt(w_r1 Z0) and the matching flux zero-point fluctuation.
double effective_c1(const ResonatorSpec& r);
double flux_zpf(const ResonatorSpec& r, const PhysicalConstants& c = kConstants);

} // namespace cavmag
