#pragma once

#include <array>
#include <map>
#include <string>

#include "cavmag/core.hpp"

namespace cavmag {

/// Magnetic element hosting the Kittel mode.
struct MagnetSpec {
  std::string name;
  double m_s = 0.0;                        // A/m
  std::array<double, 3> dims{0, 0, 0};     // length, width, thickness, m
  double gamma = kDefaultGamma;            // rad/s per T
  double m_eff = 0.0;                      // A/m
  double kerr_k = 0.0;                     // rad/s per magnon

  void validate() const;
  double volume() const { return dims[0] * dims[1] * dims[2]; }
};

// Material presets addressable by name from config.
MagnetSpec yig_preset();
/// M_s back-derived from N = 2.2e12 in 500x5x1 um^3; gamma from 20 GHz at 0.709305 T.
MagnetSpec vtcne_preset();
MagnetSpec magnet_preset(const std::string& name);

enum class Geometry { TopCPW, FortyFive };

std::string to_string(Geometry g);
Geometry geometry_from_string(const std::string& s);

/// 1 when the wire is perpendicular to the static field, 1/sqrt(2) at 45 degrees.
double projection_factor(Geometry g);

/// Coupling rates bound to one resonator. XX rates keyed by mode frequency in rad/s.
struct CouplingSet {
  double g_xz1 = 0.0;
  std::map<double, double> g_xx;
  double big_g = 0.0;      // rad/s per Wb
  double flux_zpf = 0.0;   // Wb, in the C1 = 1/sqrt(w_r1 Z0) normalization

  double xx(Frequency mode) const;
};

double spin_count(const MagnetSpec& mag, const PhysicalConstants& c = kConstants);

/// Field at the spins per unit wire current, T/A.
double b_rf(double wire_width, const PhysicalConstants& c = kConstants);

double larmor_frequency(const MagnetSpec& mag, double b_field);
double field_for_frequency(const MagnetSpec& mag, double omega_m);

/// d(omega_m)/dI = gamma mu0 / 2w, rad/s per A.
double domega_dcurrent(const MagnetSpec& mag, double wire_width,
                       const PhysicalConstants& c = kConstants);

/// gamma (mu0/2w) sqrt(2 hbar / pi Z0) w_r1, times the geometric projection.
double g_xz(Geometry geom, const MagnetSpec& mag, double wire_width, double z0, Frequency omega_r1,
            const PhysicalConstants& c = kConstants);

/// XX rate between the Kittel mode and a harmonic of the quarter-wave resonator.
/// Uniform-current approximation; finite magnet length relative to the mode is ignored.
double g_xx_harmonic(Geometry geom, const MagnetSpec& mag, double wire_width, double z0,
                     Frequency omega_r1, Frequency harmonic,
                     const PhysicalConstants& c = kConstants);

struct MagnonExtDamping {
  double kappa_ext = 0.0;
  double q_c = 0.0;
};

/// Radiative loss of the Kittel mode into a driving line of impedance z0.
MagnonExtDamping magnon_ext_damping(const MagnetSpec& mag, double wire_width, double omega_m,
                                    double z0, const PhysicalConstants& c = kConstants);

/// sqrt((H + M_eff)/H); divides Q_m,c.
double anisotropy_q_factor(double h_field, double m_eff);
/// ((H + M_eff)/H)^(1/4); multiplies g_XX.
double anisotropy_g_factor(double h_field, double m_eff);

double kerr_shift(const MagnetSpec& mag, double n_m);

} // namespace cavmag
