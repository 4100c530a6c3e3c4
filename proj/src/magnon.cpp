#include "cavmag/magnon.hpp"

#include <cmath>

namespace cavmag {

void MagnetSpec::validate() const {
  if (!(m_s > 0)) throw ValidationError("magnet '" + name + "': m_s must be > 0");
  for (double d : dims)
    if (!(d > 0)) throw ValidationError("magnet '" + name + "': all dimensions must be > 0");
  if (!(gamma > 0)) throw ValidationError("magnet '" + name + "': gamma must be > 0");
  if (!(kerr_k >= 0)) throw ValidationError("magnet '" + name + "': kerr_k must be >= 0");
  if (!std::isfinite(m_eff)) throw ValidationError("magnet '" + name + "': m_eff must be finite");
}

MagnetSpec yig_preset() {
  MagnetSpec m;
  m.name = "YIG";
  m.m_s = 140.0 * kEmuPerCm3;
  m.dims = {5e-6, 5e-6, 1e-6};
  m.gamma = kDefaultGamma;
  m.m_eff = m.m_s;  // unstrained, H_k = 0
  m.kerr_k = kTwoPi * 0.01;
  return m;
}

MagnetSpec vtcne_preset() {
  MagnetSpec m;
  m.name = "VTCNE";
  // 2.2e12 mu_B / (500 um x 5 um x 1 um) = 8.16e3 A/m.
  m.m_s = 8.16 * kEmuPerCm3;
  m.dims = {500e-6, 5e-6, 1e-6};
  m.gamma = kTwoPi * 20.0e9 / 0.709305;
  m.m_eff = m.m_s;
  m.kerr_k = 0.0;
  return m;
}

MagnetSpec magnet_preset(const std::string& name) {
  if (name == "YIG") return yig_preset();
  if (name == "VTCNE") return vtcne_preset();
  throw ValidationError("unknown magnet preset '" + name + "' (expected YIG or VTCNE)");
}

std::string to_string(Geometry g) {
  return g == Geometry::TopCPW ? "top_cpw" : "forty_five";
}

Geometry geometry_from_string(const std::string& s) {
  if (s == "top_cpw") return Geometry::TopCPW;
  if (s == "forty_five") return Geometry::FortyFive;
  throw ValidationError("unknown geometry '" + s + "' (expected top_cpw or forty_five)");
}

double projection_factor(Geometry g) {
  return g == Geometry::TopCPW ? 1.0 : 1.0 / std::numbers::sqrt2;
}

double CouplingSet::xx(Frequency mode) const {
  for (const auto& [w, g] : g_xx)
    if (std::abs(w - mode.rad_s()) <= 1e-9 * mode.rad_s()) return g;
  return 0.0;
}

double spin_count(const MagnetSpec& mag, const PhysicalConstants& c) {
  return mag.m_s * mag.volume() / c.mu_b;
}

double b_rf(double wire_width, const PhysicalConstants& c) {
  if (!(wire_width > 0)) throw ValidationError("b_rf: wire width must be > 0");
  return c.mu0 / (2.0 * wire_width);
}

double larmor_frequency(const MagnetSpec& mag, double b_field) {
  if (!(b_field >= 0)) throw ValidationError("larmor_frequency: field must be >= 0");
  return mag.gamma * b_field;
}

double field_for_frequency(const MagnetSpec& mag, double omega_m) {
  return omega_m / mag.gamma;
}

double domega_dcurrent(const MagnetSpec& mag, double wire_width, const PhysicalConstants& c) {
  return mag.gamma * b_rf(wire_width, c);
}

double g_xz(Geometry geom, const MagnetSpec& mag, double wire_width, double z0, Frequency omega_r1,
            const PhysicalConstants& c) {
  const double izpf = std::sqrt(2.0 * c.hbar / (std::numbers::pi * z0)) * omega_r1.rad_s();
  return projection_factor(geom) * domega_dcurrent(mag, wire_width, c) * izpf;
}

double g_xx_harmonic(Geometry geom, const MagnetSpec& mag, double wire_width, double z0,
                     Frequency omega_r1, Frequency harmonic, const PhysicalConstants& c) {
  const double n = spin_count(mag, c);
  return projection_factor(geom) * c.g_e * c.mu_b * b_rf(wire_width, c) *
         std::sqrt(omega_r1.rad_s() * harmonic.rad_s()) *
         std::sqrt(n / (kTwoPi * c.hbar * z0));
}

MagnonExtDamping magnon_ext_damping(const MagnetSpec& mag, double wire_width, double omega_m,
                                    double z0, const PhysicalConstants& c) {
  if (!(omega_m > 0 && z0 > 0)) throw ValidationError("magnon_ext_damping: inputs must be > 0");
  const double b = b_rf(wire_width, c);
  const double mu_n = c.mu_b * spin_count(mag, c);  // = M_s V
  MagnonExtDamping out;
  out.kappa_ext = b * b * omega_m * mu_n * mag.gamma / (2.0 * z0);
  out.q_c = 2.0 * z0 / (b * b * mu_n * mag.gamma);
  return out;
}

namespace {

double anisotropy_ratio(double h_field, double m_eff) {
  if (!(h_field > 0)) throw ValidationError("anisotropy factor: H must be > 0");
  if (!(h_field + m_eff > 0)) throw ValidationError("anisotropy factor: H + M_eff must be > 0");
  return (h_field + m_eff) / h_field;
}

} // namespace

double anisotropy_q_factor(double h_field, double m_eff) {
  return std::sqrt(anisotropy_ratio(h_field, m_eff));
}

double anisotropy_g_factor(double h_field, double m_eff) {
  return std::pow(anisotropy_ratio(h_field, m_eff), 0.25);
}

double kerr_shift(const MagnetSpec& mag, double n_m) {
  if (!(n_m >= 0)) throw ValidationError("kerr_shift: n_m must be >= 0");
  return mag.kerr_k * n_m;
}

} // namespace cavmag
