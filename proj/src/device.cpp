#include "cavmag/device.hpp"

#include <cmath>

namespace cavmag {

double effective_c1(const ResonatorSpec& r) {
  return 1.0 / std::sqrt(r.omega_r1.rad_s() * r.z0);
}

double flux_zpf(const ResonatorSpec& r, const PhysicalConstants& c) {
  return std::sqrt(c.hbar / (2.0 * effective_c1(r) * r.omega_r1.rad_s()));
}

double g_xz(const DeviceConfig& d) {
  return g_xz(d.geometry, d.magnet, d.wire_width, d.resonator.z0, d.omega_r1(), d.constants);
}

double g_xx_harmonic(const DeviceConfig& d, Frequency harmonic) {
  return g_xx_harmonic(d.geometry, d.magnet, d.wire_width, d.resonator.z0, d.omega_r1(),
                       harmonic, d.constants);
}

void DeviceConfig::validate() const {
  constants.validate();
  resonator.validate();
  magnet.validate();
  if (!(wire_width > 0)) throw ValidationError("device: wire_width must be > 0");
  if (!(kappa_m_internal >= 0)) throw ValidationError("device: kappa_m_internal must be >= 0");
  if (geometry == Geometry::TopCPW) {
    if (resonator.modes.size() != 1)
      throw ValidationError("device: top_cpw uses exactly one resonator mode (the fundamental)");
    if (kappa_m_ext_override && !(*kappa_m_ext_override > 0))
      throw ValidationError("device: top_cpw needs a magnon driving line (kappa_m_ext > 0)");
  } else {
    if (resonator.modes.size() < 3)
      throw ValidationError("device: forty_five needs the fundamental and two harmonic modes");
    if (kappa_m_ext_override && *kappa_m_ext_override != 0.0)
      throw ValidationError("device: forty_five has no magnon driving line (kappa_m_ext = 0)");
  }
  if (!(resonator.modes.front().freq == resonator.omega_r1))
    throw ValidationError("device: first resonator mode must be the fundamental");
  const double expect = couplings.big_g * couplings.flux_zpf;
  if (std::abs(expect - couplings.g_xz1) > 1e-9 * std::abs(couplings.g_xz1))
    throw ValidationError("device: g_xz1 != G * flux_zpf");
}

Frequency DeviceConfig::omega_r2() const {
  if (resonator.modes.size() < 3) throw ValidationError("device: no r2 mode");
  return resonator.modes[1].freq;
}

Frequency DeviceConfig::omega_r3() const {
  if (resonator.modes.size() < 3) throw ValidationError("device: no r3 mode");
  return resonator.modes[2].freq;
}

double DeviceConfig::kappa_r1() const { return total_damping(resonator, omega_r1()); }

double DeviceConfig::kappa_m_ext(double omega_m) const {
  if (geometry == Geometry::FortyFive) return 0.0;
  if (kappa_m_ext_override) return *kappa_m_ext_override;
  double k = magnon_ext_damping(magnet, wire_width, omega_m, resonator.z0, constants).kappa_ext;
  if (anisotropy) {
    const double h = field_for_frequency(magnet, omega_m) / constants.mu0;
    k *= anisotropy_q_factor(h, magnet.m_eff);
  }
  return k;
}

double DeviceConfig::g_xx_at(Frequency mode, double b_field) const {
  double g = couplings.xx(mode);
  if (anisotropy && g != 0.0) g *= anisotropy_g_factor(b_field / constants.mu0, magnet.m_eff);
  return g;
}

DeviceConfig make_device(Geometry geometry, ResonatorSpec resonator, MagnetSpec magnet,
                         double wire_width, double kappa_m_internal,
                         const DeviceOverrides& overrides, bool anisotropy,
                         const PhysicalConstants& constants) {
  DeviceConfig d;
  d.geometry = geometry;
  d.resonator = std::move(resonator);
  d.magnet = std::move(magnet);
  d.wire_width = wire_width;
  d.kappa_m_internal = kappa_m_internal;
  d.kappa_m_ext_override = overrides.kappa_m_ext;
  d.anisotropy = anisotropy;
  d.constants = constants;

  // Partial validation before deriving anything from these inputs.
  d.constants.validate();
  d.resonator.validate();
  d.magnet.validate();
  if (!(wire_width > 0)) throw ValidationError("device: wire_width must be > 0");

  d.couplings.g_xz1 = overrides.g_xz1 ? *overrides.g_xz1 : g_xz(d);
  d.couplings.flux_zpf = flux_zpf(d.resonator, d.constants);
  d.couplings.big_g = d.couplings.g_xz1 / d.couplings.flux_zpf;
  if (geometry == Geometry::FortyFive) {
    for (std::size_t i = 1; i < d.resonator.modes.size() && i <= 2; ++i) {
      const Frequency f = d.resonator.modes[i].freq;
      d.couplings.g_xx[f.rad_s()] = g_xx_harmonic(d, f);
    }
    for (const auto& [w, g] : overrides.g_xx) d.couplings.g_xx[w] = g;
  }
  d.validate();
  return d;
}

} // namespace cavmag
