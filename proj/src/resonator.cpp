#include "cavmag/resonator.hpp"

#include <cmath>
#include <sstream>

namespace cavmag {

namespace {

bool same_frequency(Frequency a, Frequency b) {
  return std::abs(a.rad_s() - b.rad_s()) <= 1e-9 * std::abs(b.rad_s());
}

} // namespace

void ResonatorSpec::validate() const {
  if (!(z0 > 0)) throw ValidationError("resonator: z0 must be > 0");
  if (!(omega_r1.rad_s() > 0)) throw ValidationError("resonator: omega_r1 must be > 0");
  if (modes.empty()) throw ValidationError("resonator: at least one mode required");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto& m = modes[i];
    if (!(m.freq.rad_s() > 0)) throw ValidationError("resonator: mode frequencies must be > 0");
    if (i > 0 && !(m.freq > modes[i - 1].freq))
      throw ValidationError("resonator: mode frequencies must be strictly increasing");
    if (!(m.kappa_internal >= 0)) throw ValidationError("resonator: kappa_internal must be >= 0");
    if (m.kappa_ext_override && !(*m.kappa_ext_override >= 0))
      throw ValidationError("resonator: kappa_ext override must be >= 0");
  }
  if (coupling_capacitance && !(*coupling_capacitance >= 0))
    throw ValidationError("resonator: coupling_capacitance must be >= 0");
  if (calibration) {
    if (!(calibration->omega_ref.rad_s() > 0))
      throw ValidationError("resonator: calibration reference frequency must be > 0");
    if (!(calibration->kappa_ref >= 0))
      throw ValidationError("resonator: calibration kappa must be >= 0");
  }
}

std::vector<std::string> ResonatorSpec::harmonic_warnings(double rel_tol) const {
  std::vector<std::string> out;
  for (const auto& m : modes) {
    const double ratio = m.freq.rad_s() / omega_r1.rad_s();
    const double k = std::round((ratio - 1.0) / 2.0);
    const double nearest = 2.0 * k + 1.0;
    if (k < 0 || std::abs(ratio - nearest) > rel_tol * nearest) {
      std::ostringstream os;
      os << "mode " << m.freq.in_hz() << " Hz is not an odd harmonic of "
         << omega_r1.in_hz() << " Hz (ratio " << ratio << ")";
      out.push_back(os.str());
    }
  }
  return out;
}

const ResonatorMode& ResonatorSpec::mode(Frequency f) const {
  for (const auto& m : modes)
    if (same_frequency(m.freq, f)) return m;
  std::ostringstream os;
  os << "resonator: no mode at " << f.in_hz() << " Hz";
  throw ValidationError(os.str());
}

double total_capacitance(const ResonatorSpec& spec) {
  return (1.0 / (4.0 * spec.z0)) * (kTwoPi / spec.omega_r1.rad_s());
}

double total_inductance(const ResonatorSpec& spec) {
  return total_capacitance(spec) * spec.z0 * spec.z0;
}

double i_zpf(const ResonatorSpec& spec, const PhysicalConstants& c) {
  return std::sqrt(2.0 * c.hbar / (std::numbers::pi * spec.z0)) * spec.omega_r1.rad_s();
}

double i_zpf_half_wave(double z0, double omega, const PhysicalConstants& c) {
  // Half-wave line: C_total = pi/(Z0 w), L_total = C_total Z0^2; hbar w / 2 = L I^2 / 2.
  const double l_total = std::numbers::pi * z0 / omega;
  return std::sqrt(c.hbar * omega / l_total);
}

double i_zpf_lumped(double z, double omega, const PhysicalConstants& c) {
  // LC with L = Z/w; half of the zero-point energy is inductive.
  const double l = z / omega;
  return std::sqrt(c.hbar * omega / (2.0 * l));
}

double external_damping_at(const ResonatorSpec& spec, Frequency omega) {
  const double w = omega.rad_s();
  if (spec.calibration) {
    const double r = w / spec.calibration->omega_ref.rad_s();
    return spec.calibration->kappa_ref * r * r;
  }
  if (spec.coupling_capacitance) {
    const double cc = *spec.coupling_capacitance;
    return spec.z0 * w * w * cc * cc / total_capacitance(spec);
  }
  throw ValidationError(
      "resonator: external damping needs a coupling capacitance, a calibration pair, or an override");
}

double external_damping(const ResonatorSpec& spec, Frequency mode) {
  const auto& m = spec.mode(mode);
  if (m.kappa_ext_override) return *m.kappa_ext_override;
  return external_damping_at(spec, mode);
}

double coupling_q(const ResonatorSpec& spec, Frequency mode) {
  const double k = external_damping(spec, mode);
  if (!(k > 0)) throw ValidationError("resonator: coupling Q undefined for kappa_ext = 0");
  return mode.rad_s() / k;
}

double total_damping(const ResonatorSpec& spec, Frequency mode) {
  return spec.mode(mode).kappa_internal + external_damping(spec, mode);
}

} // namespace cavmag
