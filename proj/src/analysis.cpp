#include "cavmag/analysis.hpp"

#include <cmath>

namespace cavmag {

std::vector<SpectrumPoint> s21_spectrum(double omega_r_eff, double kappa_total_eff,
                                        double kappa_ext, std::span<const double> probe_grid) {
  if (!(kappa_ext >= 0)) throw ValidationError("s21_spectrum: kappa_ext must be >= 0");
  if (kappa_ext > kappa_total_eff)
    throw ValidationError("s21_spectrum: unphysical parameters, kappa_ext > kappa_total");
  std::vector<SpectrumPoint> out;
  out.reserve(probe_grid.size());
  for (double wp : probe_grid) {
    const std::complex<double> den(0.5 * kappa_total_eff, wp - omega_r_eff);
    out.push_back({wp, 1.0 - 0.5 * kappa_ext / den});
  }
  return out;
}

std::vector<double> probe_grid(double centre, double half_span, std::size_t count) {
  if (count < 2) throw ValidationError("probe_grid: need at least 2 points");
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = centre - half_span + 2.0 * half_span * static_cast<double>(i) / static_cast<double>(count - 1);
  return g;
}

void SqueezingInputs::validate() const {
  if (!(n_minus >= 0 && g_xz1 >= 0 && n_th >= 0))
    throw ValidationError("squeezing inputs must be non-negative");
  if (!(kappa_r1 > 0 && kappa_m > 0))
    throw ValidationError("squeezing inputs: kappa_r1 and kappa_m must be > 0");
}

double cooperativity(const SqueezingInputs& in) {
  in.validate();
  return in.n_minus * in.g_xz1 * in.g_xz1 / (in.kappa_r1 * in.kappa_m);
}

SqueezedVariance squeezed_variance(double coop, double n_th, double kappa_ratio) {
  if (!(coop > 0)) throw NumericalError("squeezed_variance: variance diverges at C = 0");
  if (!(n_th >= 0 && kappa_ratio >= 0))
    throw ValidationError("squeezed_variance: n_th and kappa ratio must be >= 0");
  const double thermal = 2.0 * n_th + 1.0;
  SqueezedVariance out;
  out.cooperativity = coop;
  out.variance = kappa_ratio * thermal + std::sqrt(thermal / coop);
  out.squeezing_db = -10.0 * std::log10(out.variance);
  out.low_cooperativity = coop < 10.0;
  return out;
}

SqueezedVariance squeezed_variance(const SqueezingInputs& in) {
  return squeezed_variance(cooperativity(in), in.n_th, in.kappa_r1 / in.kappa_m);
}

SqueezingValidity squeezing_validity(const DeviceConfig& device, const SqueezingInputs& in,
                                     double coop) {
  SqueezingValidity v;
  v.population = {in.n_minus / device.spins(), 0.01, false};
  v.population.pass = v.population.value < v.population.threshold;
  v.kerr = {kerr_shift(device.magnet, in.n_minus) / in.kappa_m, 1.0, false};
  v.kerr.pass = v.kerr.value < v.kerr.threshold;
  v.cooperativity = {coop, 10.0, coop >= 10.0};
  v.sideband_resolved = {in.kappa_m / device.omega_r1().rad_s(), 1.0, false};
  v.sideband_resolved.pass = v.sideband_resolved.value < v.sideband_resolved.threshold;
  return v;
}

} // namespace cavmag
