#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cavmag/dynamics.hpp"

namespace cavmag {

struct SpectrumPoint {
  double omega_p = 0.0;
  std::complex<double> s21;
};

/// Notch (side-coupled) response 1 - (kappa_ext/2) / (i(w_p - w_r) + kappa_total/2).
std::vector<SpectrumPoint> s21_spectrum(double omega_r_eff, double kappa_total_eff,
                                        double kappa_ext, std::span<const double> probe_grid);

/// Evenly spaced probe grid of `count` points centred on `centre`.
std::vector<double> probe_grid(double centre, double half_span, std::size_t count);

struct SqueezingInputs {
  double n_minus = 0.0;  // magnon number at the red sideband
  double g_xz1 = 0.0;
  double kappa_r1 = 0.0;
  double kappa_m = 0.0;
  double n_th = 0.0;

  void validate() const;
};

/// C = n_- g^2 / (kappa_r1 kappa_m).
double cooperativity(const SqueezingInputs& in);

struct SqueezedVariance {
  double variance = 0.0;   // 2 <dX1^2>, vacuum = 1
  double squeezing_db = 0.0;
  double cooperativity = 0.0;
  bool low_cooperativity = false;  // C < 10: large-C approximation is doubtful
};

/// (kappa_r1/kappa_m)(2 n_th + 1) + sqrt((2 n_th + 1)/C).
SqueezedVariance squeezed_variance(double coop, double n_th, double kappa_ratio);
SqueezedVariance squeezed_variance(const SqueezingInputs& in);

struct ValidityCheck {
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct SqueezingValidity {
  ValidityCheck population;       // n_-/N < 0.01
  ValidityCheck kerr;             // K n_- / kappa_m < 1
  ValidityCheck cooperativity;    // C >= 10
  ValidityCheck sideband_resolved;  // kappa_m / w_r1 < 1
};

SqueezingValidity squeezing_validity(const DeviceConfig& device, const SqueezingInputs& in,
                                     double coop);

} // namespace cavmag
