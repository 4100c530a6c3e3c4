#pragma once

#include <complex>
#include <vector>

#include "cavmag/device.hpp"

namespace cavmag {

/// Fluctuation state of the linearized top-CPW equations of motion.
struct SimState {
  std::complex<double> delta_beta_m;
  double phi = 0.0;      // Wb
  double phi_dot = 0.0;  // Wb/s
};

/// Coefficients of the linearized equations:
///   d(dbeta)/dt = (i delta - kappa_m/2) dbeta + i G beta_bar phi
///   C1 phi''    = -C1 w_r1^2 phi - C1 kappa_r1 phi' + hbar G (beta_bar* dbeta + beta_bar dbeta*)
struct LinearizedSystem {
  double omega_r1 = 0.0;
  double kappa_r1 = 0.0;
  double kappa_m = 0.0;
  double delta = 0.0;   // omega_d - omega_m
  double big_g = 0.0;   // rad/s per Wb
  double c1 = 0.0;
  double hbar = 0.0;
  std::complex<double> beta_bar;

  SimState derivative(const SimState& s) const;
};

LinearizedSystem linearized_system(const DeviceConfig& device, Frequency omega_m,
                                   std::complex<double> beta_bar, double delta);

struct Trajectory {
  std::vector<double> times;
  std::vector<SimState> states;
  LinearizedSystem params;
};

/// Fixed-step RK4 from (dbeta = 0, phi = phi0, phi' = 0).
/// Rejects dt coarser than 1/50 of the fastest period among (w_r1, |delta|, kappa_m).
Trajectory integrate_linearized(const LinearizedSystem& sys, double phi0, double t_end, double dt);

Trajectory integrate_linearized(const DeviceConfig& device, Frequency omega_m,
                                std::complex<double> beta_bar, double delta, double phi0,
                                double t_end, double dt);

struct RingdownFit {
  double omega = 0.0;
  double kappa = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
  double relative_residual = 0.0;
};

/// Least-squares fit of phi(t) to A exp(-kappa t/2) cos(omega t + phase) over samples with t >= t_skip.
RingdownFit fit_ringdown(const Trajectory& traj, double t_skip = 0.0);

/// Same fit on raw samples.
RingdownFit fit_ringdown(const std::vector<double>& times, const std::vector<double>& values);

struct OracleSettings {
  double t_end = 2.0e-3;
  /// Samples per period of the fastest rate.
  int steps_per_period = 64;
  /// Transient skipped before fitting, in units of 1/kappa_m.
  double skip_kappa_m_times = 20.0;
};

struct BackactionComparison {
  double delta_omega_analytic = 0.0;
  double delta_omega_oracle = 0.0;
  double delta_kappa_analytic = 0.0;
  double delta_kappa_oracle = 0.0;
  double rel_err_omega = 0.0;
  double rel_err_kappa = 0.0;
  double omega_eff = 0.0;          // coupled fit
  double kappa_eff = 0.0;
  double omega_bare = 0.0;         // uncoupled fit at identical step size
  double kappa_bare = 0.0;
  double coupling_ratio = 0.0;     // sqrt(n_m) g / kappa_m
  double dt = 0.0;
};

/// Runs the coupled and uncoupled ringdowns and compares their difference with the
/// frequency-domain spring shift and damping at probe omega = omega_r1.
/// The uncoupled run shares the step size, so integrator phase error cancels in the difference.
BackactionComparison verify_backaction(const DeviceConfig& device, Frequency omega_m, double n_m,
                                       double delta, const OracleSettings& settings = {});

/// Scaled top-CPW device for the oracle: 1 MHz fundamental, 1 kHz linewidth, 200 kHz magnon linewidth.
DeviceConfig desk_scaled_device();

/// Population at which the sideband damping equals `ratio * kappa_r1` for the given detuning.
double desk_population(const DeviceConfig& device, double delta, double ratio);

} // namespace cavmag
