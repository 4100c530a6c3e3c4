#pragma once

#include <array>
#include <complex>
#include <optional>

#include "cavmag/device.hpp"

namespace cavmag {

using cplx = std::complex<double>;

enum class DrivePort { MagnonLine, Feedline };

struct DriveSpec {
  double power = 0.0;    // W
  Frequency omega_d;
  DrivePort port = DrivePort::MagnonLine;

  void validate() const;
};

/// Ratio thresholds for the validity flags.
struct Thresholds {
  double weak_coupling = 0.1;  // sqrt(n_m) g_xz1 / kappa_m
  double kerr = 1.0;           // K n_m / kappa_m
  double population = 0.01;    // n_m / N
};

struct BackactionResult {
  double delta_omega_r1 = 0.0;
  double delta_kappa_r1 = 0.0;
  double n_m = 0.0;
  bool weak_coupling_ok = true;
  bool kerr_ok = true;
  bool population_ok = true;
};

enum class ProbeMode {
  Fixed,            // omega = omega_r1 (or the supplied probe)
  SelfConsistent,   // iterate omega = omega_r1 + delta_omega_r1(omega)
};

/// How the two feedline-driven harmonics share the drive.
enum class CrossDrive {
  Included,   // exact steady state of the three coupled modes
  Neglected,  // each harmonic sees only its own feedline drive
};

struct DynamicsOptions {
  ProbeMode probe = ProbeMode::Fixed;
  CrossDrive cross_drive = CrossDrive::Included;
  Thresholds thresholds;
};

/// Spring shift and damping from the two magnon sidebands, single-cavity form.
/// `delta` is omega_d - omega_m; `omega` is the probe frequency.
std::pair<double, double> sideband_backaction(double n_m, double g, double delta, double kappa_m,
                                              double omega_r1, double omega);

/// Lorentzian magnon population for a drive on the magnon driving line.
double magnon_number_direct(const DeviceConfig& device, const DriveSpec& drive,
                            Frequency omega_m);

/// Backaction on the fundamental for the top-CPW geometry at a given population.
BackactionResult backaction_top(const DeviceConfig& device, double n_m, double delta,
                                Frequency omega_m, std::optional<double> probe_omega = {},
                                const DynamicsOptions& opts = {});

/// magnon_number_direct followed by backaction_top at delta = omega_d - omega_m.
BackactionResult backaction_top_driven(const DeviceConfig& device, const DriveSpec& drive,
                                       Frequency omega_m, const DynamicsOptions& opts = {});

struct DrivenAmplitudes {
  cplx alpha_r2;
  cplx alpha_r3;
  cplx beta_m;
};

/// Feedline drive amplitude entering a harmonic: sqrt(2 P Q_c / hbar w_d^2) kappa_ext / 2.
double feedline_drive_amplitude(double power, double omega_d, double omega_mode,
                                double kappa_ext, const PhysicalConstants& c = kConstants);

/// Steady-state amplitudes of the two driven harmonics and the Kittel mode (45 degree geometry).
DrivenAmplitudes driven_amplitudes_45(const DeviceConfig& device, const DriveSpec& drive,
                                      double b_field, CrossDrive cross = CrossDrive::Included);

double magnon_number_45(const DeviceConfig& device, const DriveSpec& drive, double b_field,
                        CrossDrive cross = CrossDrive::Included);

/// Hybridized-denominator coefficients at one operating point.
struct HybridCoefficients {
  double a = 0, b = 0, c = 0, d = 0;
};

HybridCoefficients hybrid_coefficients(const DeviceConfig& device, double omega_d, double b_field,
                                       double omega);

/// Backaction for the 45 degree geometry with an externally supplied population.
BackactionResult backaction_45_population(const DeviceConfig& device, double n_m, double omega_d,
                                          double b_field, std::optional<double> probe_omega = {},
                                          const DynamicsOptions& opts = {});

BackactionResult backaction_45(const DeviceConfig& device, const DriveSpec& drive, double b_field,
                               std::optional<double> probe_omega = {},
                               const DynamicsOptions& opts = {});

/// Complex eigenfrequencies of the r2/r3/magnon block, sorted by real part.
std::array<cplx, 3> hybrid_eigenmodes(const DeviceConfig& device, double b_field);

} // namespace cavmag
