#include "cavmag/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace cavmag {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_geometry(const DeviceConfig& d, Geometry g, const char* op) {
  if (d.geometry != g)
    throw ValidationError(std::string(op) + ": requires geometry " + to_string(g));
}

void fill_flags(BackactionResult& r, const DeviceConfig& d, double kappa_m, const Thresholds& t) {
  const double g = d.couplings.g_xz1;
  r.weak_coupling_ok = std::sqrt(r.n_m) * g / kappa_m < t.weak_coupling;
  r.kerr_ok = kerr_shift(d.magnet, r.n_m) / kappa_m < t.kerr;
  r.population_ok = r.n_m / d.spins() < t.population;
}

/// Solves omega = omega_r1 + shift(omega) by fixed-point iteration.
template <class ShiftFn>
double self_consistent_probe(double omega_r1, ShiftFn shift) {
  double omega = omega_r1;
  for (int it = 0; it < 200; ++it) {
    const double next = omega_r1 + shift(omega);
    if (!std::isfinite(next)) break;
    if (std::abs(next - omega) <= 1e-14 * omega_r1) return next;
    omega = next;
  }
  throw NumericalError("self-consistent probe frequency did not converge");
}

} // namespace

void DriveSpec::validate() const {
  if (!(power >= 0)) throw ValidationError("drive: power must be >= 0");
  if (!(omega_d.rad_s() > 0)) throw ValidationError("drive: omega_d must be > 0");
}

std::pair<double, double> sideband_backaction(double n_m, double g, double delta, double kappa_m,
                                              double omega_r1, double omega) {
  const double hk2 = 0.25 * kappa_m * kappa_m;
  const double up = delta + omega;
  const double dn = delta - omega;
  const double pre = n_m * g * g * (omega_r1 / omega);
  const double shift = pre * (up / (up * up + hk2) + dn / (dn * dn + hk2));
  const double damping = pre * (kappa_m / (up * up + hk2) - kappa_m / (dn * dn + hk2));
  return {shift, damping};
}

double magnon_number_direct(const DeviceConfig& device, const DriveSpec& drive,
                            Frequency omega_m) {
  require_geometry(device, Geometry::TopCPW, "magnon_number_direct");
  if (drive.port != DrivePort::MagnonLine)
    throw ValidationError("magnon_number_direct: drive must be on the magnon driving line");
  drive.validate();
  const double wd = drive.omega_d.rad_s();
  const double wm = omega_m.rad_s();
  const double k_ext = device.kappa_m_ext(wm);
  const double k_m = device.kappa_m(wm);
  const double detuning = wd - wm;
  return (2.0 * drive.power / (device.constants.hbar * wd)) * k_ext /
         (k_m * k_m + 4.0 * detuning * detuning);
}

BackactionResult backaction_top(const DeviceConfig& device, double n_m, double delta,
                                Frequency omega_m, std::optional<double> probe_omega,
                                const DynamicsOptions& opts) {
  require_geometry(device, Geometry::TopCPW, "backaction_top");
  if (!(n_m >= 0)) throw ValidationError("backaction_top: n_m must be >= 0");
  const double w1 = device.omega_r1().rad_s();
  const double k_m = device.kappa_m(omega_m.rad_s());
  const double g = device.couplings.g_xz1;
  double omega = probe_omega.value_or(w1);
  if (!(omega > 0)) throw ValidationError("backaction_top: probe omega must be > 0");
  if (opts.probe == ProbeMode::SelfConsistent) {
    omega = self_consistent_probe(w1, [&](double w) {
      return sideband_backaction(n_m, g, delta, k_m, w1, w).first;
    });
  }
  BackactionResult r;
  r.n_m = n_m;
  std::tie(r.delta_omega_r1, r.delta_kappa_r1) = sideband_backaction(n_m, g, delta, k_m, w1, omega);
  fill_flags(r, device, k_m, opts.thresholds);
  return r;
}

BackactionResult backaction_top_driven(const DeviceConfig& device, const DriveSpec& drive,
                                       Frequency omega_m, const DynamicsOptions& opts) {
  const double n = magnon_number_direct(device, drive, omega_m);
  return backaction_top(device, n, drive.omega_d.rad_s() - omega_m.rad_s(), omega_m, {}, opts);
}

double feedline_drive_amplitude(double power, double omega_d, double omega_mode,
                                double kappa_ext, const PhysicalConstants& c) {
  // sqrt(2 P Q_c / hbar w_d^2) * kappa_ext / 2 with Q_c = w_mode / kappa_ext; finite at kappa_ext = 0.
  return std::sqrt(power * omega_mode * kappa_ext / (2.0 * c.hbar)) / omega_d;
}

DrivenAmplitudes driven_amplitudes_45(const DeviceConfig& device, const DriveSpec& drive,
                                      double b_field, CrossDrive cross) {
  require_geometry(device, Geometry::FortyFive, "driven_amplitudes_45");
  if (drive.port != DrivePort::Feedline)
    throw ValidationError("driven_amplitudes_45: drive must be on the resonator feedline");
  drive.validate();
  if (!(b_field >= 0)) throw ValidationError("driven_amplitudes_45: field must be >= 0");

  const auto& res = device.resonator;
  const Frequency f2 = device.omega_r2();
  const Frequency f3 = device.omega_r3();
  const double wd = drive.omega_d.rad_s();
  const double wm = larmor_frequency(device.magnet, b_field);
  const double k2 = total_damping(res, f2);
  const double k3 = total_damping(res, f3);
  const double km = device.kappa_m(wm);
  const double g2 = device.g_xx_at(f2, b_field);
  const double g3 = device.g_xx_at(f3, b_field);

  const cplx d2 = kI * (wd - f2.rad_s()) - 0.5 * k2;
  const cplx d3 = kI * (wd - f3.rad_s()) - 0.5 * k3;
  const cplx dm = kI * (wd - wm) - 0.5 * km;

  const double p = drive.power;
  const double drive2 = feedline_drive_amplitude(p, wd, f2.rad_s(), external_damping(res, f2),
                                                 device.constants);
  const double drive3 = feedline_drive_amplitude(p, wd, f3.rad_s(), external_damping(res, f3),
                                                 device.constants);

  // Each harmonic driven on its own, with the other dressing the magnon.
  const cplx magnon_via3 = dm + g3 * g3 / d3;
  const cplx magnon_via2 = dm + g2 * g2 / d2;
  const cplx a2_direct = drive2 / (d2 + g2 * g2 / magnon_via3);
  const cplx a3_direct = drive3 / (d3 + g3 * g3 / magnon_via2);

  DrivenAmplitudes out;
  out.alpha_r2 = a2_direct;
  out.alpha_r3 = a3_direct;
  if (cross == CrossDrive::Included) {
    // Feed of r3's drive into r2 through the magnon, and vice versa.
    const cplx beta_from3 = kI * g3 * a3_direct / magnon_via2;
    const cplx beta_from2 = kI * g2 * a2_direct / magnon_via3;
    out.alpha_r2 += kI * g2 * beta_from3 / d2;
    out.alpha_r3 += kI * g3 * beta_from2 / d3;
  }
  out.beta_m = (kI * g2 * out.alpha_r2 + kI * g3 * out.alpha_r3) / dm;
  return out;
}

double magnon_number_45(const DeviceConfig& device, const DriveSpec& drive, double b_field,
                        CrossDrive cross) {
  return std::norm(driven_amplitudes_45(device, drive, b_field, cross).beta_m);
}

HybridCoefficients hybrid_coefficients(const DeviceConfig& device, double omega_d, double b_field,
                                       double omega) {
  const auto& res = device.resonator;
  const Frequency f2 = device.omega_r2();
  const Frequency f3 = device.omega_r3();
  const double wm = larmor_frequency(device.magnet, b_field);
  const double dm = wm - omega_d;
  const double dr2 = f2.rad_s() - omega_d;
  const double dr3 = f3.rad_s() - omega_d;
  const double k2 = total_damping(res, f2);
  const double k3 = total_damping(res, f3);
  const double km = device.kappa_m(wm);
  const double g2s = std::pow(device.g_xx_at(f2, b_field), 2);
  const double g3s = std::pow(device.g_xx_at(f3, b_field), 2);

  auto lorentz = [](double x, double k) { return 0.25 * k * k + x * x; };
  const double x2p = -dr2 + omega, x3p = -dr3 + omega;
  const double x2m = -dr2 - omega, x3m = -dr3 - omega;

  HybridCoefficients h;
  h.a = -dm + omega - g2s * x2p / lorentz(x2p, k2) - g3s * x3p / lorentz(x3p, k3);
  h.b = -dm - omega - g2s * x2m / lorentz(x2m, k2) - g3s * x3m / lorentz(x3m, k3);
  h.c = 0.5 * km + g2s * 0.5 * k2 / lorentz(x2p, k2) + g3s * 0.5 * k3 / lorentz(x3p, k3);
  h.d = 0.5 * km + g2s * 0.5 * k2 / lorentz(x2m, k2) + g3s * 0.5 * k3 / lorentz(x3m, k3);
  return h;
}

BackactionResult backaction_45_population(const DeviceConfig& device, double n_m, double omega_d,
                                          double b_field, std::optional<double> probe_omega,
                                          const DynamicsOptions& opts) {
  require_geometry(device, Geometry::FortyFive, "backaction_45");
  if (!(n_m >= 0)) throw ValidationError("backaction_45: n_m must be >= 0");
  const double w1 = device.omega_r1().rad_s();
  const double g = device.couplings.g_xz1;

  auto evaluate = [&](double omega) {
    const auto h = hybrid_coefficients(device, omega_d, b_field, omega);
    const double pre = n_m * g * g * (w1 / omega);
    const double ac = h.a * h.a + h.c * h.c;
    const double bd = h.b * h.b + h.d * h.d;
    // Minus sign: -2 Im[1/(A + iC) + 1/(B - iD)], the form that reduces to the single-cavity result.
    return std::pair{pre * (h.a / ac + h.b / bd), pre * (2.0 * h.c / ac - 2.0 * h.d / bd)};
  };

  double omega = probe_omega.value_or(w1);
  if (!(omega > 0)) throw ValidationError("backaction_45: probe omega must be > 0");
  if (opts.probe == ProbeMode::SelfConsistent)
    omega = self_consistent_probe(w1, [&](double w) { return evaluate(w).first; });

  BackactionResult r;
  r.n_m = n_m;
  std::tie(r.delta_omega_r1, r.delta_kappa_r1) = evaluate(omega);
  fill_flags(r, device, device.kappa_m(larmor_frequency(device.magnet, b_field)),
             opts.thresholds);
  return r;
}

BackactionResult backaction_45(const DeviceConfig& device, const DriveSpec& drive, double b_field,
                               std::optional<double> probe_omega, const DynamicsOptions& opts) {
  const double n = magnon_number_45(device, drive, b_field, opts.cross_drive);
  return backaction_45_population(device, n, drive.omega_d.rad_s(), b_field, probe_omega, opts);
}

std::array<cplx, 3> hybrid_eigenmodes(const DeviceConfig& device, double b_field) {
  require_geometry(device, Geometry::FortyFive, "hybrid_eigenmodes");
  const auto& res = device.resonator;
  const Frequency f2 = device.omega_r2();
  const Frequency f3 = device.omega_r3();
  const double wm = larmor_frequency(device.magnet, b_field);
  const double g2 = device.g_xx_at(f2, b_field);
  const double g3 = device.g_xx_at(f3, b_field);

  Eigen::Matrix3cd m;
  m << cplx(f2.rad_s(), -0.5 * total_damping(res, f2)), 0.0, g2,
       0.0, cplx(f3.rad_s(), -0.5 * total_damping(res, f3)), g3,
       g2, g3, cplx(wm, -0.5 * device.kappa_m(wm));
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(m, false);
  if (solver.info() != Eigen::Success) throw NumericalError("hybrid_eigenmodes: eigensolver failed");
  std::array<cplx, 3> out;
  for (int i = 0; i < 3; ++i) out[i] = solver.eigenvalues()[i];
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  return out;
}

} // namespace cavmag
