#include "cavmag/timedomain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "cavmag/dynamics.hpp"

namespace cavmag {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

SimState axpy(const SimState& s, double h, const SimState& k) {
  return {s.delta_beta_m + h * k.delta_beta_m, s.phi + h * k.phi, s.phi_dot + h * k.phi_dot};
}

bool finite(const SimState& s) {
  return std::isfinite(s.delta_beta_m.real()) && std::isfinite(s.delta_beta_m.imag()) &&
         std::isfinite(s.phi) && std::isfinite(s.phi_dot);
}

} // namespace

SimState LinearizedSystem::derivative(const SimState& s) const {
  SimState d;
  d.delta_beta_m = (kI * delta - 0.5 * kappa_m) * s.delta_beta_m + kI * big_g * beta_bar * s.phi;
  d.phi = s.phi_dot;
  const double drive = 2.0 * (std::conj(beta_bar) * s.delta_beta_m).real();
  d.phi_dot = -omega_r1 * omega_r1 * s.phi - kappa_r1 * s.phi_dot + hbar * big_g * drive / c1;
  return d;
}

LinearizedSystem linearized_system(const DeviceConfig& device, Frequency omega_m,
                                   std::complex<double> beta_bar, double delta) {
  if (device.geometry != Geometry::TopCPW)
    throw ValidationError("timedomain: only the top_cpw equations of motion are integrated");
  LinearizedSystem sys;
  sys.omega_r1 = device.omega_r1().rad_s();
  sys.kappa_r1 = device.kappa_r1();
  sys.kappa_m = device.kappa_m(omega_m.rad_s());
  sys.delta = delta;
  sys.big_g = device.couplings.big_g;
  sys.c1 = effective_c1(device.resonator);
  sys.hbar = device.constants.hbar;
  sys.beta_bar = beta_bar;
  return sys;
}

Trajectory integrate_linearized(const LinearizedSystem& sys, double phi0, double t_end,
                                double dt) {
  if (!(dt > 0)) throw ValidationError("integrate_linearized: dt must be > 0");
  if (!(t_end > dt)) throw ValidationError("integrate_linearized: t_end must exceed dt");
  const double fastest = std::max({sys.omega_r1, std::abs(sys.delta), sys.kappa_m});
  const double dt_max = kTwoPi / (50.0 * fastest);
  if (dt > dt_max * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "integrate_linearized: dt = " << dt << " s exceeds resolution limit " << dt_max << " s";
    throw ValidationError(os.str());
  }

  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  Trajectory traj;
  traj.params = sys;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);

  SimState s{{0.0, 0.0}, phi0, 0.0};
  traj.times.push_back(0.0);
  traj.states.push_back(s);
  for (std::size_t i = 1; i <= steps; ++i) {
    const SimState k1 = sys.derivative(s);
    const SimState k2 = sys.derivative(axpy(s, 0.5 * dt, k1));
    const SimState k3 = sys.derivative(axpy(s, 0.5 * dt, k2));
    const SimState k4 = sys.derivative(axpy(s, dt, k3));
    s.delta_beta_m += dt / 6.0 * (k1.delta_beta_m + 2.0 * k2.delta_beta_m +
                                  2.0 * k3.delta_beta_m + k4.delta_beta_m);
    s.phi += dt / 6.0 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi);
    s.phi_dot += dt / 6.0 * (k1.phi_dot + 2.0 * k2.phi_dot + 2.0 * k3.phi_dot + k4.phi_dot);
    if (!finite(s)) {
      std::ostringstream os;
      os << "integration diverged at step " << i;
      throw NumericalError(os.str());
    }
    traj.times.push_back(static_cast<double>(i) * dt);
    traj.states.push_back(s);
  }
  return traj;
}

Trajectory integrate_linearized(const DeviceConfig& device, Frequency omega_m,
                                std::complex<double> beta_bar, double delta, double phi0,
                                double t_end, double dt) {
  return integrate_linearized(linearized_system(device, omega_m, beta_bar, delta), phi0, t_end,
                              dt);
}

RingdownFit fit_ringdown(const std::vector<double>& times, const std::vector<double>& values) {
  const std::size_t n = times.size();
  if (n != values.size() || n < 8) throw ValidationError("fit_ringdown: need matching samples");
  const double t0 = times.front();

  // Zero crossings (linear interpolation) and per-half-cycle peaks.
  std::vector<double> crossings;
  std::vector<double> peak_t, peak_log;
  double peak = 0.0, peak_at = t0;
  for (std::size_t i = 1; i < n; ++i) {
    const double y0 = values[i - 1], y1 = values[i];
    if (std::abs(y1) > peak) {
      peak = std::abs(y1);
      peak_at = times[i];
    }
    if ((y0 < 0.0 && y1 >= 0.0) || (y0 > 0.0 && y1 <= 0.0)) {
      crossings.push_back(times[i - 1] + (times[i] - times[i - 1]) * y0 / (y0 - y1));
      if (crossings.size() > 1 && peak > 0.0) {
        peak_t.push_back(peak_at - t0);
        peak_log.push_back(std::log(peak));
      }
      peak = 0.0;
    }
  }
  if (crossings.size() < 40)
    throw ValidationError("fit_ringdown: trajectory holds fewer than 20 oscillation periods");

  double omega = std::numbers::pi * static_cast<double>(crossings.size() - 1) /
                 (crossings.back() - crossings.front());

  // Log-envelope slope = -kappa/2.
  double kappa = 0.0;
  {
    const double m = static_cast<double>(peak_t.size());
    double st = 0, sl = 0, stt = 0, stl = 0;
    for (std::size_t i = 0; i < peak_t.size(); ++i) {
      st += peak_t[i];
      sl += peak_log[i];
      stt += peak_t[i] * peak_t[i];
      stl += peak_t[i] * peak_log[i];
    }
    kappa = -2.0 * (m * stl - st * sl) / (m * stt - st * st);
  }

  // Model e^{-kappa tau/2} (a cos w tau + b sin w tau); a, b start from the linear solve.
  Eigen::Vector4d p;
  {
    Eigen::Matrix2d ata = Eigen::Matrix2d::Zero();
    Eigen::Vector2d atb = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const double tau = times[i] - t0;
      const double e = std::exp(-0.5 * kappa * tau);
      const Eigen::Vector2d row(e * std::cos(omega * tau), e * std::sin(omega * tau));
      ata += row * row.transpose();
      atb += row * values[i];
    }
    const Eigen::Vector2d ab = ata.ldlt().solve(atb);
    p << ab(0), ab(1), omega, kappa;
  }

  auto sse_of = [&](const Eigen::Vector4d& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double tau = times[i] - t0;
      const double e = std::exp(-0.5 * q(3) * tau);
      const double r = values[i] - e * (q(0) * std::cos(q(2) * tau) + q(1) * std::sin(q(2) * tau));
      s += r * r;
    }
    return s;
  };

  double norm2 = 0.0;
  for (double v : values) norm2 += v * v;

  double sse = sse_of(p);
  double lambda = 1e-3;
  bool converged = false;
  for (int it = 0; it < 200 && !converged; ++it) {
    Eigen::Matrix4d jtj = Eigen::Matrix4d::Zero();
    Eigen::Vector4d jtr = Eigen::Vector4d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const double tau = times[i] - t0;
      const double e = std::exp(-0.5 * p(3) * tau);
      const double c = std::cos(p(2) * tau), s = std::sin(p(2) * tau);
      const double model = e * (p(0) * c + p(1) * s);
      const Eigen::Vector4d j(e * c, e * s, e * tau * (-p(0) * s + p(1) * c), -0.5 * tau * model);
      jtj += j * j.transpose();
      jtr += j * (values[i] - model);
    }
    const Eigen::Vector4d scale = jtj.diagonal().cwiseSqrt().cwiseMax(1e-300);
    const Eigen::Matrix4d scaled = scale.asDiagonal().inverse() * jtj * scale.asDiagonal().inverse();
    const Eigen::Vector4d rhs = scale.asDiagonal().inverse() * jtr;

    bool accepted = false;
    Eigen::Vector4d step;
    while (lambda < 1e12) {
      Eigen::Matrix4d damped = scaled;
      damped.diagonal().array() += lambda;
      step = scale.asDiagonal().inverse() * damped.ldlt().solve(rhs);
      const Eigen::Vector4d trial = p + step;
      const double trial_sse = sse_of(trial);
      if (trial_sse <= sse) {
        p = trial;
        const double prev = sse;
        sse = trial_sse;
        lambda = std::max(lambda * 0.1, 1e-12);
        accepted = true;
        converged = prev - sse <= 1e-15 * prev;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) break;
    converged = converged || (std::abs(step(2)) <= 1e-15 * std::abs(p(2)) &&
                              std::abs(step(3)) <= 1e-13 * std::abs(p(2)));
  }

  RingdownFit fit;
  fit.omega = p(2);
  fit.kappa = p(3);
  const double amp = std::hypot(p(0), p(1));
  const double phase_w = std::atan2(-p(1), p(0));
  fit.amplitude = amp * std::exp(0.5 * fit.kappa * t0);
  fit.phase = phase_w - fit.omega * t0;
  fit.relative_residual = norm2 > 0 ? std::sqrt(sse / norm2) : 0.0;
  if (!(fit.relative_residual <= 1e-3)) {
    std::ostringstream os;
    os << "fit_ringdown: fit failed, relative residual " << fit.relative_residual;
    throw NumericalError(os.str());
  }
  return fit;
}

RingdownFit fit_ringdown(const Trajectory& traj, double t_skip) {
  std::vector<double> t, v;
  t.reserve(traj.times.size());
  v.reserve(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] < t_skip) continue;
    t.push_back(traj.times[i]);
    v.push_back(traj.states[i].phi);
  }
  return fit_ringdown(t, v);
}

BackactionComparison verify_backaction(const DeviceConfig& device, Frequency omega_m, double n_m,
                                       double delta, const OracleSettings& settings) {
  const auto coupled = linearized_system(device, omega_m, std::sqrt(n_m), delta);
  auto bare = coupled;
  bare.beta_bar = 0.0;

  const double fastest = std::max({coupled.omega_r1, std::abs(delta), coupled.kappa_m});
  const double dt = kTwoPi / (static_cast<double>(settings.steps_per_period) * fastest);
  const double t_skip = settings.skip_kappa_m_times / coupled.kappa_m;
  const double phi0 = device.couplings.flux_zpf;

  const auto fit_c = fit_ringdown(integrate_linearized(coupled, phi0, settings.t_end, dt), t_skip);
  const auto fit_b = fit_ringdown(integrate_linearized(bare, phi0, settings.t_end, dt), t_skip);

  const auto [dw, dk] = sideband_backaction(n_m, device.couplings.g_xz1, delta, coupled.kappa_m,
                                            coupled.omega_r1, coupled.omega_r1);
  BackactionComparison out;
  out.delta_omega_analytic = dw;
  out.delta_kappa_analytic = dk;
  out.omega_eff = fit_c.omega;
  out.kappa_eff = fit_c.kappa;
  out.omega_bare = fit_b.omega;
  out.kappa_bare = fit_b.kappa;
  out.delta_omega_oracle = fit_c.omega - fit_b.omega;
  out.delta_kappa_oracle = fit_c.kappa - fit_b.kappa;
  // Relative to the analytic value, or to kappa_r1 where the analytic value vanishes.
  auto rel = [&](double oracle, double analytic) {
    const double denom = analytic != 0.0 ? std::abs(analytic) : coupled.kappa_r1;
    return std::abs(oracle - analytic) / denom;
  };
  out.rel_err_omega = rel(out.delta_omega_oracle, dw);
  out.rel_err_kappa = rel(out.delta_kappa_oracle, dk);
  out.coupling_ratio = std::sqrt(n_m) * device.couplings.g_xz1 / coupled.kappa_m;
  out.dt = dt;
  return out;
}

DeviceConfig desk_scaled_device() {
  ResonatorSpec r;
  r.z0 = 50.0;
  r.omega_r1 = Frequency::hz(1.0e6);
  r.modes = {ResonatorMode{r.omega_r1, from_hz(500.0), from_hz(500.0)}};
  DeviceOverrides o;
  o.g_xz1 = from_hz(12.835);
  o.kappa_m_ext = from_hz(100.0e3);
  return make_device(Geometry::TopCPW, r, yig_preset(), 5e-6, from_hz(100.0e3), o);
}

double desk_population(const DeviceConfig& device, double delta, double ratio) {
  const double w1 = device.omega_r1().rad_s();
  // kappa_m is overridden on the desk device, so the magnon frequency is immaterial.
  const double km = device.kappa_m(from_hz(20e9));
  const double per_magnon = sideband_backaction(1.0, device.couplings.g_xz1, delta, km, w1, w1).second;
  if (per_magnon == 0.0) throw ValidationError("desk_population: no damping at this detuning");
  return std::abs(ratio * device.kappa_r1() / per_magnon);
}

} // namespace cavmag
