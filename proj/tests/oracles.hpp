#pragma once

// Reference computations written directly from the physics, sharing no code with the library.
// Frozen constants below were produced by these functions and cross-checked by hand.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace oracle {

inline constexpr double pi = std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double mu0 = 1.25663706212e-6;
inline constexpr double mu_b = 9.2740100783e-24;
inline constexpr double k_b = 1.380649e-23;
inline constexpr double g_e = 2.00232;

inline double w(double f_hz) { return 2.0 * pi * f_hz; }
inline double hz(double w_rad) { return w_rad / (2.0 * pi); }

inline double i_zpf(double z0, double w1) { return std::sqrt(2.0 * hbar / (pi * z0)) * w1; }

inline double g_xz(double gamma, double wire, double z0, double w1, double proj) {
  return proj * gamma * mu0 / (2.0 * wire) * i_zpf(z0, w1);
}

inline double spins(double m_s, double l, double wd, double t) { return m_s * l * wd * t / mu_b; }

inline double g_xx(double n, double wire, double z0, double w1, double wk, double proj) {
  const double brf = mu0 / (2.0 * wire);
  return proj * g_e * mu_b * brf * std::sqrt(w1 * wk) * std::sqrt(n / (2.0 * pi * hbar * z0));
}

inline double kappa_m_ext(double n, double wire, double wm, double z0, double gamma) {
  const double brf = mu0 / (2.0 * wire);
  return brf * brf * wm * mu_b * n * gamma / (2.0 * z0);
}

inline double bose(double wr, double t) { return 1.0 / std::expm1(hbar * wr / (k_b * t)); }

/// Lorentzian population for a drive on the magnon line.
inline double n_direct(double p, double wd, double k_ext, double k_m, double det) {
  return (2.0 * p / (hbar * wd)) * k_ext / (k_m * k_m + 4.0 * det * det);
}

/// Spring shift and damping from summing the two sideband susceptibilities.
inline std::pair<double, double> backaction(double n, double g, double det, double km, double w1,
                                            double probe) {
  const std::complex<double> i(0.0, 1.0);
  // chi(x) = 1/(kappa/2 - i x); the resonator response picks up Im/Re of the sideband sum.
  auto chi = [&](double x) { return 1.0 / (0.5 * km - i * x); };
  const auto s = chi(det + probe) + chi(det - probe);
  const auto d = chi(det + probe) - chi(det - probe);
  const double pre = n * g * g * w1 / probe;
  return {pre * s.imag(), pre * 2.0 * d.real()};
}

struct Amplitudes {
  std::complex<double> a2, a3, b;
};

/// Dense steady-state solve of the r2/r3/magnon block driven through the feedline.
inline Amplitudes solve_45(double wd, double w2, double w3, double wm, double k2, double k3,
                           double km, double g2, double g3, double f2, double f3) {
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  Eigen::Matrix3cd m;
  m << i * (wd - w2) - 0.5 * k2, 0.0, -i * g2,
       0.0, i * (wd - w3) - 0.5 * k3, -i * g3,
       -i * g2, -i * g3, i * (wd - wm) - 0.5 * km;
  Eigen::Vector3cd rhs(f2, f3, 0.0);
  const Eigen::Vector3cd x = m.fullPivLu().solve(rhs);
  return {x(0), x(1), x(2)};
}

/// Each harmonic solved with only its own drive; magnon amplitude rebuilt from those.
inline Amplitudes solve_45_isolated(double wd, double w2, double w3, double wm, double k2,
                                    double k3, double km, double g2, double g3, double f2,
                                    double f3) {
  const std::complex<double> i(0.0, 1.0);
  const auto only2 = solve_45(wd, w2, w3, wm, k2, k3, km, g2, g3, f2, 0.0);
  const auto only3 = solve_45(wd, w2, w3, wm, k2, k3, km, g2, g3, 0.0, f3);
  Amplitudes out{only2.a2, only3.a3, 0.0};
  out.b = (i * g2 * out.a2 + i * g3 * out.a3) / (i * (wd - wm) - 0.5 * km);
  return out;
}

inline double feed(double p, double wd, double wk, double k_ext) {
  return std::sqrt(p * wk * k_ext / (2.0 * hbar)) / wd;
}

/// Real-part splitting of two lossless modes crossing at equal frequency.
inline double two_mode_splitting(double g) { return 2.0 * g; }

inline double variance(double c, double nth, double ratio) {
  return ratio * (2.0 * nth + 1.0) + std::sqrt((2.0 * nth + 1.0) / c);
}

/// Deterministic generator for the property tests.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
};

// Frozen outputs of the functions above at the two parameter tables.
namespace frozen {
inline constexpr double i_zpf_a = 3.640348924468664e-09;
inline constexpr double g_xz_top_hz = 12.82028627755776;
inline constexpr double g_xz_45_hz = 9.065311363613931;
inline constexpr double n_yig = 377398770375.4553;
inline constexpr double n_vtcne = 2199695690188.3677;
inline constexpr double m_s_vtcne = 8161.128868904;  // A/m implied by N = 2.2e12
inline constexpr double kappa_m_ext_hz = 1946446.554298709;
inline constexpr double q_m_c = 10275.134426799536;
inline constexpr double g_xx2_vtcne_hz = 41982327.12249943;
inline constexpr double g_xx3_vtcne_hz = 43045339.07150202;
inline constexpr double g_xx2_yig_hz = 173894340.06242052;
inline constexpr double g_xx3_yig_hz = 178297425.21801227;
inline constexpr double n_th_500mhz_10mk = 0.0998103076567751;
inline constexpr double n_red_0dbm = 47950728.1251009;
inline constexpr double delta_kappa_m10dbm_hz = 798.8085914124462;
inline constexpr double kappa_r1_ext_hz = 1314.9243918474685;
inline constexpr double kappa_r3_ext_hz = 2210387.902695595;
} // namespace frozen

} // namespace oracle
