#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cavmag {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Physical constants in SI units (CODATA 2018).
struct PhysicalConstants {
  double hbar = 1.054571817e-34;  // J s
  double mu0 = 1.25663706212e-6;  // T m / A
  double mu_b = 9.2740100783e-24; // J / T
  double k_b = 1.380649e-23;      // J / K
  double g_e = 2.00232;           // electron Lande factor

  void validate() const;
};

inline constexpr PhysicalConstants kConstants{};

/// Default gyromagnetic ratio, rad/s per T (2pi x 28.02495 GHz/T).
inline constexpr double kDefaultGamma = kTwoPi * 28.02495e9;

/// 1 emu/cm^3 = 1e3 A/m.
inline constexpr double kEmuPerCm3 = 1.0e3;

/// Angular frequency in rad/s. All I/O boundaries speak Hz.
class Frequency {
 public:
  constexpr Frequency() = default;
  static constexpr Frequency rad_s(double w) { return Frequency(w); }
  static constexpr Frequency hz(double f) { return Frequency(kTwoPi * f); }

  constexpr double rad_s() const { return value_; }
  constexpr double in_hz() const { return value_ / kTwoPi; }

  friend constexpr bool operator==(Frequency, Frequency) = default;
  friend constexpr auto operator<=>(Frequency, Frequency) = default;

 private:
  explicit constexpr Frequency(double w) : value_(w) {}
  double value_ = 0.0;
};

inline constexpr double to_hz(double rad_s) { return rad_s / kTwoPi; }
inline constexpr double from_hz(double hz) { return hz * kTwoPi; }

/// Raised for invalid configuration or out-of-domain inputs. CLI exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation diverges or fails to converge. CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double dbm_to_watts(double p_dbm);

/// Bose-Einstein occupation 1/(exp(hbar w / kB T) - 1); 0 at T = 0.
double thermal_occupation(double omega, double temperature,
                          const PhysicalConstants& c = kConstants);

} // namespace cavmag
