#include "cavmag/core.hpp"

namespace cavmag {

void PhysicalConstants::validate() const {
  if (!(hbar > 0 && mu0 > 0 && mu_b > 0 && k_b > 0 && g_e > 0))
    throw ValidationError("physical constants must be strictly positive");
}

double dbm_to_watts(double p_dbm) {
  if (!std::isfinite(p_dbm)) throw ValidationError("power in dBm must be finite");
  return 1.0e-3 * std::pow(10.0, p_dbm / 10.0);
}

double thermal_occupation(double omega, double temperature, const PhysicalConstants& c) {
  if (!(omega > 0)) throw ValidationError("thermal_occupation: omega must be > 0");
  if (!(temperature >= 0)) throw ValidationError("thermal_occupation: temperature must be >= 0");
  if (temperature == 0) return 0.0;
  const double x = c.hbar * omega / (c.k_b * temperature);
  // expm1 keeps precision in the classical limit; exp overflow gives 1/inf = 0.
  return 1.0 / std::expm1(x);
}

} // namespace cavmag
