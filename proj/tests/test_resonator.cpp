#include <doctest.h>

#include "cavmag/resonator.hpp"
#include "oracles.hpp"

using namespace cavmag;
using doctest::Approx;

namespace {

ResonatorSpec fundamental_only(double z0 = 50.0, double f1 = 500e6) {
  ResonatorSpec r;
  r.z0 = z0;
  r.omega_r1 = Frequency::hz(f1);
  r.modes = {ResonatorMode{r.omega_r1, from_hz(500.0), from_hz(500.0)}};
  return r;
}

ResonatorSpec three_modes() {
  ResonatorSpec r;
  r.omega_r1 = Frequency::hz(500e6);
  r.modes = {ResonatorMode{Frequency::hz(500e6), from_hz(500.0), {}},
             ResonatorMode{Frequency::hz(19.5e9), from_hz(20e3), {}},
             ResonatorMode{Frequency::hz(20.5e9), from_hz(20e3), {}}};
  r.calibration = KappaCalibration{Frequency::hz(19.5e9), from_hz(2e6)};
  return r;
}

} // namespace

TEST_CASE("lumped equivalents of the quarter-wave line") {
  const auto r = fundamental_only();
  CHECK(total_capacitance(r) == Approx(10.0e-12).epsilon(1e-12));
  CHECK(total_inductance(r) == Approx(25.0e-9).epsilon(1e-12));
  CHECK(total_capacitance(fundamental_only(100.0)) == Approx(5.0e-12).epsilon(1e-12));
  CHECK(total_inductance(fundamental_only(100.0)) == Approx(50.0e-9).epsilon(1e-12));
  CHECK(total_capacitance(fundamental_only(50.0, 1e9)) == Approx(0.5 * total_capacitance(r)));
  const double w1 = r.omega_r1.rad_s();
  CHECK(total_inductance(r) * total_capacitance(r) * w1 * w1 ==
        Approx(std::numbers::pi * std::numbers::pi / 4.0).epsilon(1e-12));
}

TEST_CASE("zero-point current at the antinode") {
  const auto r = fundamental_only();
  CHECK(i_zpf(r) == Approx(oracle::frozen::i_zpf_a).epsilon(1e-12));
  CHECK(oracle::i_zpf(50.0, oracle::w(500e6)) == Approx(oracle::frozen::i_zpf_a).epsilon(1e-12));
  CHECK(i_zpf(r) == Approx(3.64e-9).epsilon(0.005));
  const double w1 = r.omega_r1.rad_s();
  CHECK(i_zpf(r) / i_zpf_half_wave(50.0, w1) == Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(i_zpf(r) / i_zpf_lumped(50.0, w1) == Approx(std::sqrt(4.0 / std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("zero-point current scaling") {
  oracle::Gen gen(21);
  for (int i = 0; i < 100; ++i) {
    const double z0 = gen.uniform(5, 200), f = gen.log_uniform(1e8, 1e10);
    const double base = i_zpf(fundamental_only(z0, f));
    CHECK(i_zpf(fundamental_only(z0, 2 * f)) == Approx(2 * base).epsilon(1e-12));
    CHECK(i_zpf(fundamental_only(4 * z0, f)) == Approx(0.5 * base).epsilon(1e-12));
    const auto r = fundamental_only(z0, f);
    CHECK(total_capacitance(r) * z0 * z0 == Approx(total_inductance(r)).epsilon(1e-14));
  }
}

TEST_CASE("external damping from a calibration pair") {
  const auto r = three_modes();
  CHECK(to_hz(external_damping(r, Frequency::hz(20.5e9))) ==
        Approx(oracle::frozen::kappa_r3_ext_hz).epsilon(1e-12));
  CHECK(to_hz(external_damping(r, Frequency::hz(20.5e9))) == Approx(2.21e6).epsilon(0.01));
  CHECK(to_hz(external_damping(r, Frequency::hz(500e6))) ==
        Approx(oracle::frozen::kappa_r1_ext_hz).epsilon(1e-12));
  CHECK(coupling_q(r, Frequency::hz(19.5e9)) == Approx(9750.0).epsilon(1e-12));
  CHECK(to_hz(total_damping(r, Frequency::hz(19.5e9))) == Approx(2.02e6).epsilon(1e-12));
}

TEST_CASE("external damping precedence and coupling capacitance") {
  auto r = three_modes();
  r.modes[0].kappa_ext_override = from_hz(1.25e3);
  CHECK(to_hz(external_damping(r, Frequency::hz(500e6))) == Approx(1.25e3));
  r.calibration.reset();
  r.coupling_capacitance = 0.0;
  CHECK(external_damping(r, Frequency::hz(19.5e9)) == 0.0);
  CHECK_THROWS_AS(coupling_q(r, Frequency::hz(19.5e9)), ValidationError);
  r.coupling_capacitance = 2e-15;
  const double q = coupling_q(r, Frequency::hz(19.5e9));
  r.coupling_capacitance = 1e-15;
  CHECK(coupling_q(r, Frequency::hz(19.5e9)) == Approx(4 * q).epsilon(1e-12));
  CHECK(coupling_q(r, Frequency::hz(20.5e9)) * 20.5 == Approx(coupling_q(r, Frequency::hz(19.5e9)) * 19.5));
  r.coupling_capacitance.reset();
  CHECK_THROWS_AS(external_damping(r, Frequency::hz(19.5e9)), ValidationError);
}

TEST_CASE("external damping follows the high-pass law") {
  oracle::Gen gen(22);
  auto r = fundamental_only();
  r.modes[0].kappa_ext_override.reset();
  r.coupling_capacitance = 3e-15;
  for (int i = 0; i < 100; ++i) {
    const double a = gen.log_uniform(1e8, 3e10), b = gen.log_uniform(1e8, 3e10);
    const double ka = external_damping_at(r, Frequency::hz(a));
    const double kb = external_damping_at(r, Frequency::hz(b));
    CHECK(ka / kb == Approx((a / b) * (a / b)).epsilon(1e-12));
  }
}

TEST_CASE("resonator validation") {
  auto r = three_modes();
  CHECK_NOTHROW(r.validate());
  std::swap(r.modes[1], r.modes[2]);
  CHECK_THROWS_AS(r.validate(), ValidationError);
  r = three_modes();
  r.z0 = 0.0;
  CHECK_THROWS_AS(r.validate(), ValidationError);
  r = three_modes();
  r.modes[1].kappa_internal = -1.0;
  CHECK_THROWS_AS(r.validate(), ValidationError);
  CHECK_THROWS_AS(three_modes().mode(Frequency::hz(1e9)), ValidationError);
}

TEST_CASE("harmonic warnings flag non-odd multiples only") {
  auto r = three_modes();
  CHECK(r.harmonic_warnings().empty());
  r.modes[2].freq = Frequency::hz(21e9);
  CHECK(r.harmonic_warnings().size() == 1);
}
