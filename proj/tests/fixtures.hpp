#pragma once

#include "cavmag/dynamics.hpp"

namespace fixtures {

using namespace cavmag;

inline DeviceConfig top_device(DeviceOverrides o = {}) {
  ResonatorSpec r;
  r.z0 = 50.0;
  r.omega_r1 = Frequency::hz(500e6);
  r.modes = {ResonatorMode{r.omega_r1, from_hz(500.0), from_hz(500.0)}};
  return make_device(Geometry::TopCPW, r, yig_preset(), 5e-6, from_hz(2e6), o);
}

inline DeviceConfig tilted_device(DeviceOverrides o = {}) {
  ResonatorSpec r;
  r.z0 = 50.0;
  r.omega_r1 = Frequency::hz(500e6);
  r.modes = {ResonatorMode{Frequency::hz(500e6), from_hz(500.0), {}},
             ResonatorMode{Frequency::hz(19.5e9), from_hz(20e3), {}},
             ResonatorMode{Frequency::hz(20.5e9), from_hz(20e3), {}}};
  r.calibration = KappaCalibration{Frequency::hz(19.5e9), from_hz(2e6)};
  return make_device(Geometry::FortyFive, r, vtcne_preset(), 5e-6, from_hz(2e6), o);
}

inline constexpr double kLinecutField = 0.709305;

inline DriveSpec magnon_drive(double p_dbm, double f_d) {
  return {dbm_to_watts(p_dbm), Frequency::hz(f_d), DrivePort::MagnonLine};
}

inline DriveSpec feed_drive(double p_dbm, double f_d) {
  return {dbm_to_watts(p_dbm), Frequency::hz(f_d), DrivePort::Feedline};
}

} // namespace fixtures
