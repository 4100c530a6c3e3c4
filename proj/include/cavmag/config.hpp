#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cavmag/dynamics.hpp"

namespace cavmag {

/// Evenly spaced axis, both ends included.
struct AxisSpec {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;

  void validate(const std::string& name) const;
  std::vector<double> values() const;
  double step() const { return (max - min) / static_cast<double>(count - 1); }
};

/// Grid axes. Frequencies in Hz, field in T. At most one of drive_freq_hz/detuning_hz.
struct SweepGrid {
  std::optional<AxisSpec> b_field_t;
  std::optional<AxisSpec> drive_freq_hz;
  std::optional<AxisSpec> detuning_hz;

  void validate(Geometry geometry) const;
};

struct SqueezeSection {
  double temperature_k = 0.01;
  std::optional<double> power_dbm;       // red-sideband tone; defaults to drive power
  std::optional<double> n_minus;
  std::optional<double> cooperativity;
  std::optional<double> n_th;
};

struct SpectrumSection {
  double half_span_hz = 5.0e3;
  std::size_t count = 2001;
};

struct OracleSection {
  std::optional<double> detuning_hz;     // absent means -f_r1 (red sideband)
  std::optional<double> n_m;
  double damping_ratio = 0.5;            // sets n_m at the red sideband when n_m is absent
  double t_end_s = 2.0e-3;
  int steps_per_period = 64;
};

/// Fully validated run configuration.
struct RunConfig {
  std::string source;                    // path or preset name
  std::string text;                      // verbatim snapshot
  DeviceConfig device;
  DriveSpec drive;
  double b_field = 0.0;                  // T
  std::optional<SweepGrid> sweep;
  SqueezeSection squeeze;
  SpectrumSection spectrum;
  OracleSection oracle;
  DynamicsOptions options;
  std::vector<std::string> warnings;

  Frequency omega_m() const { return Frequency::rad_s(larmor_frequency(device.magnet, b_field)); }
  /// User-facing detuning omega_d - omega_m for both geometries.
  double detuning() const { return drive.omega_d.rad_s() - omega_m().rad_s(); }
};

/// Directory holding the shipped presets.
std::filesystem::path preset_directory();

/// A bare preset name ("table1_top_cpw") resolves into the preset directory.
std::filesystem::path resolve_config_path(const std::string& name_or_path);

RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::string& name_or_path);

} // namespace cavmag
