#include "cavmag/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <yaml-cpp/yaml.h>

#ifndef CAVMAG_PRESET_DIR
#define CAVMAG_PRESET_DIR "presets"
#endif

namespace cavmag {

namespace {

std::string line_of(const YAML::Node& n) {
  const auto m = n.Mark();
  if (m.line < 0) return "";
  return " (line " + std::to_string(m.line + 1) + ")";
}

[[noreturn]] void fail(const std::string& key, const std::string& what, const YAML::Node& n) {
  throw ValidationError(key + ": " + what + line_of(n));
}

void check_keys(const YAML::Node& node, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
  if (!node.IsMap()) fail(path, "expected a mapping", node);
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      fail(path + "." + key, "unknown key", kv.first);
  }
}

template <class T>
T as(const YAML::Node& n, const std::string& key, const char* type) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(key, std::string("expected ") + type, n);
  }
}

double number(const YAML::Node& parent, const std::string& path, const std::string& key) {
  const auto n = parent[key];
  if (!n) fail(path + "." + key, "required key missing", parent);
  const double v = as<double>(n, path + "." + key, "a number");
  if (!std::isfinite(v)) fail(path + "." + key, "must be finite", n);
  return v;
}

std::optional<double> opt_number(const YAML::Node& parent, const std::string& path,
                                 const std::string& key) {
  if (!parent || !parent[key]) return std::nullopt;
  return number(parent, path, key);
}

double positive(const YAML::Node& parent, const std::string& path, const std::string& key) {
  const double v = number(parent, path, key);
  if (!(v > 0)) fail(path + "." + key, "must be > 0", parent[key]);
  return v;
}

double non_negative(const YAML::Node& parent, const std::string& path, const std::string& key) {
  const double v = number(parent, path, key);
  if (!(v >= 0)) fail(path + "." + key, "must be >= 0", parent[key]);
  return v;
}

std::string text(const YAML::Node& parent, const std::string& path, const std::string& key) {
  const auto n = parent[key];
  if (!n) fail(path + "." + key, "required key missing", parent);
  return as<std::string>(n, path + "." + key, "a string");
}

ResonatorSpec parse_resonator(const YAML::Node& n, Geometry geometry,
                              std::map<double, double>& g_xx_overrides) {
  const std::string p = "resonator";
  if (!n) throw ValidationError("resonator: section missing");
  check_keys(n, p, {"z0_ohm", "fundamental_hz", "modes", "coupling_capacitance_f",
                    "kappa_ext_calibration"});
  ResonatorSpec r;
  r.z0 = positive(n, p, "z0_ohm");
  r.omega_r1 = Frequency::hz(positive(n, p, "fundamental_hz"));
  const auto modes = n["modes"];
  if (!modes || !modes.IsSequence() || modes.size() == 0)
    fail(p + ".modes", "expected a non-empty list", n);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto m = modes[i];
    const std::string mp = p + ".modes[" + std::to_string(i) + "]";
    check_keys(m, mp, {"freq_hz", "kappa_internal_hz", "kappa_ext_hz", "g_xx_hz"});
    ResonatorMode mode;
    mode.freq = Frequency::hz(positive(m, mp, "freq_hz"));
    mode.kappa_internal = from_hz(non_negative(m, mp, "kappa_internal_hz"));
    if (m["kappa_ext_hz"]) mode.kappa_ext_override = from_hz(non_negative(m, mp, "kappa_ext_hz"));
    if (m["g_xx_hz"]) {
      if (geometry != Geometry::FortyFive)
        fail(mp + ".g_xx_hz", "XX coupling only exists in the forty_five geometry", m["g_xx_hz"]);
      g_xx_overrides[mode.freq.rad_s()] = from_hz(non_negative(m, mp, "g_xx_hz"));
    }
    r.modes.push_back(mode);
  }
  if (n["coupling_capacitance_f"]) r.coupling_capacitance = non_negative(n, p, "coupling_capacitance_f");
  if (const auto c = n["kappa_ext_calibration"]) {
    const std::string cp = p + ".kappa_ext_calibration";
    check_keys(c, cp, {"freq_hz", "kappa_hz"});
    r.calibration = KappaCalibration{Frequency::hz(positive(c, cp, "freq_hz")),
                                     from_hz(non_negative(c, cp, "kappa_hz"))};
  }
  try {
    r.validate();
  } catch (const ValidationError& e) {
    fail(p, e.what(), n);
  }
  return r;
}

MagnetSpec parse_magnet(const YAML::Node& n) {
  const std::string p = "magnet";
  if (!n) throw ValidationError("magnet: section missing");
  check_keys(n, p, {"preset", "name", "m_s_emu_cm3", "dims_um", "gamma_hz_per_t", "m_eff_emu_cm3",
                    "kerr_hz"});
  MagnetSpec m;
  if (n["preset"]) {
    try {
      m = magnet_preset(text(n, p, "preset"));
    } catch (const ValidationError& e) {
      fail(p + ".preset", e.what(), n["preset"]);
    }
  }
  if (n["name"]) m.name = text(n, p, "name");
  if (n["m_s_emu_cm3"]) m.m_s = positive(n, p, "m_s_emu_cm3") * kEmuPerCm3;
  if (const auto d = n["dims_um"]) {
    if (!d.IsSequence() || d.size() != 3) fail(p + ".dims_um", "expected [length, width, thickness]", d);
    for (std::size_t i = 0; i < 3; ++i) {
      const double v = as<double>(d[i], p + ".dims_um", "a number");
      if (!(v > 0)) fail(p + ".dims_um", "dimensions must be > 0", d);
      m.dims[i] = v * 1e-6;
    }
  }
  if (n["gamma_hz_per_t"]) m.gamma = from_hz(positive(n, p, "gamma_hz_per_t"));
  if (n["m_eff_emu_cm3"]) m.m_eff = number(n, p, "m_eff_emu_cm3") * kEmuPerCm3;
  if (n["kerr_hz"]) m.kerr_k = from_hz(non_negative(n, p, "kerr_hz"));
  if (m.name.empty()) m.name = "custom";
  try {
    m.validate();
  } catch (const ValidationError& e) {
    fail(p, e.what(), n);
  }
  return m;
}

AxisSpec parse_axis(const YAML::Node& n, const std::string& p) {
  check_keys(n, p, {"min", "max", "count"});
  AxisSpec a;
  a.min = number(n, p, "min");
  a.max = number(n, p, "max");
  const auto c = n["count"];
  if (!c) fail(p + ".count", "required key missing", n);
  const auto count = as<long long>(c, p + ".count", "an integer");
  if (count < 2) fail(p + ".count", "must be >= 2", c);
  a.count = static_cast<std::size_t>(count);
  if (!(a.min < a.max)) fail(p, "min must be < max", n);
  return a;
}

} // namespace

void AxisSpec::validate(const std::string& name) const {
  if (count < 2) throw ValidationError(name + ": count must be >= 2");
  if (!(min < max)) throw ValidationError(name + ": min must be < max");
}

std::vector<double> AxisSpec::values() const {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i)
    v[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
  return v;
}

void SweepGrid::validate(Geometry geometry) const {
  if (b_field_t) b_field_t->validate("sweep.b_field_t");
  if (drive_freq_hz) drive_freq_hz->validate("sweep.drive_freq_hz");
  if (detuning_hz) detuning_hz->validate("sweep.detuning_hz");
  if (drive_freq_hz && detuning_hz)
    throw ValidationError("sweep: give drive_freq_hz or detuning_hz, not both");
  if (!drive_freq_hz && !detuning_hz)
    throw ValidationError("sweep: a drive_freq_hz or detuning_hz axis is required");
  if (geometry == Geometry::TopCPW && b_field_t)
    throw ValidationError("sweep.b_field_t: top_cpw sweeps run at the configured field");
}

std::filesystem::path preset_directory() {
  if (const char* env = std::getenv("CAVMAG_PRESET_DIR")) return env;
  return CAVMAG_PRESET_DIR;
}

std::filesystem::path resolve_config_path(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  const fs::path p(name_or_path);
  if (fs::exists(p)) return p;
  if (!p.has_parent_path() && !p.has_extension()) {
    const fs::path preset = preset_directory() / (name_or_path + ".yaml");
    if (fs::exists(preset)) return preset;
  }
  throw ValidationError("config '" + name_or_path + "' not found (neither a file nor a preset)");
}

RunConfig parse_config(const std::string& source_text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(source_text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << "parse error in " << source << " at line " << e.mark.line + 1 << ", column "
       << e.mark.column + 1 << ": " << e.msg;
    throw ValidationError(os.str());
  }
  if (!root || root.IsNull()) throw ValidationError("parse error in " + source + ": empty configuration");
  if (!root.IsMap()) throw ValidationError("parse error in " + source + ": top level must be a mapping");
  check_keys(root, "config", {"device", "resonator", "magnet", "drive", "sweep", "options",
                              "squeeze", "spectrum", "oracle"});

  RunConfig cfg;
  cfg.source = source;
  cfg.text = source_text;

  // [device]
  const auto dn = root["device"];
  if (!dn) throw ValidationError("device: section missing");
  check_keys(dn, "device", {"geometry", "wire_width_um", "kappa_m_internal_hz", "kappa_m_ext_hz",
                            "g_xz1_hz", "anisotropy"});
  Geometry geometry;
  try {
    geometry = geometry_from_string(text(dn, "device", "geometry"));
  } catch (const ValidationError& e) {
    fail("device.geometry", e.what(), dn["geometry"]);
  }
  DeviceOverrides overrides;
  const auto resonator = parse_resonator(root["resonator"], geometry, overrides.g_xx);
  const auto magnet = parse_magnet(root["magnet"]);
  const double wire = positive(dn, "device", "wire_width_um") * 1e-6;
  const double km_i = from_hz(non_negative(dn, "device", "kappa_m_internal_hz"));
  if (auto v = opt_number(dn, "device", "kappa_m_ext_hz")) overrides.kappa_m_ext = from_hz(*v);
  if (auto v = opt_number(dn, "device", "g_xz1_hz")) overrides.g_xz1 = from_hz(*v);
  const bool anisotropy = dn["anisotropy"] ? as<bool>(dn["anisotropy"], "device.anisotropy", "a boolean") : false;
  try {
    cfg.device = make_device(geometry, resonator, magnet, wire, km_i, overrides, anisotropy);
  } catch (const ValidationError& e) {
    fail("device", e.what(), dn);
  }
  for (auto& w : cfg.device.resonator.harmonic_warnings(1e-6)) cfg.warnings.push_back(std::move(w));

  // [drive]
  const auto drn = root["drive"];
  if (!drn) throw ValidationError("drive: section missing");
  check_keys(drn, "drive", {"port", "power_dbm", "b_field_t", "magnon_freq_hz", "detuning_hz",
                            "drive_freq_hz"});
  const auto port = text(drn, "drive", "port");
  if (port == "magnon_line") cfg.drive.port = DrivePort::MagnonLine;
  else if (port == "feedline") cfg.drive.port = DrivePort::Feedline;
  else fail("drive.port", "expected magnon_line or feedline", drn["port"]);
  if (geometry == Geometry::TopCPW && cfg.drive.port != DrivePort::MagnonLine)
    fail("drive.port", "top_cpw is driven through the magnon driving line", drn["port"]);
  if (geometry == Geometry::FortyFive && cfg.drive.port != DrivePort::Feedline)
    fail("drive.port", "forty_five is driven through the resonator feedline", drn["port"]);
  cfg.drive.power = dbm_to_watts(number(drn, "drive", "power_dbm"));

  const bool has_b = static_cast<bool>(drn["b_field_t"]);
  const bool has_fm = static_cast<bool>(drn["magnon_freq_hz"]);
  if (has_b == has_fm) fail("drive", "give exactly one of b_field_t or magnon_freq_hz", drn);
  cfg.b_field = has_b ? non_negative(drn, "drive", "b_field_t")
                      : field_for_frequency(cfg.device.magnet, from_hz(positive(drn, "drive", "magnon_freq_hz")));
  const bool has_det = static_cast<bool>(drn["detuning_hz"]);
  const bool has_fd = static_cast<bool>(drn["drive_freq_hz"]);
  if (has_det == has_fd) fail("drive", "give exactly one of detuning_hz or drive_freq_hz", drn);
  const double wd = has_fd ? from_hz(positive(drn, "drive", "drive_freq_hz"))
                           : cfg.omega_m().rad_s() + from_hz(number(drn, "drive", "detuning_hz"));
  if (!(wd > 0)) fail("drive", "resulting drive frequency must be > 0", drn);
  cfg.drive.omega_d = Frequency::rad_s(wd);

  // [sweep]
  if (const auto sn = root["sweep"]) {
    check_keys(sn, "sweep", {"b_field_t", "drive_freq_hz", "detuning_hz"});
    SweepGrid g;
    if (sn["b_field_t"]) g.b_field_t = parse_axis(sn["b_field_t"], "sweep.b_field_t");
    if (sn["drive_freq_hz"]) g.drive_freq_hz = parse_axis(sn["drive_freq_hz"], "sweep.drive_freq_hz");
    if (sn["detuning_hz"]) g.detuning_hz = parse_axis(sn["detuning_hz"], "sweep.detuning_hz");
    try {
      g.validate(geometry);
    } catch (const ValidationError& e) {
      fail("sweep", e.what(), sn);
    }
    cfg.sweep = g;
  }

  // [options]
  if (const auto on = root["options"]) {
    check_keys(on, "options", {"probe", "cross_drive", "thresholds"});
    if (on["probe"]) {
      const auto v = text(on, "options", "probe");
      if (v == "fixed") cfg.options.probe = ProbeMode::Fixed;
      else if (v == "self_consistent") cfg.options.probe = ProbeMode::SelfConsistent;
      else fail("options.probe", "expected fixed or self_consistent", on["probe"]);
    }
    if (on["cross_drive"]) {
      const auto v = text(on, "options", "cross_drive");
      if (v == "included") cfg.options.cross_drive = CrossDrive::Included;
      else if (v == "neglected") cfg.options.cross_drive = CrossDrive::Neglected;
      else fail("options.cross_drive", "expected included or neglected", on["cross_drive"]);
    }
    if (const auto tn = on["thresholds"]) {
      const std::string tp = "options.thresholds";
      check_keys(tn, tp, {"weak_coupling", "kerr", "population"});
      if (tn["weak_coupling"]) cfg.options.thresholds.weak_coupling = positive(tn, tp, "weak_coupling");
      if (tn["kerr"]) cfg.options.thresholds.kerr = positive(tn, tp, "kerr");
      if (tn["population"]) cfg.options.thresholds.population = positive(tn, tp, "population");
    }
  }

  // [squeeze]
  if (const auto qn = root["squeeze"]) {
    const std::string qp = "squeeze";
    check_keys(qn, qp, {"temperature_k", "power_dbm", "n_minus", "cooperativity", "n_th"});
    if (qn["temperature_k"]) cfg.squeeze.temperature_k = non_negative(qn, qp, "temperature_k");
    cfg.squeeze.power_dbm = opt_number(qn, qp, "power_dbm");
    if (qn["n_minus"]) cfg.squeeze.n_minus = non_negative(qn, qp, "n_minus");
    if (qn["cooperativity"]) cfg.squeeze.cooperativity = positive(qn, qp, "cooperativity");
    if (qn["n_th"]) cfg.squeeze.n_th = non_negative(qn, qp, "n_th");
  }

  // [spectrum]
  if (const auto sn = root["spectrum"]) {
    check_keys(sn, "spectrum", {"half_span_hz", "count"});
    if (sn["half_span_hz"]) cfg.spectrum.half_span_hz = positive(sn, "spectrum", "half_span_hz");
    if (sn["count"]) {
      const auto c = as<long long>(sn["count"], "spectrum.count", "an integer");
      if (c < 2) fail("spectrum.count", "must be >= 2", sn["count"]);
      cfg.spectrum.count = static_cast<std::size_t>(c);
    }
  }

  // [oracle]
  if (const auto on = root["oracle"]) {
    const std::string op = "oracle";
    check_keys(on, op, {"detuning_hz", "n_m", "damping_ratio", "t_end_s", "steps_per_period"});
    if (on["detuning_hz"]) cfg.oracle.detuning_hz = number(on, op, "detuning_hz");
    if (on["n_m"]) cfg.oracle.n_m = non_negative(on, op, "n_m");
    if (on["damping_ratio"]) cfg.oracle.damping_ratio = positive(on, op, "damping_ratio");
    if (on["t_end_s"]) cfg.oracle.t_end_s = positive(on, op, "t_end_s");
    if (on["steps_per_period"]) {
      const auto s = as<int>(on["steps_per_period"], "oracle.steps_per_period", "an integer");
      if (s < 50) fail("oracle.steps_per_period", "must be >= 50", on["steps_per_period"]);
      cfg.oracle.steps_per_period = s;
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& name_or_path) {
  const auto path = resolve_config_path(name_or_path);
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), name_or_path);
}

} // namespace cavmag
