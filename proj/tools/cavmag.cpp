#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cavmag/analysis.hpp"
#include "cavmag/config.hpp"
#include "cavmag/output.hpp"
#include "cavmag/sweep.hpp"
#include "cavmag/timedomain.hpp"

namespace fs = std::filesystem;
using namespace cavmag;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "Config file or preset name")->required();
  sub->add_option("--out", c.out, "Output directory (CSV, JSON mirror and manifest.json)");
  sub->add_option("--format", c.format, "Format printed to stdout")
      ->check(CLI::IsMember({"csv", "json"}));
}

RunConfig load(const Common& c) {
  auto cfg = load_config(c.config);
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
  return cfg;
}

void emit(const Common& c, const RunConfig& cfg, const std::string& command, const Table& t,
          const std::string& stem, std::vector<fs::path> extra = {}, std::size_t points = 1,
          std::size_t nan_count = 0, std::size_t threads = 1,
          std::vector<std::string> warnings = {}) {
  // Large tables only go to files when an output directory is given.
  if (c.out.empty() || t.rows.size() <= 10) {
    if (c.format == "json")
      std::cout << to_json(t).dump(2) << "\n";
    else
      std::cout << to_csv(t);
  }
  if (c.out.empty()) return;
  RunManifest m;
  m.command = command;
  m.config_source = cfg.source;
  m.config_snapshot = cfg.text;
  m.outputs = write_table(t, c.out, stem);
  m.outputs.insert(m.outputs.end(), extra.begin(), extra.end());
  m.points = points;
  m.nan_count = nan_count;
  m.threads = threads;
  m.warnings = cfg.warnings;
  m.warnings.insert(m.warnings.end(), warnings.begin(), warnings.end());
  const auto path = write_manifest(m, c.out);
  std::cerr << "wrote " << m.outputs.size() << " files and " << path.string() << "\n";
}

Table params_table(const RunConfig& cfg) {
  const auto& d = cfg.device;
  const auto& r = d.resonator;
  const double wm = cfg.omega_m().rad_s();
  Table t;
  std::vector<Cell> row;
  auto col = [&](const std::string& name, Cell v) {
    t.columns.push_back(name);
    row.push_back(std::move(v));
  };
  col("geometry", to_string(d.geometry));
  col("magnet", d.magnet.name);
  col("i_zpf_a", i_zpf(r, d.constants));
  col("c_total_f", total_capacitance(r));
  col("l_total_h", total_inductance(r));
  col("flux_zpf_wb", d.couplings.flux_zpf);
  col("n_spins", d.spins());
  col("b_field_t", cfg.b_field);
  col("magnon_freq_hz", to_hz(wm));
  col("g_xz1_hz", to_hz(d.couplings.g_xz1));
  const char* labels[] = {"r1", "r2", "r3"};
  for (std::size_t i = 0; i < r.modes.size(); ++i) {
    const auto& m = r.modes[i];
    const std::string tag = i < 3 ? labels[i] : "mode" + std::to_string(i + 1);
    col("freq_" + tag + "_hz", m.freq.in_hz());
    col("kappa_" + tag + "_int_hz", to_hz(m.kappa_internal));
    col("kappa_" + tag + "_ext_hz", to_hz(external_damping(r, m.freq)));
    col("kappa_" + tag + "_hz", to_hz(total_damping(r, m.freq)));
    col("q_" + tag + "_c", coupling_q(r, m.freq));
    if (d.geometry == Geometry::FortyFive && (i == 1 || i == 2))
      col("g_xx" + std::to_string(i + 1) + "_hz", to_hz(d.g_xx_at(m.freq, cfg.b_field)));
  }
  col("kappa_m_int_hz", to_hz(d.kappa_m_internal));
  col("kappa_m_ext_hz", to_hz(d.kappa_m_ext(wm)));
  col("kappa_m_hz", to_hz(d.kappa_m(wm)));
  if (d.geometry == Geometry::TopCPW) {
    const double k_ext = d.kappa_m_ext(wm);
    col("q_m_c", k_ext > 0 ? wm / k_ext : std::numeric_limits<double>::infinity());
  }
  col("kerr_k_hz", to_hz(d.magnet.kerr_k));
  t.rows.push_back(std::move(row));
  return t;
}

Table backaction_point_table(const RunConfig& cfg) {
  const double b = cfg.b_field;
  const auto r = evaluate_point(cfg, b, cfg.drive.omega_d.rad_s());
  Table t;
  t.columns = backaction_columns(cfg.device.geometry);
  t.rows.push_back(backaction_row(cfg.device.geometry, b, to_hz(cfg.detuning()),
                                  cfg.drive.omega_d.in_hz(), r));
  return t;
}

Table spectrum_table(const RunConfig& cfg, bool undriven) {
  const auto& d = cfg.device;
  const double w1 = d.omega_r1().rad_s();
  BackactionResult ba;
  if (!undriven) ba = evaluate_point(cfg, cfg.b_field, cfg.drive.omega_d.rad_s());
  const double k_ext = external_damping(d.resonator, d.omega_r1());
  const auto grid = probe_grid(w1, from_hz(cfg.spectrum.half_span_hz), cfg.spectrum.count);
  const auto pts = s21_spectrum(w1 + ba.delta_omega_r1, d.kappa_r1() + ba.delta_kappa_r1, k_ext, grid);
  Table t;
  t.columns = {"probe_freq_hz", "re_s21", "im_s21", "abs_s21", "abs_s21_db"};
  for (const auto& p : pts) {
    const double mag = std::abs(p.s21);
    t.rows.push_back({to_hz(p.omega_p), p.s21.real(), p.s21.imag(), mag, 20.0 * std::log10(mag)});
  }
  return t;
}

struct SqueezeFlags {
  std::optional<double> cooperativity;
  std::optional<double> n_th;
  std::optional<double> kappa_ratio;
};

/// Red-sideband magnon number for the configured device at the squeeze tone power.
double red_sideband_population(const RunConfig& cfg) {
  const auto& d = cfg.device;
  DriveSpec drive = cfg.drive;
  if (cfg.squeeze.power_dbm) drive.power = dbm_to_watts(*cfg.squeeze.power_dbm);
  drive.omega_d = Frequency::rad_s(cfg.omega_m().rad_s() - d.omega_r1().rad_s());
  if (d.geometry == Geometry::TopCPW) return magnon_number_direct(d, drive, cfg.omega_m());
  return magnon_number_45(d, drive, cfg.b_field, cfg.options.cross_drive);
}

Table squeeze_table(const RunConfig& cfg, const SqueezeFlags& f) {
  const auto& d = cfg.device;
  const double wm = cfg.omega_m().rad_s();
  SqueezingInputs in;
  in.n_minus = cfg.squeeze.n_minus ? *cfg.squeeze.n_minus : red_sideband_population(cfg);
  in.g_xz1 = d.couplings.g_xz1;
  in.kappa_r1 = d.kappa_r1();
  in.kappa_m = d.kappa_m(wm);
  if (f.n_th) in.n_th = *f.n_th;
  else if (cfg.squeeze.n_th) in.n_th = *cfg.squeeze.n_th;
  else in.n_th = thermal_occupation(d.omega_r1().rad_s(), cfg.squeeze.temperature_k, d.constants);
  in.validate();

  double coop = cooperativity(in);
  if (f.cooperativity) coop = *f.cooperativity;
  else if (cfg.squeeze.cooperativity) coop = *cfg.squeeze.cooperativity;
  const double ratio = f.kappa_ratio ? *f.kappa_ratio : in.kappa_r1 / in.kappa_m;

  const auto v = squeezed_variance(coop, in.n_th, ratio);
  const auto valid = squeezing_validity(d, in, coop);
  if (v.low_cooperativity)
    std::cerr << "warning: C = " << coop << " < 10, the large-C approximation is doubtful\n";

  Table t;
  t.columns = {"n_minus", "n_th", "kappa_ratio", "cooperativity", "cooperativity_from_inputs",
               "variance", "squeezing_db", "low_cooperativity", "population_ratio",
               "population_ok", "kerr_ratio", "kerr_ok", "sideband_ratio", "sideband_ok"};
  t.rows.push_back({in.n_minus, in.n_th, ratio, coop, cooperativity(in), v.variance,
                    v.squeezing_db, v.low_cooperativity, valid.population.value,
                    valid.population.pass, valid.kerr.value, valid.kerr.pass,
                    valid.sideband_resolved.value, valid.sideband_resolved.pass});
  return t;
}

struct OracleFlags {
  double tolerance = 0.02;
  bool trajectory = false;
  std::size_t stride = 1;
};

int run_oracle(const Common& c, const RunConfig& cfg, const OracleFlags& f) {
  const auto& d = cfg.device;
  if (d.geometry != Geometry::TopCPW)
    throw ValidationError("oracle: only the top_cpw equations of motion are integrated");
  const double w1 = d.omega_r1().rad_s();
  const double delta = cfg.oracle.detuning_hz ? from_hz(*cfg.oracle.detuning_hz) : -w1;
  const double n_m = cfg.oracle.n_m ? *cfg.oracle.n_m
                                    : desk_population(d, -w1, cfg.oracle.damping_ratio);
  OracleSettings s;
  s.t_end = cfg.oracle.t_end_s;
  s.steps_per_period = cfg.oracle.steps_per_period;
  const auto cmp = verify_backaction(d, cfg.omega_m(), n_m, delta, s);

  Table t;
  t.columns = {"detuning_hz", "n_m", "coupling_ratio", "dt_s", "delta_omega_analytic_hz",
               "delta_omega_oracle_hz", "rel_err_omega", "delta_kappa_analytic_hz",
               "delta_kappa_oracle_hz", "rel_err_kappa", "omega_eff_hz", "kappa_eff_hz",
               "omega_bare_hz", "kappa_bare_hz", "pass"};
  const bool pass = cmp.rel_err_omega < f.tolerance && cmp.rel_err_kappa < f.tolerance;
  t.rows.push_back({to_hz(delta), n_m, cmp.coupling_ratio, cmp.dt,
                    to_hz(cmp.delta_omega_analytic), to_hz(cmp.delta_omega_oracle),
                    cmp.rel_err_omega, to_hz(cmp.delta_kappa_analytic),
                    to_hz(cmp.delta_kappa_oracle), cmp.rel_err_kappa, to_hz(cmp.omega_eff),
                    to_hz(cmp.kappa_eff), to_hz(cmp.omega_bare), to_hz(cmp.kappa_bare), pass});

  std::vector<fs::path> extra;
  if (f.trajectory) {
    if (c.out.empty()) throw ValidationError("oracle: --trajectory needs --out");
    const auto traj = integrate_linearized(d, cfg.omega_m(), std::sqrt(n_m), delta,
                                           d.couplings.flux_zpf, s.t_end, cmp.dt);
    Table tr;
    tr.columns = {"t_s", "re_delta_beta", "im_delta_beta", "phi_wb", "phi_dot_wb_per_s"};
    const std::size_t stride = std::max<std::size_t>(1, f.stride);
    for (std::size_t i = 0; i < traj.times.size(); i += stride) {
      const auto& st = traj.states[i];
      tr.rows.push_back({traj.times[i], st.delta_beta_m.real(), st.delta_beta_m.imag(), st.phi,
                         st.phi_dot});
    }
    extra = write_table(tr, c.out, "trajectory");
  }
  emit(c, cfg, "oracle", t, "oracle", extra);
  if (!pass) {
    std::cerr << "oracle disagreement exceeds tolerance " << f.tolerance << "\n";
    return 3;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity magnonics backaction and squeezing calculator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", software_version());

  Common common;
  auto* params = app.add_subcommand("params", "Derived device quantities");
  auto* backaction = app.add_subcommand("backaction", "Backaction at the configured operating point");
  auto* sweep = app.add_subcommand("sweep", "Backaction over the configured grid");
  auto* spectrum = app.add_subcommand("spectrum", "Feedline transmission around the fundamental");
  auto* squeeze = app.add_subcommand("squeeze", "Two-tone squeezing estimate with validity report");
  auto* oracle = app.add_subcommand("oracle", "Time-domain check of the analytic backaction");
  for (auto* s : {params, backaction, sweep, spectrum, squeeze, oracle}) add_common(s, common);

  std::size_t threads = 0;
  sweep->add_option("--threads", threads, "Worker threads (0: hardware concurrency)");

  bool undriven = false;
  spectrum->add_flag("--undriven", undriven, "Bare resonator, no magnon drive");

  SqueezeFlags sq;
  squeeze->add_option("--cooperativity", sq.cooperativity, "Use this C instead of n_- g^2/(kappa_r1 kappa_m)");
  squeeze->add_option("--n-th", sq.n_th, "Thermal occupation of the fundamental");
  squeeze->add_option("--kappa-ratio", sq.kappa_ratio, "kappa_r1/kappa_m override");

  OracleFlags of;
  oracle->add_option("--tolerance", of.tolerance, "Relative agreement required for exit 0");
  oracle->add_flag("--trajectory", of.trajectory, "Also export the coupled trajectory");
  oracle->add_option("--stride", of.stride, "Keep every n-th trajectory sample");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const auto cfg = load(common);
    if (params->parsed()) {
      emit(common, cfg, "params", params_table(cfg), "params");
    } else if (backaction->parsed()) {
      emit(common, cfg, "backaction", backaction_point_table(cfg), "backaction");
    } else if (sweep->parsed()) {
      const std::size_t n = threads == 0 ? default_threads() : threads;
      const auto res = run_sweep(cfg, n);
      if (res.nan_count > 0)
        std::cerr << "warning: " << res.nan_count << " of " << res.points
                  << " grid points failed and were written as NaN\n";
      emit(common, cfg, "sweep", res.table, "sweep", {}, res.points, res.nan_count, n, res.errors);
    } else if (spectrum->parsed()) {
      emit(common, cfg, "spectrum", spectrum_table(cfg, undriven), "spectrum");
    } else if (squeeze->parsed()) {
      emit(common, cfg, "squeeze", squeeze_table(cfg, sq), "squeeze");
    } else if (oracle->parsed()) {
      return run_oracle(common, cfg, of);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
