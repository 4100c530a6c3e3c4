#include "cavmag/sweep.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace cavmag {

BackactionResult evaluate_point(const RunConfig& cfg, double b_field, double omega_d) {
  DriveSpec drive = cfg.drive;
  drive.omega_d = Frequency::rad_s(omega_d);
  if (cfg.device.geometry == Geometry::TopCPW)
    return backaction_top_driven(cfg.device, drive, cfg.omega_m(), cfg.options);
  return backaction_45(cfg.device, drive, b_field, {}, cfg.options);
}

std::size_t default_threads() {
  const auto n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

std::vector<std::string> backaction_columns(Geometry g) {
  std::vector<std::string> c;
  if (g == Geometry::FortyFive) c.push_back("b_field_t");
  for (const char* name : {"detuning_hz", "drive_freq_hz", "n_m", "delta_omega_r1_hz",
                           "delta_kappa_r1_hz", "weak_coupling_ok", "kerr_ok", "population_ok"})
    c.emplace_back(name);
  return c;
}

std::vector<Cell> backaction_row(Geometry g, double b_field, double detuning_hz,
                                 double drive_freq_hz, const BackactionResult& r) {
  std::vector<Cell> row;
  if (g == Geometry::FortyFive) row.emplace_back(b_field);
  row.emplace_back(detuning_hz);
  row.emplace_back(drive_freq_hz);
  row.emplace_back(r.n_m);
  row.emplace_back(to_hz(r.delta_omega_r1));
  row.emplace_back(to_hz(r.delta_kappa_r1));
  row.emplace_back(r.weak_coupling_ok);
  row.emplace_back(r.kerr_ok);
  row.emplace_back(r.population_ok);
  return row;
}

SweepResult run_sweep(const RunConfig& cfg, std::size_t threads) {
  if (!cfg.sweep) throw ValidationError("sweep: config has no [sweep] section");
  const auto& grid = *cfg.sweep;
  grid.validate(cfg.device.geometry);
  const Geometry geom = cfg.device.geometry;

  const std::vector<double> fields =
      grid.b_field_t ? grid.b_field_t->values() : std::vector<double>{cfg.b_field};
  const bool by_detuning = grid.detuning_hz.has_value();
  const std::vector<double> inner =
      by_detuning ? grid.detuning_hz->values() : grid.drive_freq_hz->values();

  const std::size_t n = fields.size() * inner.size();
  SweepResult out;
  out.points = n;
  out.table.columns = backaction_columns(geom);
  out.table.rows.resize(n);
  std::vector<std::string> errors(n);

  auto work = [&](std::size_t idx) {
    const double b = fields[idx / inner.size()];
    const double x = inner[idx % inner.size()];
    const MagnetSpec& mag = cfg.device.magnet;
    const double fm = to_hz(larmor_frequency(mag, geom == Geometry::TopCPW ? cfg.b_field : b));
    const double fd = by_detuning ? fm + x : x;
    const double det = by_detuning ? x : fd - fm;
    try {
      const auto r = evaluate_point(cfg, b, from_hz(fd));
      if (!std::isfinite(r.n_m) || !std::isfinite(r.delta_omega_r1) ||
          !std::isfinite(r.delta_kappa_r1))
        throw NumericalError("non-finite result");
      out.table.rows[idx] = backaction_row(geom, b, det, fd, r);
    } catch (const std::exception& e) {
      BackactionResult bad;
      bad.n_m = bad.delta_omega_r1 = bad.delta_kappa_r1 = std::numeric_limits<double>::quiet_NaN();
      bad.weak_coupling_ok = bad.kerr_ok = bad.population_ok = false;
      out.table.rows[idx] = backaction_row(geom, b, det, fd, bad);
      errors[idx] = e.what();
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) work(i);
      });
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i].empty()) continue;
    ++out.nan_count;
    if (out.errors.size() < 10) out.errors.push_back("point " + std::to_string(i) + ": " + errors[i]);
  }
  return out;
}

} // namespace cavmag
