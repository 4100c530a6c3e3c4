#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "cavmag/config.hpp"
#include "cavmag/output.hpp"
#include "cavmag/sweep.hpp"

using namespace cavmag;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

std::string preset_text(const std::string& name) {
  std::ifstream in(preset_directory() / (name + ".yaml"));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "test");
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(CAVMAG_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("cavmag_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

} // namespace

TEST_CASE("top-CPW preset reproduces its parameter table") {
  const auto cfg = load_config("table1_top_cpw");
  const auto& d = cfg.device;
  CHECK(d.geometry == Geometry::TopCPW);
  CHECK(d.omega_r1().in_hz() == Approx(500e6));
  CHECK(to_hz(d.resonator.modes[0].kappa_internal) == Approx(500.0));
  CHECK(to_hz(external_damping(d.resonator, d.omega_r1())) == Approx(500.0));
  CHECK(to_hz(d.kappa_m_internal) == Approx(2e6));
  CHECK(to_hz(d.couplings.g_xz1) == Approx(12.835).epsilon(0.005));
  CHECK(cfg.omega_m().in_hz() == Approx(20e9).epsilon(1e-12));
  CHECK(to_hz(cfg.detuning()) == Approx(-500e6).epsilon(1e-9));
  CHECK(cfg.drive.power == Approx(1e-4));
  REQUIRE(cfg.sweep);
  CHECK(cfg.sweep->detuning_hz->count == 1201);
  CHECK(cfg.warnings.empty());
}

TEST_CASE("45 degree preset reproduces its parameter table") {
  const auto cfg = load_config("table2_45deg");
  const auto& d = cfg.device;
  CHECK(d.geometry == Geometry::FortyFive);
  CHECK(d.resonator.modes.size() == 3);
  CHECK(d.omega_r2().in_hz() == Approx(19.5e9));
  CHECK(d.omega_r3().in_hz() == Approx(20.5e9));
  CHECK(to_hz(total_damping(d.resonator, d.omega_r2())) == Approx(2.02e6));
  CHECK(to_hz(external_damping(d.resonator, d.omega_r3())) == Approx(2.21e6).epsilon(0.01));
  CHECK(to_hz(d.couplings.g_xz1) == Approx(9.076).epsilon(0.005));
  CHECK(to_hz(d.g_xx_at(d.omega_r2(), cfg.b_field)) == Approx(41.5e6).epsilon(0.02));
  CHECK(to_hz(d.g_xx_at(d.omega_r3(), cfg.b_field)) == Approx(42.6e6).epsilon(0.02));
  CHECK(d.kappa_m_ext(cfg.omega_m().rad_s()) == 0.0);
  CHECK(cfg.omega_m().in_hz() == Approx(20e9).epsilon(1e-12));
  CHECK(cfg.warnings.empty());  // 19.5 and 20.5 GHz are the 39th and 41st harmonics
}

TEST_CASE("config parse errors") {
  CHECK(error_of("").find("empty") != std::string::npos);
  CHECK(error_of("   \n# only a comment\n").find("empty") != std::string::npos);
  CHECK(error_of("device: [unclosed").find("line") != std::string::npos);
  CHECK(error_of("- a\n- b\n").find("mapping") != std::string::npos);
}

TEST_CASE("config rejects unknown keys with their location") {
  auto text = preset_text("table1_top_cpw");
  text.replace(text.find("anisotropy:"), 11, "anisotropyy:");
  const auto err = error_of(text);
  CHECK(err.find("device.anisotropyy") != std::string::npos);
  CHECK(err.find("unknown key") != std::string::npos);
  CHECK(err.find("line 8") != std::string::npos);
  CHECK(error_of(preset_text("table1_top_cpw") + "extra: 1\n").find("config.extra") != std::string::npos);
}

TEST_CASE("config validation names the offending key") {
  const auto base = preset_text("table1_top_cpw");
  auto with = [&](const std::string& from, const std::string& to) {
    auto t = base;
    const auto at = t.find(from);
    REQUIRE(at != std::string::npos);
    t.replace(at, from.size(), to);
    return error_of(t);
  };
  CHECK(with("z0_ohm: 50.0", "z0_ohm: -50.0").find("resonator.z0_ohm") != std::string::npos);
  CHECK(with("z0_ohm: 50.0", "z0_ohm: fifty").find("expected a number") != std::string::npos);
  CHECK(with("count: 1201", "count: 1").find("count") != std::string::npos);
  CHECK(with("min: -600.0e6", "min: 700.0e6").find("min must be < max") != std::string::npos);
  CHECK(with("port: magnon_line", "port: feedline").find("drive.port") != std::string::npos);
  CHECK(with("geometry: top_cpw", "geometry: diagonal").find("device.geometry") != std::string::npos);
  CHECK(with("preset: YIG", "preset: GaAs").find("magnet.preset") != std::string::npos);
  CHECK(with("  magnon_freq_hz: 20.0e9\n", "").find("b_field_t or magnon_freq_hz") != std::string::npos);
  CHECK(with("  detuning_hz: -500.0e6", "  detuning_hz: -500.0e6\n  drive_freq_hz: 1.0e9")
            .find("detuning_hz or drive_freq_hz") != std::string::npos);
}

TEST_CASE("config paths and presets resolve") {
  CHECK(resolve_config_path("table2_45deg") == preset_directory() / "table2_45deg.yaml");
  CHECK_THROWS_AS(resolve_config_path("no_such_preset"), ValidationError);
  const auto dir = scratch("empty");
  const auto empty = dir / "empty.yaml";
  std::ofstream(empty).close();
  CHECK_THROWS_AS(load_config(empty.string()), ValidationError);
}

TEST_CASE("number formatting is shortest round-trip") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(2e10) == "2e+10");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-1.0 / 0.0) == "-inf");
  for (double v : {1.0 / 3.0, 6.02214076e23, -1e-300, 12.835}) CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("table writers") {
  Table t;
  t.columns = {"x_hz", "ok", "label"};
  t.rows = {{1.5, true, std::string("a,b")}, {std::nan(""), false, std::string("c")}};
  CHECK(to_csv(t) == "x_hz,ok,label\n1.5,true,\"a,b\"\nnan,false,c\n");
  const auto j = to_json(t);
  CHECK(j[0]["x_hz"] == 1.5);
  CHECK(j[1]["x_hz"].is_null());
  CHECK(j[1]["ok"] == false);
}

TEST_CASE("sweep rows, columns and order") {
  auto cfg = load_config("table2_45deg");
  cfg.sweep->b_field_t = AxisSpec{0.70, 0.72, 3};
  cfg.sweep->drive_freq_hz = AxisSpec{19.5e9, 20.5e9, 4};
  const auto res = run_sweep(cfg, 2);
  CHECK(res.points == 12);
  CHECK(res.nan_count == 0);
  CHECK(res.table.columns == backaction_columns(Geometry::FortyFive));
  CHECK(res.table.columns.front() == "b_field_t");
  REQUIRE(res.table.rows.size() == 12);
  CHECK(std::get<double>(res.table.rows[0][0]) == Approx(0.70));
  CHECK(std::get<double>(res.table.rows[3][0]) == Approx(0.70));
  CHECK(std::get<double>(res.table.rows[4][0]) == Approx(0.71));
  CHECK(std::get<double>(res.table.rows[1][2]) == Approx(19.5e9 + 1e9 / 3));

  const auto top = run_sweep(load_config("table1_top_cpw"), 1);
  CHECK(top.table.columns.front() == "detuning_hz");
  CHECK(top.points == 1201);
}

TEST_CASE("zero-power sweep is identically zero") {
  auto cfg = load_config("table1_top_cpw");
  cfg.drive.power = 0.0;
  const auto res = run_sweep(cfg, 1);
  for (const auto& row : res.table.rows)
    for (std::size_t c = 2; c <= 4; ++c) CHECK(std::get<double>(row[c]) == 0.0);
}

TEST_CASE("failing grid points become NaN and are counted") {
  auto cfg = load_config("table1_top_cpw");
  cfg.sweep->detuning_hz = AxisSpec{-25e9, 0.0, 6};  // the first two drive frequencies are negative
  const auto res = run_sweep(cfg, 3);
  CHECK(res.nan_count == 2);
  CHECK(std::isnan(std::get<double>(res.table.rows[0][3])));
  CHECK(std::isfinite(std::get<double>(res.table.rows[5][3])));
  CHECK(res.errors.size() == 2);
}

TEST_CASE("parallel and serial sweeps are byte-identical") {
  auto cfg = load_config("table2_45deg");
  cfg.sweep->b_field_t = AxisSpec{0.69, 0.73, 37};
  cfg.sweep->drive_freq_hz = AxisSpec{19e9, 21e9, 41};
  const auto serial = to_csv(run_sweep(cfg, 1).table);
  CHECK(to_csv(run_sweep(cfg, 4).table) == serial);
  CHECK(to_csv(run_sweep(cfg, 7).table) == serial);
  CHECK(to_csv(run_sweep(cfg, 1).table) == serial);
}

TEST_CASE("command-line exit codes and outputs") {
  auto r = cli("params --config table1_top_cpw");
  CHECK(r.code == 0);
  CHECK(r.out.find("g_xz1_hz") != std::string::npos);

  r = cli("squeeze --config table1_top_cpw --cooperativity 7.9 --n-th 0.1 --kappa-ratio 2.5e-4 --format json");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j[0]["variance"].get<double>() == Approx(0.39).epsilon(0.01));
  CHECK(j[0]["squeezing_db"].get<double>() == Approx(4.1).epsilon(0.01));

  const auto dir = scratch("cli");
  const auto empty = dir / "empty.yaml";
  std::ofstream(empty).close();
  CHECK(cli("params --config " + empty.string()).code == 2);
  CHECK(cli("params --config no_such_preset").code == 2);
  CHECK(cli("params").code == 2);
  CHECK(cli("params --config table1_top_cpw --format xml").code == 2);
  CHECK(cli("oracle --config table2_45deg").code == 2);
  CHECK(cli("oracle --config desk_oracle").code == 0);
  CHECK(cli("oracle --config desk_oracle --tolerance 1e-9").code == 3);
}

TEST_CASE("command-line files and manifest") {
  const auto dir = scratch("files");
  auto r = cli("spectrum --config table1_top_cpw --out " + dir.string());
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "spectrum.csv"));
  CHECK(fs::exists(dir / "spectrum.json"));
  std::ifstream m(dir / "manifest.json");
  const auto manifest = nlohmann::json::parse(m);
  CHECK(manifest["outputs"].size() == 2);
  CHECK(manifest["config_snapshot"].get<std::string>() == preset_text("table1_top_cpw"));
  CHECK(manifest.contains("timestamp"));
  std::ifstream csv(dir / "spectrum.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "probe_freq_hz,re_s21,im_s21,abs_s21,abs_s21_db");

  const auto a = scratch("sweep_a"), b = scratch("sweep_b");
  CHECK(cli("sweep --config table1_top_cpw --threads 1 --out " + a.string()).code == 0);
  CHECK(cli("sweep --config table1_top_cpw --threads 3 --out " + b.string()).code == 0);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CHECK(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"));
  CHECK(slurp(a / "sweep.json") == slurp(b / "sweep.json"));

  const auto t = scratch("traj");
  CHECK(cli("oracle --config desk_oracle --trajectory --stride 100 --out " + t.string()).code == 0);
  std::ifstream tr(t / "trajectory.csv");
  std::getline(tr, header);
  CHECK(header == "t_s,re_delta_beta,im_delta_beta,phi_wb,phi_dot_wb_per_s");
}
