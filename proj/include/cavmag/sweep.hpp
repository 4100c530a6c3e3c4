#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cavmag/config.hpp"
#include "cavmag/output.hpp"

namespace cavmag {

struct SweepResult {
  Table table;
  std::size_t points = 0;
  std::size_t nan_count = 0;
  /// First few per-point error messages, in grid order.
  std::vector<std::string> errors;
};

/// Backaction at one operating point of the configured device and drive.
/// The drive frequency replaces cfg.drive.omega_d; b_field is ignored for top_cpw.
BackactionResult evaluate_point(const RunConfig& cfg, double b_field, double omega_d);

/// Number of hardware threads, at least 1.
std::size_t default_threads();

/// Evaluates the configured grid. Rows follow row-major order with the field axis outermost.
/// Per-point failures become NaN cells and are counted; the sweep itself never aborts on them.
SweepResult run_sweep(const RunConfig& cfg, std::size_t threads = default_threads());

/// Column layout shared by sweep and single-point output.
std::vector<std::string> backaction_columns(Geometry g);
std::vector<Cell> backaction_row(Geometry g, double b_field, double detuning_hz,
                                 double drive_freq_hz, const BackactionResult& r);

} // namespace cavmag
