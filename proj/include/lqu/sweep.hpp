#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lqu/linalg.hpp"
#include "lqu/optimizer.hpp"

namespace lqu {

enum class SweepMode { Bound, Optimize, Both };

SweepMode parse_sweep_mode(const std::string& text);
std::string sweep_mode_name(SweepMode mode);

// Spectra are given either as a preset name or as comma/space separated
// diagonal values:
//   default  diag(1,-1) for d=2, diag(1,-1,0) for d=3, the ladder otherwise
//   lambda1  diag(1,-1,0,...,0)
//   ladder   diag(d-1, d-3, ..., -(d-1))
ComplexMatrix resolve_spectrum(const std::string& text, std::size_t dim);

struct SweepConfig {
  std::string state = "werner";  // werner | horodecki33 | horodecki42 | dephased_bell33
  std::string parameter;         // p | h | t; empty picks the family's own
  double start = 0.0;
  double stop = 1.0;
  std::size_t steps = 51;
  SweepMode mode = SweepMode::Both;
  std::string spectrum = "default";
  double rate_a = 0.5;
  double rate_b = 0.5;
  GAConfig ga;
  std::filesystem::path output;
  bool svg = false;
  bool record_timing = false;  // wall_time_ms is written as 0 unless set
  std::size_t threads = 0;     // 0 = hardware concurrency

  // Throws ParamOutOfRange / DegenerateSpectrum / DimensionMismatch.
  void validate() const;
  std::string resolved_parameter() const;
  double grid_value(std::size_t index) const;
};

struct SweepRow {
  double param = 0.0;
  double bound = 0.0;
  std::optional<double> optimized;
  double alpha = 0.0;
  double lambda_max = 0.0;
  std::int64_t wall_time_ms = 0;
};

// One grid point; `error` is set instead of the numeric fields when the
// point failed.
struct SweepPoint {
  SweepRow row;
  std::optional<std::string> error;
};

std::vector<SweepPoint> run_sweep(const SweepConfig& config);

inline constexpr double kSoundnessTolerance = 1e-6;

enum class SweepStatus { Ok = 0, OptimizerFailure = 3, SoundnessViolation = 4 };

struct SweepOutcome {
  SweepStatus status = SweepStatus::Ok;
  std::size_t rows_written = 0;
  std::string message;
};

inline constexpr const char* kCsvHeader = "param,bound,optimized,alpha,lambda_max,wall_time_ms";

// Writes rows in grid order. Stops at the first failed point or the first row
// with optimized < bound - 1e-6, emitting a '#ABORTED' marker line.
SweepOutcome write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);

std::string format_csv_row(const SweepRow& row);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Self-contained SVG line plot with axes and a legend.
void write_svg_plot(std::ostream& out, const std::string& title, const std::string& x_label,
                    const std::vector<PlotSeries>& series);

// Runs a sweep and writes CSV (and SVG next to it when requested).
SweepOutcome run_and_write(const SweepConfig& config);

// Figure presets. fig3 yields two sweeps, one per rate pair.
std::vector<SweepConfig> figure_preset(int figure, const std::filesystem::path& output_stem);

}  // namespace lqu
