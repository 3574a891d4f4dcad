#include "lqu/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "lqu/errors.hpp"
#include "lqu/states.hpp"

namespace lqu {

namespace {

std::size_t family_dim_a(const std::string& state) {
  if (state == "werner" || state == "horodecki33" || state == "dephased_bell33") return 3;
  if (state == "horodecki42") return 4;
  throw Error(ErrorKind::ParamOutOfRange,
              "unknown sweep state '" + state + "' (expected werner, horodecki33, horodecki42, dephased_bell33)");
}

std::string family_parameter(const std::string& state) {
  if (state == "werner") return "p";
  if (state == "dephased_bell33") return "t";
  return "h";
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

DensityMatrix sweep_state(const SweepConfig& config, double x) {
  if (config.state == "werner") return werner(x);
  if (config.state == "horodecki33") return horodecki33(x);
  if (config.state == "horodecki42") return horodecki42(x);
  return dephased_bell33(config.rate_a, config.rate_b, x);
}

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

}  // namespace

SweepMode parse_sweep_mode(const std::string& text) {
  if (text == "bound") return SweepMode::Bound;
  if (text == "optimize") return SweepMode::Optimize;
  if (text == "both") return SweepMode::Both;
  throw Error(ErrorKind::ParamOutOfRange, "unknown mode '" + text + "' (expected bound, optimize, both)");
}

std::string sweep_mode_name(SweepMode mode) {
  switch (mode) {
    case SweepMode::Bound: return "bound";
    case SweepMode::Optimize: return "optimize";
    case SweepMode::Both: return "both";
  }
  return "both";
}

ComplexMatrix resolve_spectrum(const std::string& text, std::size_t dim) {
  std::vector<double> diagonal;
  if (text == "default" || text.empty()) {
    if (dim == 3) return ComplexMatrix::diagonal({1.0, -1.0, 0.0});
    return resolve_spectrum("ladder", dim);
  }
  if (text == "lambda1") {
    diagonal.assign(dim, 0.0);
    diagonal[0] = 1.0;
    diagonal[1] = -1.0;
  } else if (text == "ladder") {
    for (std::size_t i = 0; i < dim; ++i)
      diagonal.push_back(static_cast<double>(dim) - 1.0 - 2.0 * static_cast<double>(i));
  } else {
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream in(normalized);
    double value = 0.0;
    while (in >> value) diagonal.push_back(value);
    if (!in.eof()) throw Error(ErrorKind::ParseError, "cannot parse spectrum '" + text + "'");
  }
  if (diagonal.size() != dim) {
    std::ostringstream msg;
    msg << "spectrum '" << text << "' has " << diagonal.size() << " values, subsystem A needs " << dim;
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  return ComplexMatrix::diagonal(diagonal);
}

std::string SweepConfig::resolved_parameter() const {
  return parameter.empty() ? family_parameter(state) : parameter;
}

double SweepConfig::grid_value(std::size_t index) const {
  if (index + 1 == steps) return stop;
  return start + (stop - start) * static_cast<double>(index) / static_cast<double>(steps - 1);
}

void SweepConfig::validate() const {
  const std::size_t dim_a = family_dim_a(state);
  if (resolved_parameter() != family_parameter(state)) {
    throw Error(ErrorKind::ParamOutOfRange,
                "state '" + state + "' is swept over '" + family_parameter(state) + "', not '" + parameter + "'");
  }
  if (steps < 2) throw Error(ErrorKind::ParamOutOfRange, "steps must be at least 2");
  if (!(start < stop)) throw Error(ErrorKind::ParamOutOfRange, "range start must be below stop");
  if (family_parameter(state) == "t") {
    if (start < 0.0) throw Error(ErrorKind::ParamOutOfRange, "time range must be nonnegative");
    if (rate_a < 0.0 || rate_b < 0.0) throw Error(ErrorKind::ParamOutOfRange, "rates must be nonnegative");
  } else if (start < 0.0 || stop > 1.0) {
    throw Error(ErrorKind::ParamOutOfRange, "parameter range must lie in [0, 1]");
  }
  const ComplexMatrix lambda = resolve_spectrum(spectrum, dim_a);
  spectrum_decompose(lambda, su_algebra(dim_a).generators);
  if (mode != SweepMode::Bound) {
    ga.validate();
    const HermitianEig eig = hermitian_eigendecompose(lambda);
    for (std::size_t i = 0; i + 1 < eig.eigenvalues.size(); ++i)
      if (eig.eigenvalues[i + 1] - eig.eigenvalues[i] <= kDegenerateSpectrumTolerance)
        throw Error(ErrorKind::DegenerateSpectrum, "spectrum '" + spectrum + "' has repeated eigenvalues");
  }
}

std::vector<SweepPoint> run_sweep(const SweepConfig& config) {
  config.validate();
  const ComplexMatrix lambda = resolve_spectrum(config.spectrum, family_dim_a(config.state));
  std::vector<SweepPoint> points(config.steps);

  auto evaluate = [&](std::size_t index) {
    SweepPoint& point = points[index];
    point.row.param = config.grid_value(index);
    const auto begin = std::chrono::steady_clock::now();
    try {
      const DensityMatrix rho = sweep_state(config, point.row.param);
      const LowerBoundReport report = lower_bound(rho, lambda);
      point.row.bound = report.bound;
      point.row.alpha = report.alpha;
      point.row.lambda_max = report.lambda_max;
      if (config.mode != SweepMode::Bound) {
        GAConfig ga = config.ga;
        ga.seed = point_seed(config.ga.seed, index);
        const OptimizeResult result = optimize_lqu(rho, lambda, ga);
        if (!std::isfinite(result.value)) throw Error(ErrorKind::NoConvergence, "non-finite optimum");
        point.row.optimized = result.value;
      }
    } catch (const std::exception& e) {
      point.error = e.what();
    }
    if (config.record_timing) {
      point.row.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                   std::chrono::steady_clock::now() - begin)
                                   .count();
    }
  };

  std::size_t threads = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  threads = std::clamp<std::size_t>(threads, 1, config.steps);
  if (threads == 1) {
    for (std::size_t i = 0; i < config.steps; ++i) evaluate(i);
    return points;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  for (std::size_t t = 0; t < threads; ++t)
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < config.steps; i = next++) evaluate(i);
    });
  workers.clear();
  return points;
}

std::string format_csv_row(const SweepRow& row) {
  std::string line = format_number(row.param) + "," + format_number(row.bound) + ",";
  if (row.optimized) line += format_number(*row.optimized);
  line += "," + format_number(row.alpha) + "," + format_number(row.lambda_max) + "," +
          std::to_string(row.wall_time_ms);
  return line;
}

SweepOutcome write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
  SweepOutcome outcome;
  out << kCsvHeader << '\n';
  for (const auto& point : points) {
    if (point.error) {
      outcome.status = SweepStatus::OptimizerFailure;
      outcome.message = "optimizer failure at param=" + format_number(point.row.param) + ": " + *point.error;
    } else if (point.row.optimized && *point.row.optimized < point.row.bound - kSoundnessTolerance) {
      outcome.status = SweepStatus::SoundnessViolation;
      outcome.message = "soundness violation at param=" + format_number(point.row.param) +
                        ": optimized " + format_number(*point.row.optimized) + " < bound " +
                        format_number(point.row.bound);
    }
    if (outcome.status != SweepStatus::Ok) {
      out << "#ABORTED," << outcome.message << '\n';
      return outcome;
    }
    out << format_csv_row(point.row) << '\n';
    ++outcome.rows_written;
  }
  return outcome;
}

void write_svg_plot(std::ostream& out, const std::string& title, const std::string& x_label,
                    const std::vector<PlotSeries>& series) {
  constexpr double kWidth = 640.0, kHeight = 420.0;
  constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool first = true;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        x_min = x_max = s.x[i];
        y_min = y_max = s.y[i];
        first = false;
      }
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  if (x_max <= x_min) x_max = x_min + 1.0;
  if (y_max <= y_min) y_max = y_min + 1.0;
  const double pad = 0.05 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h; };
  char buf[256];

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" viewBox=\"0 0 640 420\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" << title
      << "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" stroke=\"black\"/>\n",
                kLeft, kTop, plot_w, plot_h);
  out << buf;
  for (int tick = 0; tick <= 5; ++tick) {
    const double xv = x_min + (x_max - x_min) * tick / 5.0;
    const double yv = y_min + (y_max - y_min) * tick / 5.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                  "font-size=\"11\">%.3g</text>\n",
                  px(xv), kHeight - kBottom + 16.0, xv);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\" font-family=\"sans-serif\" "
                  "font-size=\"11\">%.3g</text>\n",
                  kLeft - 6.0, py(yv) + 4.0, yv);
    out << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                "font-size=\"13\">",
                kLeft + plot_w / 2.0, kHeight - 12.0);
  out << buf << x_label << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kColors[si % 4];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i == 0 ? "" : " ", px(s.x[i]), py(s.y[i]));
      out << buf;
    }
    out << "\"/>\n";
    const double ly = kTop + 16.0 + 18.0 * static_cast<double>(si);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" stroke-width=\"2\"/>\n",
                  kWidth - kRight - 150.0, ly, kWidth - kRight - 125.0, ly, color);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"12\">",
                  kWidth - kRight - 118.0, ly + 4.0);
    out << buf << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

SweepOutcome run_and_write(const SweepConfig& config) {
  const std::vector<SweepPoint> points = run_sweep(config);
  SweepOutcome outcome;
  if (config.output.empty()) {
    std::ostringstream sink;
    outcome = write_sweep_csv(sink, points);
    std::fputs(sink.str().c_str(), stdout);
  } else {
    std::ofstream out(config.output);
    if (!out) throw Error(ErrorKind::ParseError, "cannot write " + config.output.string());
    outcome = write_sweep_csv(out, points);
  }

  if (config.svg && !config.output.empty()) {
    PlotSeries bound{"lower bound", {}, {}};
    PlotSeries optimized{"optimized LQU", {}, {}};
    for (std::size_t i = 0; i < outcome.rows_written; ++i) {
      const SweepRow& row = points[i].row;
      bound.x.push_back(row.param);
      bound.y.push_back(row.bound);
      if (row.optimized) {
        optimized.x.push_back(row.param);
        optimized.y.push_back(*row.optimized);
      }
    }
    std::vector<PlotSeries> series{bound};
    if (!optimized.x.empty()) series.push_back(optimized);
    std::filesystem::path svg_path = config.output;
    svg_path.replace_extension(".svg");
    std::ofstream svg(svg_path);
    if (!svg) throw Error(ErrorKind::ParseError, "cannot write " + svg_path.string());
    write_svg_plot(svg, "LQU: " + config.state, config.resolved_parameter(), series);
  }
  return outcome;
}

std::vector<SweepConfig> figure_preset(int figure, const std::filesystem::path& output_stem) {
  std::filesystem::path base = output_stem;
  if (base.empty()) base = "fig" + std::to_string(figure);
  base.replace_extension();
  const std::string stem = base.string();

  SweepConfig config;
  config.mode = SweepMode::Both;
  config.start = 0.0;
  config.stop = 1.0;
  config.steps = 51;
  config.output = stem + ".csv";
  switch (figure) {
    case 1:
      config.state = "werner";
      config.spectrum = "1,-1,0";
      return {config};
    case 2:
      config.state = "horodecki33";
      config.spectrum = "1,-1,0";
      return {config};
    case 3: {
      config.state = "dephased_bell33";
      config.spectrum = "1,-1,0";
      config.stop = 5.0;
      config.steps = 21;
      SweepConfig slow = config;
      slow.rate_a = 0.5;
      slow.rate_b = 0.5;
      slow.output = stem + "-rates-0.5-0.5.csv";
      SweepConfig fast = config;
      fast.rate_a = 2.0;
      fast.rate_b = 1.0;
      fast.output = stem + "-rates-2-1.csv";
      return {slow, fast};
    }
    case 4:
      config.state = "horodecki42";
      config.spectrum = "3,1,-1,-3";
      return {config};
    default:
      throw Error(ErrorKind::ParamOutOfRange, "figure presets are fig1 to fig4");
  }
}

}  // namespace lqu
