#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lqu/config.hpp"
#include "lqu/errors.hpp"
#include "lqu/lqu_core.hpp"
#include "lqu/optimizer.hpp"
#include "lqu/states.hpp"
#include "lqu/su_generators.hpp"
#include "lqu/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitOptimizer = 3;
constexpr int kExitSoundness = 4;

struct StateOptions {
  std::string state = "werner";
  std::optional<double> p;
  std::optional<double> h;
  std::optional<double> t;
  double rate_a = 0.5;
  double rate_b = 0.5;
  std::string file;
  std::string spectrum = "default";
};

void add_state_options(CLI::App* cmd, StateOptions& opts) {
  cmd->set_help_flag("--help", "print this help and exit");
  cmd->add_option("--state", opts.state, "werner | horodecki33 | horodecki42 | bell33 | dephased_bell33 | raw")
      ->capture_default_str();
  cmd->add_option("--p", opts.p, "Werner mixing weight");
  cmd->add_option("--h", opts.h, "Horodecki parameter");
  cmd->add_option("--t", opts.t, "dephasing time");
  cmd->add_option("--rate-a", opts.rate_a, "dephasing rate on A")->capture_default_str();
  cmd->add_option("--rate-b", opts.rate_b, "dephasing rate on B")->capture_default_str();
  cmd->add_option("--file", opts.file, "density matrix file for --state raw");
  cmd->add_option("--spectrum", opts.spectrum, "default | lambda1 | ladder | comma separated diagonal")
      ->capture_default_str();
}

double required(const std::optional<double>& value, const char* flag, const std::string& state) {
  if (!value)
    throw lqu::Error(lqu::ErrorKind::ParamOutOfRange, std::string("state '") + state + "' needs " + flag);
  return *value;
}

lqu::StateSpec state_spec_from(const StateOptions& opts) {
  namespace ss = lqu::state_spec;
  if (opts.state == "werner") return ss::Werner{required(opts.p, "--p", opts.state)};
  if (opts.state == "horodecki33") return ss::Horodecki33{required(opts.h, "--h", opts.state)};
  if (opts.state == "horodecki42") return ss::Horodecki42{required(opts.h, "--h", opts.state)};
  if (opts.state == "bell33") return ss::Bell33{};
  if (opts.state == "dephased_bell33")
    return ss::DephasedBell33{opts.rate_a, opts.rate_b, required(opts.t, "--t", opts.state)};
  if (opts.state == "raw") {
    if (opts.file.empty()) throw lqu::Error(lqu::ErrorKind::ParamOutOfRange, "state 'raw' needs --file");
    return ss::Raw{opts.file};
  }
  throw lqu::Error(lqu::ErrorKind::ParamOutOfRange, "unknown state '" + opts.state + "'");
}

// Nine decimals, without a sign on values that round to zero.
std::string fixed9(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.9f", value);
  const std::string text = buffer;
  return text == "-0.000000000" ? text.substr(1) : text;
}

void print_matrix(const lqu::ComplexMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j)
      std::printf("%s%+.6f%+.6fi", j ? "  " : "  ", m(i, j).real(), m(i, j).imag());
    std::printf("\n");
  }
}

int cmd_bound(const StateOptions& opts) {
  const lqu::DensityMatrix rho = lqu::make_state(state_spec_from(opts));
  const lqu::ComplexMatrix spectrum = lqu::resolve_spectrum(opts.spectrum, rho.dim_a());
  const lqu::LowerBoundReport report = lqu::lower_bound(rho, spectrum);
  std::printf("state       %s\n", opts.state.c_str());
  std::printf("dims        %zux%zu\n", rho.dim_a(), rho.dim_b());
  std::printf("bound       %s\n", fixed9(report.bound).c_str());
  std::printf("bound_clamp %s\n", fixed9(report.bound_clamped).c_str());
  std::printf("alpha       %s\n", fixed9(report.alpha).c_str());
  std::printf("beta        %s\n", fixed9(report.beta).c_str());
  std::printf("lambda_max  %s\n", fixed9(report.lambda_max).c_str());
  std::printf("W           %zux%zu\n", report.w.rows(), report.w.cols());
  return kExitOk;
}

int cmd_optimize(const StateOptions& opts, std::optional<std::uint64_t> seed, const std::string& config_path) {
  lqu::SweepConfig holder;
  if (!config_path.empty()) lqu::apply_config_file(holder, config_path);
  lqu::GAConfig ga = holder.ga;
  if (seed) ga.seed = *seed;

  const lqu::DensityMatrix rho = lqu::make_state(state_spec_from(opts));
  const lqu::ComplexMatrix spectrum = lqu::resolve_spectrum(opts.spectrum, rho.dim_a());
  const lqu::LowerBoundReport report = lqu::lower_bound(rho, spectrum);
  const lqu::OptimizeResult result = lqu::optimize_lqu(rho, spectrum, ga);
  std::printf("state       %s\n", opts.state.c_str());
  std::printf("dims        %zux%zu\n", rho.dim_a(), rho.dim_b());
  std::printf("optimized   %s\n", fixed9(result.value).c_str());
  std::printf("bound       %s\n", fixed9(report.bound).c_str());
  std::printf("gap         %s\n", fixed9(result.value - report.bound).c_str());
  std::printf("evaluations %zu\n", result.evaluations);
  std::printf("seed        %llu\n", static_cast<unsigned long long>(ga.seed));
  std::printf("observable\n");
  print_matrix(result.observable);
  if (result.value < report.bound - lqu::kSoundnessTolerance) {
    std::fprintf(stderr, "soundness violation: optimized %.12g < bound %.12g\n", result.value, report.bound);
    return kExitSoundness;
  }
  return kExitOk;
}

int cmd_generators(int dim) {
  if (dim < 2 || dim > 8)
    throw lqu::Error(lqu::ErrorKind::ParamOutOfRange, "--dim must lie in [2, 8], got " + std::to_string(dim));
  const lqu::SuAlgebra& algebra = lqu::su_algebra(static_cast<std::size_t>(dim));
  const lqu::GeneratorSet& gens = algebra.generators;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    std::printf("lambda_%zu\n", k + 1);
    print_matrix(gens[k]);
  }
  const double ortho = lqu::orthonormality_residual(gens);
  const double product = lqu::product_expansion_residual(gens, algebra.constants);
  std::printf("generators            %zu\n", gens.size());
  std::printf("orthonormality        %.3e\n", ortho);
  std::printf("product expansion     %.3e\n", product);
  return ortho < 1e-11 && product < 1e-11 ? kExitOk : kExitSoundness;
}

int exit_code_for(lqu::SweepStatus status) { return static_cast<int>(status); }

int run_configs(const std::vector<lqu::SweepConfig>& configs) {
  for (const auto& config : configs) config.validate();
  int code = kExitOk;
  for (const auto& config : configs) {
    const lqu::SweepOutcome outcome = lqu::run_and_write(config);
    if (outcome.status != lqu::SweepStatus::Ok) {
      std::fprintf(stderr, "%s\n", outcome.message.c_str());
      return exit_code_for(outcome.status);
    }
    if (!config.output.empty())
      std::fprintf(stderr, "wrote %zu rows to %s\n", outcome.rows_written, config.output.string().c_str());
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local quantum uncertainty: closed-form lower bound and optimized values"};
  app.require_subcommand(1);
  app.set_help_flag("-h,--help", "print this help and exit");

  StateOptions bound_opts;
  auto* bound = app.add_subcommand("bound", "closed-form lower bound for one state");
  add_state_options(bound, bound_opts);

  StateOptions opt_opts;
  std::optional<std::uint64_t> opt_seed;
  std::string opt_config;
  auto* optimize = app.add_subcommand("optimize", "minimize the skew information over the fixed spectrum");
  add_state_options(optimize, opt_opts);
  optimize->add_option("--seed", opt_seed, "optimizer seed");
  optimize->add_option("--config", opt_config, "JSON file; only its 'ga' block is used");

  lqu::SweepConfig sweep_cfg;
  std::string sweep_config_path, sweep_mode, sweep_out, sweep_spectrum;
  std::string sweep_state, sweep_param;
  double sweep_start = 0.0, sweep_stop = 1.0, sweep_rate_a = 0.5, sweep_rate_b = 0.5;
  std::size_t sweep_steps = 0, sweep_threads = 0;
  std::uint64_t sweep_seed = 0;
  auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
  auto* o_config = sweep->add_option("--config", sweep_config_path, "JSON file mirroring the sweep fields");
  auto* o_state = sweep->add_option("--state", sweep_state, "werner | horodecki33 | horodecki42 | dephased_bell33");
  auto* o_param = sweep->add_option("--param", sweep_param, "p | h | t");
  auto* o_start = sweep->add_option("--start", sweep_start);
  auto* o_stop = sweep->add_option("--stop", sweep_stop);
  auto* o_steps = sweep->add_option("--steps", sweep_steps);
  auto* o_mode = sweep->add_option("--mode", sweep_mode, "bound | optimize | both");
  auto* o_spectrum = sweep->add_option("--spectrum", sweep_spectrum);
  auto* o_rate_a = sweep->add_option("--rate-a", sweep_rate_a);
  auto* o_rate_b = sweep->add_option("--rate-b", sweep_rate_b);
  auto* o_seed = sweep->add_option("--seed", sweep_seed);
  auto* o_out = sweep->add_option("--out", sweep_out, "CSV path (stdout if omitted)");
  auto* o_svg = sweep->add_flag("--svg", "also write an SVG plot next to the CSV");
  auto* o_timing = sweep->add_flag("--timing", "record wall_time_ms (breaks byte-identical output)");
  auto* o_threads = sweep->add_option("--threads", sweep_threads, "worker threads, 0 = all cores");

  int gen_dim = 0;
  auto* generators = app.add_subcommand("generators", "dump SU(d) generators and check their algebra");
  generators->add_option("--dim", gen_dim, "2..8")->required();

  struct FigureFlags {
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string config;
    bool svg = false;
    bool timing = false;
    std::size_t threads = 0;
  };
  FigureFlags fig_flags[4];
  CLI::App* figures[4];
  for (int i = 0; i < 4; ++i) {
    const std::string name = "fig" + std::to_string(i + 1);
    figures[i] = app.add_subcommand(name, "preset sweep " + name);
    figures[i]->add_option("--out", fig_flags[i].out, "output stem (default " + name + ")");
    figures[i]->add_option("--seed", fig_flags[i].seed);
    figures[i]->add_option("--config", fig_flags[i].config, "JSON file; only its 'ga' block is used");
    figures[i]->add_flag("--svg", fig_flags[i].svg);
    figures[i]->add_flag("--timing", fig_flags[i].timing);
    figures[i]->add_option("--threads", fig_flags[i].threads);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*bound) return cmd_bound(bound_opts);
    if (*optimize) return cmd_optimize(opt_opts, opt_seed, opt_config);
    if (*generators) return cmd_generators(gen_dim);
    if (*sweep) {
      if (*o_config) lqu::apply_config_file(sweep_cfg, sweep_config_path);
      if (*o_state) sweep_cfg.state = sweep_state;
      if (*o_param) sweep_cfg.parameter = sweep_param;
      if (*o_start) sweep_cfg.start = sweep_start;
      if (*o_stop) sweep_cfg.stop = sweep_stop;
      if (*o_steps) sweep_cfg.steps = sweep_steps;
      if (*o_mode) sweep_cfg.mode = lqu::parse_sweep_mode(sweep_mode);
      if (*o_spectrum) sweep_cfg.spectrum = sweep_spectrum;
      if (*o_rate_a) sweep_cfg.rate_a = sweep_rate_a;
      if (*o_rate_b) sweep_cfg.rate_b = sweep_rate_b;
      if (*o_seed) sweep_cfg.ga.seed = sweep_seed;
      if (*o_out) sweep_cfg.output = sweep_out;
      if (*o_svg) sweep_cfg.svg = true;
      if (*o_timing) sweep_cfg.record_timing = true;
      if (*o_threads) sweep_cfg.threads = sweep_threads;
      if (sweep_cfg.svg && sweep_cfg.output.empty())
        throw lqu::Error(lqu::ErrorKind::ParamOutOfRange, "--svg needs --out");
      return run_configs({sweep_cfg});
    }
    for (int i = 0; i < 4; ++i) {
      if (!*figures[i]) continue;
      const FigureFlags& flags = fig_flags[i];
      lqu::SweepConfig ga_holder;
      if (!flags.config.empty()) lqu::apply_config_file(ga_holder, flags.config);
      std::vector<lqu::SweepConfig> configs = lqu::figure_preset(i + 1, flags.out);
      for (auto& config : configs) {
        config.ga = ga_holder.ga;
        if (flags.seed) config.ga.seed = *flags.seed;
        config.svg = flags.svg;
        config.record_timing = flags.timing;
        config.threads = flags.threads;
      }
      return run_configs(configs);
    }
  } catch (const lqu::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == lqu::ErrorKind::NoConvergence ? kExitOptimizer : kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return kExitOk;
}
