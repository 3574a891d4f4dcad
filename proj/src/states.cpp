#include "lqu/states.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "lqu/errors.hpp"

namespace lqu {

namespace {

void require_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    std::ostringstream msg;
    msg << name << " = " << value << " outside [0, 1]";
    throw Error(ErrorKind::ParamOutOfRange, msg.str());
  }
}

ComplexMatrix maximally_entangled_projector() {
  ComplexMatrix m(9, 9);
  for (std::size_t i : {0u, 4u, 8u})
    for (std::size_t j : {0u, 4u, 8u}) m(i, j) = 1.0 / 3.0;
  return m;
}

}  // namespace

double completeness_residual(const Channel& channel) {
  ComplexMatrix sum(channel.dim, channel.dim);
  for (const auto& e : channel.kraus) sum += e.adjoint() * e;
  return max_abs_diff(sum, ComplexMatrix::identity(channel.dim));
}

DensityMatrix werner(double p) {
  require_unit_interval(p, "p");
  ComplexMatrix rho = maximally_entangled_projector() * Complex(p);
  for (std::size_t i = 0; i < 9; ++i) rho(i, i) += (1.0 - p) / 9.0;
  return DensityMatrix(std::move(rho), 3, 3);
}

DensityMatrix horodecki33(double h) {
  require_unit_interval(h, "h");
  const double diag_corner = (1.0 + h) / 2.0;
  const double off_corner = std::sqrt(1.0 - h * h) / 2.0;
  ComplexMatrix m(9, 9);
  for (std::size_t i : {0u, 4u, 8u})
    for (std::size_t j : {0u, 4u, 8u}) m(i, j) = h;
  for (std::size_t i : {1u, 2u, 3u, 5u, 7u}) m(i, i) = h;
  m(6, 6) = diag_corner;
  m(8, 8) = diag_corner;
  m(6, 8) = off_corner;
  m(8, 6) = off_corner;
  m *= 1.0 / (8.0 * h + 1.0);
  return DensityMatrix(std::move(m), 3, 3);
}

DensityMatrix horodecki42(double h) {
  require_unit_interval(h, "h");
  const double diag_corner = (1.0 + h) / 2.0;
  const double off_corner = std::sqrt(1.0 - h * h) / 2.0;
  ComplexMatrix m(8, 8);
  for (std::size_t i = 0; i < 4; ++i) m(i, i) = h;
  m(5, 5) = h;
  m(6, 6) = h;
  for (std::size_t i = 0; i < 3; ++i) {
    m(i, i + 5) = h;
    m(i + 5, i) = h;
  }
  m(4, 4) = diag_corner;
  m(7, 7) = diag_corner;
  m(4, 7) = off_corner;
  m(7, 4) = off_corner;
  m *= 1.0 / (7.0 * h + 1.0);
  return DensityMatrix(std::move(m), 4, 2);
}

DensityMatrix bell33() { return DensityMatrix(maximally_entangled_projector(), 3, 3); }

Channel dephasing_channel(double gamma) {
  require_unit_interval(gamma, "gamma");
  const double keep = std::sqrt(1.0 - gamma);
  const double leak = std::sqrt(gamma);
  Channel channel{3, {}};
  channel.kraus.push_back(ComplexMatrix::diagonal({1.0, keep, keep}));
  channel.kraus.push_back(ComplexMatrix::diagonal({0.0, leak, 0.0}));
  channel.kraus.push_back(ComplexMatrix::diagonal({0.0, 0.0, leak}));
  return channel;
}

DensityMatrix apply_channels(const DensityMatrix& rho, const Channel& channel_a, const Channel& channel_b) {
  if (channel_a.dim != rho.dim_a() || channel_b.dim != rho.dim_b()) {
    std::ostringstream msg;
    msg << "channels act on " << channel_a.dim << "x" << channel_b.dim << ", state is " << rho.dim_a()
        << "x" << rho.dim_b();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  ComplexMatrix out(rho.dim(), rho.dim());
  for (const auto& e : channel_a.kraus)
    for (const auto& f : channel_b.kraus) {
      const ComplexMatrix op = kron(e, f);
      out += op * rho.matrix() * op.adjoint();
    }
  return DensityMatrix(std::move(out), rho.dim_a(), rho.dim_b());
}

double dephasing_strength(double rate, double t) { return 1.0 - std::exp(-rate * t); }

DensityMatrix dephased_bell33(double rate_a, double rate_b, double t) {
  if (!(rate_a >= 0.0) || !(rate_b >= 0.0) || !(t >= 0.0)) {
    std::ostringstream msg;
    msg << "rates and time must be nonnegative: rate_a=" << rate_a << " rate_b=" << rate_b << " t=" << t;
    throw Error(ErrorKind::ParamOutOfRange, msg.str());
  }
  return apply_channels(bell33(), dephasing_channel(dephasing_strength(rate_a, t)),
                        dephasing_channel(dephasing_strength(rate_b, t)));
}

DensityMatrix validate_density(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b) {
  return DensityMatrix(m, dim_a, dim_b);
}

DensityMatrix read_density(std::istream& in) {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  if (!(in >> dim_a >> dim_b)) throw Error(ErrorKind::ParseError, "expected header line 'd1 d2'");
  const std::size_t n = dim_a * dim_b;
  if (n == 0 || n > 4096) throw Error(ErrorKind::ParseError, "implausible dimensions in header");
  std::vector<Complex> entries;
  entries.reserve(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    double re = 0.0;
    double im = 0.0;
    if (!(in >> re >> im)) {
      std::ostringstream msg;
      msg << "expected " << n * n << " 're im' pairs, read " << i;
      throw Error(ErrorKind::ParseError, msg.str());
    }
    entries.emplace_back(re, im);
  }
  std::string trailing;
  if (in >> trailing) throw Error(ErrorKind::ParseError, "unexpected trailing data '" + trailing + "'");
  return validate_density(ComplexMatrix(n, n, std::move(entries)), dim_a, dim_b);
}

DensityMatrix read_density_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  return read_density(in);
}

void write_density(std::ostream& out, const DensityMatrix& rho) {
  out << rho.dim_a() << ' ' << rho.dim_b() << '\n';
  out << std::setprecision(17);
  for (const auto& z : rho.matrix().entries()) out << z.real() << ' ' << z.imag() << '\n';
}

void write_density_file(const std::filesystem::path& path, const DensityMatrix& rho) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path.string());
  write_density(out, rho);
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

DensityMatrix make_state(const StateSpec& spec) {
  return std::visit(Overloaded{
                        [](const state_spec::Werner& s) { return werner(s.p); },
                        [](const state_spec::Horodecki33& s) { return horodecki33(s.h); },
                        [](const state_spec::Horodecki42& s) { return horodecki42(s.h); },
                        [](const state_spec::Bell33&) { return bell33(); },
                        [](const state_spec::DephasedBell33& s) {
                          return dephased_bell33(s.rate_a, s.rate_b, s.t);
                        },
                        [](const state_spec::Raw& s) { return read_density_file(s.file); },
                    },
                    spec);
}

std::string state_family_name(const StateSpec& spec) {
  return std::visit(Overloaded{
                        [](const state_spec::Werner&) { return std::string("werner"); },
                        [](const state_spec::Horodecki33&) { return std::string("horodecki33"); },
                        [](const state_spec::Horodecki42&) { return std::string("horodecki42"); },
                        [](const state_spec::Bell33&) { return std::string("bell33"); },
                        [](const state_spec::DephasedBell33&) { return std::string("dephased_bell33"); },
                        [](const state_spec::Raw&) { return std::string("raw"); },
                    },
                    spec);
}

}  // namespace lqu
