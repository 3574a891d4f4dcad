#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "lqu/linalg.hpp"
#include "lqu/lqu_core.hpp"

namespace lqu {

// Single-subsystem Kraus map; sum_i E_i^dagger E_i = I.
struct Channel {
  std::size_t dim = 0;
  std::vector<ComplexMatrix> kraus;
};

// Largest deviation of sum_i E_i^dagger E_i from the identity.
double completeness_residual(const Channel& channel);

// p |psi><psi| + (1 - p) I/9 with |psi> = (|00> + |11> + |22>)/sqrt(3).
DensityMatrix werner(double p);

// 3x3 bound-entangled family, normalized by 1/(8h + 1).
DensityMatrix horodecki33(double h);

// 4x2 bound-entangled family, normalized by 1/(7h + 1); A is the 4-level factor.
DensityMatrix horodecki42(double h);

// Normalized projector onto (|00> + |11> + |22>)/sqrt(3).
DensityMatrix bell33();

// Qutrit dephasing with strength gamma in [0, 1].
Channel dephasing_channel(double gamma);

// sum_ij (E_i (x) F_j) rho (E_i (x) F_j)^dagger
DensityMatrix apply_channels(const DensityMatrix& rho, const Channel& channel_a, const Channel& channel_b);

// Dephasing strength after time t at the given rate: 1 - exp(-rate t).
double dephasing_strength(double rate, double t);

DensityMatrix dephased_bell33(double rate_a, double rate_b, double t);

DensityMatrix validate_density(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b);

// Text format: a first line "d1 d2", then (d1 d2)^2 lines "re im" in
// row-major order. Values are written with 17 significant digits.
DensityMatrix read_density(std::istream& in);
DensityMatrix read_density_file(const std::filesystem::path& path);
void write_density(std::ostream& out, const DensityMatrix& rho);
void write_density_file(const std::filesystem::path& path, const DensityMatrix& rho);

namespace state_spec {

struct Werner { double p = 0.0; };
struct Horodecki33 { double h = 0.0; };
struct Horodecki42 { double h = 0.0; };
struct Bell33 {};
struct DephasedBell33 {
  double rate_a = 0.0;
  double rate_b = 0.0;
  double t = 0.0;
};
struct Raw { std::filesystem::path file; };

}  // namespace state_spec

using StateSpec = std::variant<state_spec::Werner, state_spec::Horodecki33, state_spec::Horodecki42,
                               state_spec::Bell33, state_spec::DephasedBell33, state_spec::Raw>;

DensityMatrix make_state(const StateSpec& spec);

// Short family name, e.g. "werner" or "horodecki42".
std::string state_family_name(const StateSpec& spec);

}  // namespace lqu
