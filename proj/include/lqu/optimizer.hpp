#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lqu/linalg.hpp"
#include "lqu/lqu_core.hpp"
#include "lqu/su_generators.hpp"

namespace lqu {

// Genetic-algorithm settings for the fixed-spectrum minimization.
struct GAConfig {
  std::size_t population_size = 64;
  std::size_t generations = 400;
  std::size_t tournament_size = 3;
  double crossover_rate = 0.7;
  double mutation_sigma = 0.3;  // halved every 100 generations
  double stall_tolerance = 1e-8;
  std::size_t stall_generations = 60;
  std::uint64_t seed = 0;
  std::size_t polish_steps = 200;  // quasi-Newton iterations per refinement start
  std::size_t polish_starts = 32;  // incumbent plus best initial individuals refined on the group

  // Throws ParamOutOfRange on an unusable configuration.
  void validate() const;
};

struct OptimizeResult {
  double value = 0.0;
  std::vector<double> best_params;
  ComplexMatrix observable;  // V spectrum V^dagger on A
  std::vector<double> history;  // best value per GA generation, then per improving refinement
  std::size_t evaluations = 0;
};

inline constexpr double kDegenerateSpectrumTolerance = 1e-9;

// V = exp(i sum_k theta_k l_k). Throws DimensionMismatch on a length mismatch.
ComplexMatrix unitary_from_params(std::span<const double> theta, const GeneratorSet& generators);

// Principal logarithm: theta with exp(i sum_k theta_k l_k) = V for V in SU(d).
// Components may fall outside [-pi, pi].
std::vector<double> params_from_unitary(const ComplexMatrix& unitary, const GeneratorSet& generators);

// V spectrum V^dagger.
ComplexMatrix observable_from_params(std::span<const double> theta, const ComplexMatrix& spectrum,
                                     const GeneratorSet& generators);

// Skew information restricted to observables K (x) I on A. Precomputes the
// d_a^4 contraction T_{ab,cd} = Tr(sqrt(rho)(|a><b| (x) I) sqrt(rho)(|c><d| (x) I))
// and the reduced state, so each evaluation costs O(d_a^4).
class LocalSkewForm {
public:
  explicit LocalSkewForm(const DensityMatrix& rho);

  std::size_t dim_a() const noexcept { return dim_a_; }
  double operator()(const ComplexMatrix& local_observable) const;
  // G with dI = Tr(G dK).
  ComplexMatrix gradient(const ComplexMatrix& local_observable) const;

private:
  std::size_t dim_a_;
  ComplexMatrix reduced_;
  std::vector<Complex> contraction_;
};

// Minimizes I(rho, V spectrum V^dagger (x) I) over SU(d_a). Deterministic for a
// fixed config.seed. Throws DegenerateSpectrum if two eigenvalues of the
// spectrum are within 1e-9, DimensionMismatch if it does not act on A.
OptimizeResult optimize_lqu(const DensityMatrix& rho, const ComplexMatrix& spectrum, const GAConfig& config);

}  // namespace lqu
