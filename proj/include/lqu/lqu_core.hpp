#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "lqu/linalg.hpp"
#include "lqu/su_generators.hpp"

namespace lqu {

// A validated bipartite state on C^{d_a} (x) C^{d_b}. Basis |a>|b> sits at row
// a * d_b + b, so A is the left Kronecker factor.
//
// The square root is computed on first use and shared by all copies; the
// cache is initialized exactly once even under concurrent access.
class DensityMatrix {
public:
  // Validates Hermiticity, unit trace and positivity (each 1e-10). Throws
  // DimensionMismatch, NotHermitian, TraceNotOne or NotPSD.
  DensityMatrix(ComplexMatrix rho, std::size_t dim_a, std::size_t dim_b);

  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }
  std::size_t dim() const noexcept { return dim_a_ * dim_b_; }
  const ComplexMatrix& matrix() const noexcept { return rho_; }
  const ComplexMatrix& sqrt() const;

  // Partial trace over B.
  ComplexMatrix reduced_a() const;

private:
  struct SqrtCache;

  std::size_t dim_a_;
  std::size_t dim_b_;
  ComplexMatrix rho_;
  std::shared_ptr<SqrtCache> cache_;
};

inline constexpr double kSkewClampTolerance = 1e-10;

// Wigner-Yanase skew information Tr(rho K^2) - Tr(sqrt(rho) K sqrt(rho) K)
// for a Hermitian K on the full space.
double skew_information(const DensityMatrix& rho, const ComplexMatrix& observable);

// L_k = Tr(rho (l_k (x) I)).
std::vector<double> l_vector(const DensityMatrix& rho, const GeneratorSet& generators);

struct WMatrix {
  RealMatrix w;
  std::vector<double> l;
};

// W_ij = Tr(sqrt(rho)(l_i (x) I) sqrt(rho)(l_j (x) I)) - sum_k g_ijk L_k.
WMatrix w_matrix(const DensityMatrix& rho, const GeneratorSet& generators,
                 const StructureConstants& constants);

struct LowerBoundReport {
  RealMatrix w;
  std::vector<double> l;
  double lambda_max = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double bound = 0.0;          // alpha^2 (2/d_a - lambda_max), may be negative
  double bound_clamped = 0.0;  // max(bound, 0)
};

// Closed-form lower bound of the local quantum uncertainty for observables on A
// with the spectrum of `spectrum` (a d_a x d_a Hermitian matrix).
LowerBoundReport lower_bound(const DensityMatrix& rho, const ComplexMatrix& spectrum);
LowerBoundReport lower_bound(const DensityMatrix& rho, const ComplexMatrix& spectrum,
                             const SuAlgebra& algebra);

// Exact LQU for a qubit A: 1 - lambda_max of the Pauli correlation matrix.
// Throws WrongDimension unless d_a == 2.
double closed_form_2xd(const DensityMatrix& rho);

}  // namespace lqu
