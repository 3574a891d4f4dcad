#pragma once

// Random unitaries and density matrices for property tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lqu/linalg.hpp"
#include "lqu/lqu_core.hpp"

namespace lqu::testing {

using Rng = std::mt19937_64;

inline ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
  const ComplexMatrix g = ginibre(n, n, rng);
  return (g + g.adjoint()) * Complex(0.5);
}

// Gram-Schmidt on the columns of a Ginibre matrix.
inline ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
  ComplexMatrix q = ginibre(n, n, rng);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      Complex overlap = 0.0;
      for (std::size_t i = 0; i < n; ++i) overlap += std::conj(q(i, k)) * q(i, j);
      for (std::size_t i = 0; i < n; ++i) q(i, j) -= overlap * q(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(q(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= norm;
  }
  return q;
}

// A^dagger A / Tr, full rank with probability one.
inline ComplexMatrix random_density_matrix(std::size_t n, Rng& rng) {
  const ComplexMatrix a = ginibre(n, n, rng);
  ComplexMatrix rho = a.adjoint() * a;
  rho *= 1.0 / rho.trace().real();
  return rho;
}

inline DensityMatrix random_state(std::size_t dim_a, std::size_t dim_b, Rng& rng) {
  return DensityMatrix(random_density_matrix(dim_a * dim_b, rng), dim_a, dim_b);
}

// sum_a p_a |a><a| (x) rho_B^(a) in a random basis of A.
inline DensityMatrix random_classical_quantum(std::size_t dim_a, std::size_t dim_b, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.05, 1.0);
  const ComplexMatrix basis = random_unitary(dim_a, rng);
  std::vector<double> weights(dim_a);
  double total = 0.0;
  for (auto& w : weights) total += (w = uniform(rng));
  ComplexMatrix rho(dim_a * dim_b, dim_a * dim_b);
  for (std::size_t a = 0; a < dim_a; ++a) {
    ComplexMatrix projector(dim_a, dim_a);
    for (std::size_t i = 0; i < dim_a; ++i)
      for (std::size_t j = 0; j < dim_a; ++j) projector(i, j) = basis(i, a) * std::conj(basis(j, a));
    rho += kron(projector, random_density_matrix(dim_b, rng)) * Complex(weights[a] / total);
  }
  return DensityMatrix(std::move(rho), dim_a, dim_b);
}

inline std::vector<double> random_unit_vector(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(n);
  double norm = 0.0;
  for (auto& x : v) norm += (x = normal(rng)) * x;
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

}  // namespace lqu::testing
