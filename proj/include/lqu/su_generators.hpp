#pragma once

#include <cstddef>
#include <vector>

#include "lqu/linalg.hpp"

namespace lqu {

// The d^2 - 1 traceless Hermitian generators of SU(d), normalized so that
// Tr(l_i l_j) = 2 delta_ij. Order: the d - 1 diagonal generators, then the
// symmetric pairs |k><m| + |m><k|, then the antisymmetric pairs
// i(|k><m| - |m><k|), pairs in lexicographic (k, m) order with k < m.
class GeneratorSet {
public:
  explicit GeneratorSet(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return generators_.size(); }
  const ComplexMatrix& operator[](std::size_t i) const { return generators_[i]; }
  const std::vector<ComplexMatrix>& generators() const noexcept { return generators_; }

private:
  std::size_t dim_;
  std::vector<ComplexMatrix> generators_;
};

GeneratorSet build_generators(std::size_t dim);

// f_ijk = Tr([l_i, l_j] l_k) / 4i and g_ijk = Tr({l_i, l_j} l_k) / 4, dense
// N^3 storage with |entries| < 1e-12 replaced by exact zeros.
class StructureConstants {
public:
  struct Entry {
    std::size_t i, j, k;
    double value;
  };

  explicit StructureConstants(const GeneratorSet& generators);

  std::size_t size() const noexcept { return n_; }
  double f(std::size_t i, std::size_t j, std::size_t k) const { return f_[index(i, j, k)]; }
  double g(std::size_t i, std::size_t j, std::size_t k) const { return g_[index(i, j, k)]; }

  // Nonzero g entries, for contractions that only need the sparse pattern.
  const std::vector<Entry>& g_nonzeros() const noexcept { return g_nonzeros_; }
  const std::vector<Entry>& f_nonzeros() const noexcept { return f_nonzeros_; }

private:
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * n_ + j) * n_ + k; }

  std::size_t n_;
  std::vector<double> f_;
  std::vector<double> g_;
  std::vector<Entry> f_nonzeros_;
  std::vector<Entry> g_nonzeros_;
};

StructureConstants structure_constants(const GeneratorSet& generators);

inline constexpr double kStructureConstantCutoff = 1e-12;
inline constexpr double kDegenerateDirectionTolerance = 1e-12;

// K = s . lambda + beta I with alpha = |s|.
struct SpectrumDecomposition {
  std::vector<double> s;
  double beta = 0.0;
  double alpha = 0.0;
};

// Works for any Hermitian d x d matrix. Throws DegenerateDirection when
// alpha < 1e-12, i.e. the input is proportional to the identity.
SpectrumDecomposition spectrum_decompose(const ComplexMatrix& spectrum, const GeneratorSet& generators);

ComplexMatrix reconstruct(const SpectrumDecomposition& decomposition, const GeneratorSet& generators);

// beta and alpha are unitary invariants; this re-derives them for V spectrum V^dagger
// and compares (1e-10). Requires V unitary within 1e-10.
bool check_spectrum_invariance(const ComplexMatrix& spectrum, const ComplexMatrix& unitary,
                               const GeneratorSet& generators);

// Largest max-abs residual of l_i l_j - (i f_ijk l_k + g_ijk l_k + (2/d) delta_ij I)
// over all index pairs.
double product_expansion_residual(const GeneratorSet& generators, const StructureConstants& constants);

// Largest |Tr(l_i l_j) - 2 delta_ij|.
double orthonormality_residual(const GeneratorSet& generators);


// Generators plus structure constants for one dimension. Built once per
// dimension and shared read-only.
struct SuAlgebra {
  GeneratorSet generators;
  StructureConstants constants;

  explicit SuAlgebra(std::size_t dim) : generators(dim), constants(generators) {}
};

const SuAlgebra& su_algebra(std::size_t dim);

}  // namespace lqu
