#include "lqu/su_generators.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "lqu/errors.hpp"

namespace lqu {

GeneratorSet::GeneratorSet(std::size_t dim) : dim_(dim) {
  if (dim < 2) throw Error(ErrorKind::ParamOutOfRange, "SU(d) needs d >= 2, got " + std::to_string(dim));
  generators_.reserve(dim * dim - 1);

  for (std::size_t j = 1; j < dim; ++j) {
    ComplexMatrix m(dim, dim);
    const double norm = std::sqrt(2.0 / static_cast<double>(j * (j + 1)));
    for (std::size_t k = 0; k < j; ++k) m(k, k) = norm;
    m(j, j) = -norm * static_cast<double>(j);
    generators_.push_back(std::move(m));
  }
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t m = k + 1; m < dim; ++m) {
      ComplexMatrix g(dim, dim);
      g(k, m) = 1.0;
      g(m, k) = 1.0;
      generators_.push_back(std::move(g));
    }
  const Complex i_unit(0.0, 1.0);
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t m = k + 1; m < dim; ++m) {
      ComplexMatrix g(dim, dim);
      g(k, m) = i_unit;
      g(m, k) = -i_unit;
      generators_.push_back(std::move(g));
    }
}

GeneratorSet build_generators(std::size_t dim) { return GeneratorSet(dim); }

StructureConstants::StructureConstants(const GeneratorSet& generators)
    : n_(generators.size()), f_(n_ * n_ * n_, 0.0), g_(n_ * n_ * n_, 0.0) {
  std::vector<ComplexMatrix> products;
  products.reserve(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) products.push_back(generators[i] * generators[j]);

  const Complex four_i(0.0, 4.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      const ComplexMatrix commutator = products[i * n_ + j] - products[j * n_ + i];
      const ComplexMatrix anticommutator = products[i * n_ + j] + products[j * n_ + i];
      for (std::size_t k = 0; k < n_; ++k) {
        double f = (trace_product(commutator, generators[k]) / four_i).real();
        double g = (trace_product(anticommutator, generators[k]) / 4.0).real();
        if (std::abs(f) < kStructureConstantCutoff) f = 0.0;
        if (std::abs(g) < kStructureConstantCutoff) g = 0.0;
        f_[index(i, j, k)] = f;
        g_[index(i, j, k)] = g;
        if (f != 0.0) f_nonzeros_.push_back({i, j, k, f});
        if (g != 0.0) g_nonzeros_.push_back({i, j, k, g});
      }
    }
}

StructureConstants structure_constants(const GeneratorSet& generators) {
  return StructureConstants(generators);
}

SpectrumDecomposition spectrum_decompose(const ComplexMatrix& spectrum, const GeneratorSet& generators) {
  const std::size_t d = generators.dim();
  if (spectrum.rows() != d || spectrum.cols() != d) {
    std::ostringstream msg;
    msg << "spectrum is " << spectrum.rows() << "x" << spectrum.cols() << ", generators act on d=" << d;
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  const double deviation = hermitian_deviation(spectrum);
  if (deviation > kHermitianTolerance) {
    std::ostringstream msg;
    msg << "spectrum deviates from Hermitian by " << deviation;
    throw Error(ErrorKind::NotHermitian, msg.str());
  }

  SpectrumDecomposition out;
  out.beta = spectrum.trace().real() / static_cast<double>(d);
  out.s.resize(generators.size());
  double norm2 = 0.0;
  for (std::size_t k = 0; k < generators.size(); ++k) {
    out.s[k] = 0.5 * trace_product(spectrum, generators[k]).real();
    norm2 += out.s[k] * out.s[k];
  }
  out.alpha = std::sqrt(norm2);
  if (out.alpha < kDegenerateDirectionTolerance) {
    std::ostringstream msg;
    msg << "spectrum is proportional to the identity (alpha = " << out.alpha << ")";
    throw Error(ErrorKind::DegenerateDirection, msg.str());
  }
  return out;
}

ComplexMatrix reconstruct(const SpectrumDecomposition& decomposition, const GeneratorSet& generators) {
  if (decomposition.s.size() != generators.size())
    throw Error(ErrorKind::DimensionMismatch, "coefficient count does not match generator count");
  ComplexMatrix out = ComplexMatrix::identity(generators.dim()) * Complex(decomposition.beta);
  for (std::size_t k = 0; k < generators.size(); ++k) out += generators[k] * Complex(decomposition.s[k]);
  return out;
}

bool check_spectrum_invariance(const ComplexMatrix& spectrum, const ComplexMatrix& unitary,
                               const GeneratorSet& generators) {
  if (!unitary.is_square() || unitary.rows() != generators.dim())
    throw Error(ErrorKind::DimensionMismatch, "unitary does not act on the generator space");
  const ComplexMatrix gram = unitary.adjoint() * unitary;
  const double unitarity = max_abs_diff(gram, ComplexMatrix::identity(generators.dim()));
  if (unitarity > 1e-10) {
    std::ostringstream msg;
    msg << "V^dagger V deviates from identity by " << unitarity;
    throw Error(ErrorKind::ParamOutOfRange, msg.str());
  }
  const SpectrumDecomposition before = spectrum_decompose(spectrum, generators);
  const SpectrumDecomposition after =
      spectrum_decompose(unitary * spectrum * unitary.adjoint(), generators);
  return std::abs(before.beta - after.beta) < 1e-10 && std::abs(before.alpha - after.alpha) < 1e-10;
}

double product_expansion_residual(const GeneratorSet& generators, const StructureConstants& constants) {
  const std::size_t n = generators.size();
  const std::size_t d = generators.dim();
  const ComplexMatrix identity = ComplexMatrix::identity(d);
  const Complex i_unit(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ComplexMatrix expansion(d, d);
      if (i == j) expansion += identity * Complex(2.0 / static_cast<double>(d));
      for (std::size_t k = 0; k < n; ++k) {
        const Complex coefficient = i_unit * constants.f(i, j, k) + constants.g(i, j, k);
        if (coefficient != Complex{}) expansion += generators[k] * coefficient;
      }
      worst = std::max(worst, max_abs_diff(generators[i] * generators[j], expansion));
    }
  return worst;
}

double orthonormality_residual(const GeneratorSet& generators) {
  double worst = 0.0;
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = 0; j < generators.size(); ++j) {
      const double expected = i == j ? 2.0 : 0.0;
      worst = std::max(worst, std::abs(trace_product(generators[i], generators[j]) - expected));
    }
  return worst;
}


const SuAlgebra& su_algebra(std::size_t dim) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<const SuAlgebra>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[dim];
  if (!slot) slot = std::make_unique<const SuAlgebra>(dim);
  return *slot;
}

}  // namespace lqu
