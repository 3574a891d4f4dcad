#include "lqu/lqu_core.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "lqu/errors.hpp"

namespace lqu {

struct DensityMatrix::SqrtCache {
  std::once_flag once;
  ComplexMatrix root;
};

DensityMatrix::DensityMatrix(ComplexMatrix rho, std::size_t dim_a, std::size_t dim_b)
    : dim_a_(dim_a), dim_b_(dim_b), rho_(std::move(rho)), cache_(std::make_shared<SqrtCache>()) {
  if (dim_a < 2 || dim_b < 1) {
    std::ostringstream msg;
    msg << "factor dimensions must satisfy d_a >= 2, d_b >= 1; got " << dim_a << "x" << dim_b;
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  if (!rho_.is_square() || rho_.rows() != dim_a * dim_b) {
    std::ostringstream msg;
    msg << "matrix is " << rho_.rows() << "x" << rho_.cols() << " but d_a * d_b = " << dim_a * dim_b;
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  if (!rho_.all_finite()) throw Error(ErrorKind::ParamOutOfRange, "matrix has non-finite entries");

  const double hermitian = hermitian_deviation(rho_);
  if (hermitian > kHermitianTolerance) {
    std::ostringstream msg;
    msg << "Hermiticity check failed: max |rho - rho^dagger| = " << hermitian;
    throw Error(ErrorKind::NotHermitian, msg.str());
  }
  const double trace_error = std::abs(rho_.trace() - 1.0);
  if (trace_error > kHermitianTolerance) {
    std::ostringstream msg;
    msg << "trace check failed: |Tr rho - 1| = " << trace_error;
    throw Error(ErrorKind::TraceNotOne, msg.str());
  }
  const HermitianEig eig = hermitian_eigendecompose(rho_);
  if (eig.eigenvalues.front() < -kPsdClampTolerance) {
    std::ostringstream msg;
    msg << "positivity check failed: minimum eigenvalue " << eig.eigenvalues.front();
    throw Error(ErrorKind::NotPSD, msg.str());
  }
}

const ComplexMatrix& DensityMatrix::sqrt() const {
  std::call_once(cache_->once, [this] { cache_->root = sqrt_psd(rho_); });
  return cache_->root;
}

ComplexMatrix DensityMatrix::reduced_a() const {
  ComplexMatrix out(dim_a_, dim_a_);
  for (std::size_t a = 0; a < dim_a_; ++a)
    for (std::size_t a2 = 0; a2 < dim_a_; ++a2) {
      Complex sum = 0.0;
      for (std::size_t b = 0; b < dim_b_; ++b) sum += rho_(a * dim_b_ + b, a2 * dim_b_ + b);
      out(a, a2) = sum;
    }
  return out;
}

double skew_information(const DensityMatrix& rho, const ComplexMatrix& observable) {
  if (!observable.is_square() || observable.rows() != rho.dim()) {
    std::ostringstream msg;
    msg << "observable is " << observable.rows() << "x" << observable.cols() << ", state dimension is "
        << rho.dim();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  const double deviation = hermitian_deviation(observable);
  if (deviation > kHermitianTolerance) {
    std::ostringstream msg;
    msg << "observable deviates from Hermitian by " << deviation;
    throw Error(ErrorKind::NotHermitian, msg.str());
  }
  const ComplexMatrix rho_k = rho.matrix() * observable;
  const ComplexMatrix root_k = rho.sqrt() * observable;
  const double value = (trace_product(rho_k, observable) - trace_product(root_k, root_k)).real();
  if (value < 0.0 && value > -kSkewClampTolerance) return 0.0;
  return value;
}

namespace {

void require_generator_dim(const DensityMatrix& rho, const GeneratorSet& generators) {
  if (generators.dim() != rho.dim_a()) {
    std::ostringstream msg;
    msg << "generators act on d=" << generators.dim() << " but subsystem A has d=" << rho.dim_a();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

// m * (local (x) I_{d_b})
ComplexMatrix times_local(const ComplexMatrix& m, const ComplexMatrix& local, std::size_t dim_b) {
  const std::size_t dim_a = local.rows();
  const std::size_t n = m.rows();
  ComplexMatrix out(n, n);
  for (std::size_t row = 0; row < n; ++row)
    for (std::size_t c = 0; c < dim_a; ++c)
      for (std::size_t a = 0; a < dim_a; ++a) {
        const Complex coefficient = local(c, a);
        if (coefficient == Complex{}) continue;
        for (std::size_t b = 0; b < dim_b; ++b) out(row, a * dim_b + b) += m(row, c * dim_b + b) * coefficient;
      }
  return out;
}

double largest_eigenvalue(const RealMatrix& m) {
  return hermitian_eigendecompose(m.to_complex()).eigenvalues.back();
}

}  // namespace

std::vector<double> l_vector(const DensityMatrix& rho, const GeneratorSet& generators) {
  require_generator_dim(rho, generators);
  const ComplexMatrix reduced = rho.reduced_a();
  std::vector<double> l(generators.size());
  for (std::size_t k = 0; k < generators.size(); ++k) l[k] = trace_product(reduced, generators[k]).real();
  return l;
}

WMatrix w_matrix(const DensityMatrix& rho, const GeneratorSet& generators,
                 const StructureConstants& constants) {
  require_generator_dim(rho, generators);
  if (constants.size() != generators.size())
    throw Error(ErrorKind::DimensionMismatch, "structure constants do not match the generator set");

  const std::size_t n = generators.size();
  std::vector<ComplexMatrix> root_times_generator;
  root_times_generator.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    root_times_generator.push_back(times_local(rho.sqrt(), generators[i], rho.dim_b()));

  WMatrix out{RealMatrix(n, n), l_vector(rho, generators)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out.w(i, j) = trace_product(root_times_generator[i], root_times_generator[j]).real();
  for (const auto& entry : constants.g_nonzeros()) out.w(entry.i, entry.j) -= entry.value * out.l[entry.k];

  double asymmetry = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) asymmetry = std::max(asymmetry, std::abs(out.w(i, j) - out.w(j, i)));
  if (asymmetry > kHermitianTolerance) {
    std::ostringstream msg;
    msg << "W matrix asymmetry " << asymmetry << " exceeds " << kHermitianTolerance;
    throw Error(ErrorKind::NotHermitian, msg.str());
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double mean = 0.5 * (out.w(i, j) + out.w(j, i));
      out.w(i, j) = out.w(j, i) = mean;
    }
  return out;
}

LowerBoundReport lower_bound(const DensityMatrix& rho, const ComplexMatrix& spectrum) {
  return lower_bound(rho, spectrum, su_algebra(rho.dim_a()));
}

LowerBoundReport lower_bound(const DensityMatrix& rho, const ComplexMatrix& spectrum,
                             const SuAlgebra& algebra) {
  const SpectrumDecomposition decomposition = spectrum_decompose(spectrum, algebra.generators);
  WMatrix wl = w_matrix(rho, algebra.generators, algebra.constants);

  LowerBoundReport report;
  report.lambda_max = largest_eigenvalue(wl.w);
  report.w = std::move(wl.w);
  report.l = std::move(wl.l);
  report.alpha = decomposition.alpha;
  report.beta = decomposition.beta;
  report.bound = report.alpha * report.alpha *
                 (2.0 / static_cast<double>(rho.dim_a()) - report.lambda_max);
  report.bound_clamped = std::max(report.bound, 0.0);
  return report;
}

double closed_form_2xd(const DensityMatrix& rho) {
  if (rho.dim_a() != 2) {
    throw Error(ErrorKind::WrongDimension,
                "closed form needs a qubit on A, got d_a = " + std::to_string(rho.dim_a()));
  }
  const GeneratorSet& paulis = su_algebra(2).generators;
  RealMatrix w(3, 3);
  std::vector<ComplexMatrix> products;
  for (std::size_t i = 0; i < 3; ++i) products.push_back(times_local(rho.sqrt(), paulis[i], rho.dim_b()));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) w(i, j) = trace_product(products[i], products[j]).real();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) w(i, j) = w(j, i) = 0.5 * (w(i, j) + w(j, i));
  return 1.0 - largest_eigenvalue(w);
}

}  // namespace lqu
