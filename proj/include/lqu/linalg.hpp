#pragma once

// Dense complex matrices and the handful of factorizations the LQU code needs.
// Sizes stay below ~100 rows, so everything is plain row-major storage and
// straightforward loops.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lqu {

using Complex = std::complex<double>;

class ComplexMatrix {
public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  // Throws DimensionMismatch on a size mismatch and ParamOutOfRange on
  // non-finite entries.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix diagonal(std::initializer_list<double> values);
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> entries() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  bool all_finite() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, Complex scalar);
ComplexMatrix operator*(Complex scalar, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Tr(m_0 m_1 ... m_{k-1}). The last product is never materialized; the
// trace of the final pair is contracted directly.
Complex trace_product(std::span<const ComplexMatrix* const> factors);
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c);
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                      const ComplexMatrix& d);

double max_abs(const ComplexMatrix& m) noexcept;
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double hermitian_deviation(const ComplexMatrix& m);
double frobenius_norm(const ComplexMatrix& m) noexcept;

// Real dense matrix, used for W and other real symmetric results.
class RealMatrix {
public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> entries() const noexcept { return data_; }

  ComplexMatrix to_complex() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct HermitianEig {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns match eigenvalues
};

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kPsdClampTolerance = 1e-10;

// Cyclic complex Jacobi. Inputs within kHermitianTolerance of Hermitian are
// symmetrized first; anything further off is NotHermitian.
HermitianEig hermitian_eigendecompose(const ComplexMatrix& m);

// V diag(f(w)) V^dagger for a precomputed decomposition.
ComplexMatrix reconstruct(const HermitianEig& eig, std::span<const double> values);

// Eigenvalues below kSqrtRoundoffFloor times the spectral radius are treated
// as exact zeros; their square roots would otherwise turn 1e-17 roundoff into
// 1e-9 errors on rank-deficient inputs.
inline constexpr double kSqrtRoundoffFloor = 1e-14;

// Throws NotPSD for eigenvalues below -kPsdClampTolerance.
ComplexMatrix sqrt_psd(const ComplexMatrix& m);

}  // namespace lqu
