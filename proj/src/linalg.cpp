#include "lqu/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "lqu/errors.hpp"

namespace lqu {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << what << ": " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

constexpr int kJacobiSweepBudget = 100;
constexpr double kJacobiOffDiagonalTolerance = 1e-14;

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    std::ostringstream msg;
    msg << "expected " << rows_ * cols_ << " entries, got " << data_.size();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  if (!all_finite()) throw Error(ErrorKind::ParamOutOfRange, "matrix has non-finite entries");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = n_rows == 0 ? 0 : rows.begin()->size();
  std::vector<Complex> entries;
  entries.reserve(n_rows * n_cols);
  for (const auto& row : rows) {
    if (row.size() != n_cols) throw Error(ErrorKind::DimensionMismatch, "ragged row list");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return ComplexMatrix(n_rows, n_cols, std::move(entries));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw Error(ErrorKind::DimensionMismatch, "trace of a non-square matrix");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) sum += (*this)(i, i);
  return sum;
}

bool ComplexMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix sum");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix difference");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (auto& z : data_) z *= scalar;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, Complex scalar) { return a *= scalar; }
ComplexMatrix operator*(Complex scalar, ComplexMatrix a) { return a *= scalar; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    std::ostringstream msg;
    msg << "product of " << a.rows() << "x" << a.cols() << " and " << b.rows() << "x" << b.cols();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

Complex trace_product(std::span<const ComplexMatrix* const> factors) {
  if (factors.empty()) throw Error(ErrorKind::DimensionMismatch, "trace of an empty product");
  if (factors.size() == 1) return factors[0]->trace();

  for (std::size_t i = 0; i + 1 < factors.size(); ++i) {
    if (factors[i]->cols() != factors[i + 1]->rows())
      throw Error(ErrorKind::DimensionMismatch, "adjacent factors in trace_product do not chain");
  }
  if (factors.back()->cols() != factors.front()->rows())
    throw Error(ErrorKind::DimensionMismatch, "trace_product factors are not cyclically compatible");

  ComplexMatrix head = *factors[0];
  for (std::size_t i = 1; i + 1 < factors.size(); ++i) head = head * *factors[i];
  const ComplexMatrix& last = *factors.back();

  // Tr(H L) = sum_ij H_ij L_ji
  Complex sum = 0.0;
  for (std::size_t i = 0; i < head.rows(); ++i)
    for (std::size_t j = 0; j < head.cols(); ++j) sum += head(i, j) * last(j, i);
  return sum;
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const ComplexMatrix* f[] = {&a, &b};
  return trace_product(f);
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c) {
  const ComplexMatrix* f[] = {&a, &b, &c};
  return trace_product(f);
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                      const ComplexMatrix& d) {
  const ComplexMatrix* f[] = {&a, &b, &c, &d};
  return trace_product(f);
}

ComplexMatrix RealMatrix::to_complex() const {
  std::vector<Complex> entries(data_.begin(), data_.end());
  return ComplexMatrix(rows_, cols_, std::move(entries));
}

double max_abs(const ComplexMatrix& m) noexcept {
  double best = 0.0;
  for (const auto& z : m.entries()) best = std::max(best, std::abs(z));
  return best;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double best = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    best = std::max(best, std::abs(a.entries()[i] - b.entries()[i]));
  return best;
}

double hermitian_deviation(const ComplexMatrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::DimensionMismatch, "Hermiticity of a non-square matrix");
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      best = std::max(best, std::abs(m(i, j) - std::conj(m(j, i))));
  return best;
}

double frobenius_norm(const ComplexMatrix& m) noexcept {
  double sum = 0.0;
  for (const auto& z : m.entries()) sum += std::norm(z);
  return std::sqrt(sum);
}

HermitianEig hermitian_eigendecompose(const ComplexMatrix& m) {
  const double deviation = hermitian_deviation(m);
  if (deviation > kHermitianTolerance) {
    std::ostringstream msg;
    msg << "max |m - m^dagger| = " << deviation;
    throw Error(ErrorKind::NotHermitian, msg.str());
  }

  const std::size_t n = m.rows();
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
      a(j, i) = std::conj(a(i, j));
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(frobenius_norm(a), std::numeric_limits<double>::min());
  bool converged = false;
  for (int sweep = 0; sweep <= kJacobiSweepBudget; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    off = std::sqrt(2.0 * off);
    if (off < kJacobiOffDiagonalTolerance * scale) {
      converged = true;
      break;
    }
    if (sweep == kJacobiSweepBudget) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex b = a(p, q);
        const double g = std::abs(b);
        if (g == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Below roundoff relative to both diagonal entries the rotation is a no-op.
        if (g < 1e-18 * (std::abs(app) + std::abs(aqq)) && sweep > 3) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const Complex phase_conj = std::conj(b) / g;  // e^{-i phi}
        const double theta = (aqq - app) / (2.0 * g);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] acting on columns (p, q).
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - s * phase_conj * akq;
          a(k, q) = s * akp + c * phase_conj * akq;
          a(p, k) = std::conj(a(k, p));
          a(q, k) = std::conj(a(k, q));
        }
        a(p, p) = app - t * g;
        a(q, q) = aqq + t * g;
        a(p, q) = a(q, p) = 0.0;

        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - s * phase_conj * vkq;
          v(k, q) = s * vkp + c * phase_conj * vkq;
        }
      }
    }
  }
  if (!converged) {
    throw Error(ErrorKind::NoConvergence,
                "Jacobi eigensolver exceeded " + std::to_string(kJacobiSweepBudget) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  HermitianEig out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    out.eigenvalues[col] = a(order[col], order[col]).real();
    for (std::size_t row = 0; row < n; ++row) out.eigenvectors(row, col) = v(row, order[col]);
  }
  return out;
}

ComplexMatrix reconstruct(const HermitianEig& eig, std::span<const double> values) {
  const ComplexMatrix& vecs = eig.eigenvectors;
  const std::size_t n = vecs.rows();
  if (values.size() != vecs.cols())
    throw Error(ErrorKind::DimensionMismatch, "reconstruct: value count does not match eigenvectors");
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Complex sum = 0.0;
      for (std::size_t k = 0; k < values.size(); ++k)
        sum += vecs(i, k) * values[k] * std::conj(vecs(j, k));
      out(i, j) = sum;
      out(j, i) = std::conj(sum);
    }
  for (std::size_t i = 0; i < n; ++i) out(i, i) = out(i, i).real();
  return out;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
  const HermitianEig eig = hermitian_eigendecompose(m);
  double radius = 0.0;
  for (double w : eig.eigenvalues) radius = std::max(radius, std::abs(w));
  const double floor = kSqrtRoundoffFloor * radius;
  std::vector<double> roots(eig.eigenvalues.size());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double w = eig.eigenvalues[i];
    if (w < -kPsdClampTolerance) {
      std::ostringstream msg;
      msg << "eigenvalue " << w << " below -" << kPsdClampTolerance;
      throw Error(ErrorKind::NotPSD, msg.str());
    }
    roots[i] = w > floor ? std::sqrt(w) : 0.0;
  }
  return reconstruct(eig, roots);
}

}  // namespace lqu
