#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lqu/errors.hpp"
#include "lqu/lqu_core.hpp"
#include "lqu/states.hpp"
#include "support/random_states.hpp"

using namespace lqu;
using lqu::testing::Rng;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::ParseError;
}

ComplexMatrix direction_observable(const std::vector<double>& s, const GeneratorSet& g, double scale) {
  ComplexMatrix k(g.dim(), g.dim());
  for (std::size_t i = 0; i < s.size(); ++i) k += g[i] * Complex(scale * s[i]);
  return k;
}

DensityMatrix pure_state(const ComplexMatrix& column, std::size_t dim_a, std::size_t dim_b) {
  const std::size_t n = column.rows();
  ComplexMatrix rho(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rho(i, j) = column(i, 0) * std::conj(column(j, 0));
  return DensityMatrix(std::move(rho), dim_a, dim_b);
}

}  // namespace

TEST_SUITE("lqu_core") {

TEST_CASE("density matrix validation names the failing check") {
  CHECK(kind_of([] { DensityMatrix(ComplexMatrix::identity(6) * Complex(1.0 / 6.0), 2, 2); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(kind_of([] { DensityMatrix(ComplexMatrix::identity(4) * Complex(0.5), 2, 2); }) == ErrorKind::TraceNotOne);
  CHECK(kind_of([] { DensityMatrix(ComplexMatrix::diagonal({0.6, 0.6, -0.2, 0.0}), 2, 2); }) == ErrorKind::NotPSD);
  CHECK(kind_of([] {
          ComplexMatrix m = ComplexMatrix::identity(4) * Complex(0.25);
          m(0, 1) = 0.1;
          DensityMatrix(m, 2, 2);
        }) == ErrorKind::NotHermitian);
  CHECK(kind_of([] { DensityMatrix(ComplexMatrix::identity(2) * Complex(0.5), 1, 2); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("reduced state of a product") {
  Rng rng(4);
  const ComplexMatrix a = lqu::testing::random_density_matrix(3, rng);
  const ComplexMatrix b = lqu::testing::random_density_matrix(2, rng);
  const DensityMatrix rho(kron(a, b), 3, 2);
  CHECK(max_abs_diff(rho.reduced_a(), a) < 1e-14);
  CHECK(max_abs_diff(rho.sqrt() * rho.sqrt(), rho.matrix()) < 1e-12);
}

TEST_CASE("skew information vanishes for commuting pairs") {
  const DensityMatrix diag(ComplexMatrix::diagonal({0.1, 0.2, 0.3, 0.4}), 2, 2);
  CHECK(std::abs(skew_information(diag, ComplexMatrix::diagonal({1.0, -2.0, 0.5, 3.0}))) < 1e-14);

  Rng rng(17);
  const DensityMatrix mixed(ComplexMatrix::identity(6) * Complex(1.0 / 6.0), 2, 3);
  CHECK(std::abs(skew_information(mixed, lqu::testing::random_hermitian(6, rng))) < 1e-12);
}

TEST_CASE("skew information of a pure state is the variance") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix psi = lqu::testing::ginibre(6, 1, rng);
    psi *= 1.0 / frobenius_norm(psi);
    const DensityMatrix rho = pure_state(psi, 3, 2);
    const ComplexMatrix k = lqu::testing::random_hermitian(6, rng);
    const double mean = trace_product(rho.matrix(), k).real();
    const double variance = trace_product(rho.matrix(), k, k).real() - mean * mean;
    CHECK(std::abs(skew_information(rho, k) - variance) < 1e-9);
  }
}

TEST_CASE("skew information rejects a bad observable") {
  const DensityMatrix rho(ComplexMatrix::identity(4) * Complex(0.25), 2, 2);
  CHECK(kind_of([&] { skew_information(rho, ComplexMatrix::identity(3)); }) == ErrorKind::DimensionMismatch);
  CHECK(kind_of([&] { skew_information(rho, ComplexMatrix::from_rows({{0.0, 1.0, 0.0, 0.0},
                                                                       {0.0, 0.0, 0.0, 0.0},
                                                                       {0.0, 0.0, 0.0, 0.0},
                                                                       {0.0, 0.0, 0.0, 0.0}})); }) ==
        ErrorKind::NotHermitian);
}

TEST_CASE("L vector examples") {
  const GeneratorSet g3(3);
  for (double p : {0.0, 0.3, 1.0}) {
    for (double x : l_vector(werner(p), g3)) CHECK(std::abs(x) < 1e-14);
  }
  const DensityMatrix mixed(ComplexMatrix::identity(6) * Complex(1.0 / 6.0), 3, 2);
  for (double x : l_vector(mixed, g3)) CHECK(std::abs(x) < 1e-15);

  const DensityMatrix up(kron(ComplexMatrix::diagonal({1.0, 0.0}), ComplexMatrix::identity(2) * Complex(0.5)), 2, 2);
  const std::vector<double> l = l_vector(up, GeneratorSet(2));
  CHECK(l[0] == doctest::Approx(1.0));
  CHECK(std::abs(l[1]) < 1e-15);
  CHECK(std::abs(l[2]) < 1e-15);
}

TEST_CASE("W matrix examples") {
  const SuAlgebra& q = su_algebra(2);
  const DensityMatrix product(ComplexMatrix::diagonal({1.0, 0.0, 0.0, 0.0}), 2, 2);
  const WMatrix w = w_matrix(product, q.generators, q.constants);
  CHECK(w.w(0, 0) == doctest::Approx(1.0));

  for (std::size_t d : {2u, 3u, 4u}) {
    const SuAlgebra& alg = su_algebra(d);
    const double n = static_cast<double>(d * 2);
    const DensityMatrix mixed(ComplexMatrix::identity(d * 2) * Complex(1.0 / n), d, 2);
    const WMatrix wm = w_matrix(mixed, alg.generators, alg.constants);
    for (std::size_t i = 0; i < wm.w.rows(); ++i)
      for (std::size_t j = 0; j < wm.w.cols(); ++j)
        CHECK(std::abs(wm.w(i, j) - (i == j ? 2.0 / static_cast<double>(d) : 0.0)) < 1e-13);
  }
}

TEST_CASE("qubit W is the bare correlation term") {
  Rng rng(3);
  const SuAlgebra& q = su_algebra(2);
  const DensityMatrix rho = lqu::testing::random_state(2, 3, rng);
  const WMatrix w = w_matrix(rho, q.generators, q.constants);
  const ComplexMatrix id = ComplexMatrix::identity(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const double first =
          trace_product(rho.sqrt(), kron(q.generators[i], id), rho.sqrt(), kron(q.generators[j], id)).real();
      CHECK(std::abs(w.w(i, j) - first) < 1e-12);
    }
}

TEST_CASE("Werner bound is zero at p = 0 and grows with p") {
  const ComplexMatrix lambda = ComplexMatrix::diagonal({1.0, -1.0, 0.0});
  CHECK(std::abs(lower_bound(werner(0.0), lambda).bound) < 1e-9);
  double previous = -1.0;
  for (int i = 0; i <= 20; ++i) {
    const double b = lower_bound(werner(i / 20.0), lambda).bound;
    CHECK(b >= previous - 1e-12);
    previous = b;
  }
  CHECK(previous == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("product states give a nonpositive bound") {
  Rng rng(44);
  const ComplexMatrix lambda = ComplexMatrix::diagonal({1.0, -1.0, 0.0});
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho(kron(lqu::testing::random_density_matrix(3, rng), lqu::testing::random_density_matrix(2, rng)),
                            3, 2);
    const LowerBoundReport report = lower_bound(rho, lambda);
    CHECK(report.bound <= 1e-6);
    CHECK(report.bound_clamped == std::max(report.bound, 0.0));
  }
}

TEST_CASE("lower bound report fields") {
  const LowerBoundReport report = lower_bound(horodecki42(0.5), ComplexMatrix::diagonal({3.0, 1.0, -1.0, -3.0}));
  CHECK(report.w.rows() == 15);
  CHECK(report.l.size() == 15);
  CHECK(report.alpha == doctest::Approx(std::sqrt(10.0)));
  CHECK(std::abs(report.beta) < 1e-15);
  CHECK(report.bound == doctest::Approx(10.0 * (0.5 - report.lambda_max)));
}

TEST_CASE("lower bound rejects mismatched spectra") {
  CHECK(kind_of([] { lower_bound(werner(0.5), ComplexMatrix::diagonal({1.0, -1.0})); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(kind_of([] { lower_bound(werner(0.5), ComplexMatrix::identity(3)); }) == ErrorKind::DegenerateDirection);
}

TEST_CASE("qubit closed form") {
  const DensityMatrix mixed(ComplexMatrix::identity(4) * Complex(0.25), 2, 2);
  CHECK(std::abs(closed_form_2xd(mixed)) < 1e-14);

  ComplexMatrix bell(4, 4);
  for (std::size_t i : {0u, 3u})
    for (std::size_t j : {0u, 3u}) bell(i, j) = 0.5;
  const DensityMatrix bell_state(bell, 2, 2);
  // Brute force over a Bloch-sphere grid of unit directions.
  const GeneratorSet g(2);
  double best = 1e9;
  for (int a = 0; a <= 40; ++a)
    for (int b = 0; b < 80; ++b) {
      const double theta = std::numbers::pi * a / 40.0;
      const double phi = 2.0 * std::numbers::pi * b / 80.0;
      const std::vector<double> s{std::cos(theta), std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi)};
      const ComplexMatrix k = kron(direction_observable(s, g, 1.0), ComplexMatrix::identity(2));
      best = std::min(best, skew_information(bell_state, k));
    }
  CHECK(best == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(closed_form_2xd(bell_state) == doctest::Approx(best).epsilon(1e-10));

  CHECK(kind_of([] { closed_form_2xd(werner(0.5)); }) == ErrorKind::WrongDimension);
}

TEST_CASE("closed form agrees with the general bound for qubits") {
  Rng rng(2);
  const ComplexMatrix sigma_z = ComplexMatrix::diagonal({1.0, -1.0});
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix rho = lqu::testing::random_state(2, 3, rng);
    CHECK(std::abs(closed_form_2xd(rho) - lower_bound(rho, sigma_z).bound) < 1e-10);
  }
}

TEST_CASE("the bound is the minimum of a quadratic form") {
  Rng rng(77);
  const SuAlgebra& alg = su_algebra(3);
  const double alpha = 1.7;
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho = lqu::testing::random_state(3, 3, rng);
    const WMatrix w = w_matrix(rho, alg.generators, alg.constants);
    for (int dir = 0; dir < 10; ++dir) {
      const std::vector<double> s = lqu::testing::random_unit_vector(8, rng);
      double form = 0.0;
      for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) form += s[i] * w.w(i, j) * s[j];
      const double predicted = alpha * alpha * (2.0 / 3.0 - form);
      const ComplexMatrix k = kron(direction_observable(s, alg.generators, alpha), ComplexMatrix::identity(3));
      CHECK(std::abs(predicted - skew_information(rho, k)) < 1e-9);
    }
  }
}

TEST_CASE("the bound is invariant under local unitaries") {
  Rng rng(55);
  const ComplexMatrix lambda = ComplexMatrix::diagonal({1.0, -1.0, 0.0});
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho = lqu::testing::random_state(3, 2, rng);
    const ComplexMatrix u = kron(lqu::testing::random_unitary(3, rng), lqu::testing::random_unitary(2, rng));
    const DensityMatrix rotated(u * rho.matrix() * u.adjoint(), 3, 2);
    CHECK(std::abs(lower_bound(rho, lambda).bound - lower_bound(rotated, lambda).bound) < 1e-8);
  }
}

}  // TEST_SUITE
