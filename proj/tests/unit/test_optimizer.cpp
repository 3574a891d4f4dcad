#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lqu/errors.hpp"
#include "lqu/optimizer.hpp"
#include "lqu/states.hpp"
#include "support/random_states.hpp"

using namespace lqu;
using lqu::testing::Rng;

namespace {

// Determinant by Gaussian elimination with partial pivoting.
Complex determinant(ComplexMatrix m) {
  const std::size_t n = m.rows();
  Complex det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(pivot, c), m(col, c));
      det = -det;
    }
    det *= m(col, col);
    if (std::abs(m(col, col)) == 0.0) return 0.0;
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex factor = m(r, col) / m(col, col);
      for (std::size_t c = col; c < n; ++c) m(r, c) -= factor * m(col, c);
    }
  }
  return det;
}

std::vector<double> random_params(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> uniform(-std::numbers::pi, std::numbers::pi);
  std::vector<double> theta(n);
  for (auto& x : theta) x = uniform(rng);
  return theta;
}

ComplexMatrix special_unitary(std::size_t d, Rng& rng) {
  ComplexMatrix u = lqu::testing::random_unitary(d, rng);
  const Complex det = determinant(u);
  u *= std::pow(det, -1.0 / static_cast<double>(d));
  return u;
}

GAConfig seeded(std::uint64_t seed) {
  GAConfig config;
  config.seed = seed;
  return config;
}

}  // namespace

TEST_SUITE("optimizer") {

TEST_CASE("zero parameters give the identity") {
  const GeneratorSet g(3);
  const std::vector<double> zero(8, 0.0);
  CHECK(max_abs_diff(unitary_from_params(zero, g), ComplexMatrix::identity(3)) < 1e-15);
  const ComplexMatrix lambda = ComplexMatrix::diagonal({1.0, -1.0, 0.0});
  CHECK(max_abs_diff(observable_from_params(zero, lambda, g), lambda) < 1e-15);
}

TEST_CASE("diagonal exponential for a qubit") {
  const GeneratorSet g(2);
  const std::vector<double> theta{std::numbers::pi / 2.0, 0.0, 0.0};
  const ComplexMatrix v = unitary_from_params(theta, g);
  const Complex i(0.0, 1.0);
  CHECK(std::abs(v(0, 0) - std::exp(i * (std::numbers::pi / 2.0))) < 1e-14);
  CHECK(std::abs(v(1, 1) - std::exp(-i * (std::numbers::pi / 2.0))) < 1e-14);
  CHECK(std::abs(v(0, 1)) < 1e-15);
}

TEST_CASE("parametrized matrices are special unitary") {
  Rng rng(9);
  const GeneratorSet g(4);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix v = unitary_from_params(random_params(15, rng), g);
    CHECK(max_abs_diff(v.adjoint() * v, ComplexMatrix::identity(4)) < 1e-10);
    const Complex det = determinant(v);
    CHECK(std::abs(std::abs(det) - 1.0) < 1e-10);
    CHECK(std::abs(det - Complex(1.0)) < 1e-10);
  }
  CHECK_THROWS_AS(unitary_from_params(std::vector<double>(3, 0.0), g), Error);
}

TEST_CASE("observables keep the fixed spectrum") {
  Rng rng(10);
  const GeneratorSet g(4);
  const ComplexMatrix lambda = ComplexMatrix::diagonal({3.0, 1.0, -1.0, -3.0});
  const SpectrumDecomposition reference = spectrum_decompose(lambda, g);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix k = observable_from_params(random_params(15, rng), lambda, g);
    const std::vector<double> w = hermitian_eigendecompose(k).eigenvalues;
    const std::vector<double> expected{-3.0, -1.0, 1.0, 3.0};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(w[i] - expected[i]) < 1e-10);
    const SpectrumDecomposition dec = spectrum_decompose(k, g);
    CHECK(std::abs(dec.beta - reference.beta) < 1e-10);
    CHECK(std::abs(dec.alpha - reference.alpha) < 1e-10);
  }
}

TEST_CASE("principal logarithm inverts the exponential map") {
  Rng rng(12);
  for (std::size_t d : {2u, 3u, 4u}) {
    const GeneratorSet g(d);
    for (int trial = 0; trial < 10; ++trial) {
      const ComplexMatrix v = special_unitary(d, rng);
      const std::vector<double> theta = params_from_unitary(v, g);
      CHECK(theta.size() == d * d - 1);
      CHECK(max_abs_diff(unitary_from_params(theta, g), v) < 1e-9);
    }
  }
}

TEST_CASE("local skew form matches the full skew information") {
  Rng rng(13);
  for (auto [da, db] : {std::pair<std::size_t, std::size_t>{3, 3}, {4, 2}, {2, 3}}) {
    const DensityMatrix rho = lqu::testing::random_state(da, db, rng);
    const LocalSkewForm form(rho);
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexMatrix k = lqu::testing::random_hermitian(da, rng);
      const double full = skew_information(rho, kron(k, ComplexMatrix::identity(db)));
      CHECK(std::abs(form(k) - full) < 1e-12);

      // Directional derivative against a central difference.
      const ComplexMatrix dk = lqu::testing::random_hermitian(da, rng);
      const double h = 1e-6;
      const double numeric = (form(k + dk * Complex(h)) - form(k - dk * Complex(h))) / (2.0 * h);
      const double analytic = trace_product(form.gradient(k), dk).real();
      CHECK(std::abs(numeric - analytic) < 1e-6);
    }
  }
}

TEST_CASE("configuration validation") {
  GAConfig config;
  CHECK_NOTHROW(config.validate());
  config.population_size = 1;
  CHECK_THROWS_AS(config.validate(), Error);
  config = GAConfig{};
  config.crossover_rate = 1.5;
  CHECK_THROWS_AS(config.validate(), Error);
  config = GAConfig{};
  config.tournament_size = 0;
  CHECK_THROWS_AS(config.validate(), Error);
}

TEST_CASE("degenerate spectra are rejected") {
  try {
    optimize_lqu(werner(0.5), ComplexMatrix::diagonal({1.0, 1.0, 0.0}), seeded(1));
    FAIL("expected DegenerateSpectrum");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateSpectrum);
  }
  try {
    optimize_lqu(werner(0.5), ComplexMatrix::diagonal({1.0, -1.0}), seeded(1));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("classical-quantum states have zero uncertainty") {
  Rng rng(14);
  const ComplexMatrix lambda = ComplexMatrix::diagonal({1.0, -1.0, 0.0});
  for (int trial = 0; trial < 5; ++trial) {
    const DensityMatrix rho = lqu::testing::random_classical_quantum(3, 2, rng);
    const OptimizeResult result = optimize_lqu(rho, lambda, seeded(static_cast<std::uint64_t>(trial)));
    CHECK(result.value < 1e-6);
    CHECK(lower_bound(rho, lambda).bound <= 1e-6);
  }
}

TEST_CASE("Werner states are tight") {
  const ComplexMatrix lambda = ComplexMatrix::diagonal({1.0, -1.0, 0.0});
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const OptimizeResult result = optimize_lqu(werner(p), lambda, seeded(3));
    CHECK(std::abs(result.value - lower_bound(werner(p), lambda).bound) < 1e-4);
  }
}

TEST_CASE("result fields are consistent") {
  Rng rng(15);
  const DensityMatrix rho = lqu::testing::random_state(3, 2, rng);
  const ComplexMatrix lambda = ComplexMatrix::diagonal({1.0, -1.0, 0.0});
  const OptimizeResult result = optimize_lqu(rho, lambda, seeded(4));
  const GeneratorSet& g = su_algebra(3).generators;
  CHECK(result.best_params.size() == 8);
  CHECK(max_abs_diff(observable_from_params(result.best_params, lambda, g), result.observable) < 1e-12);
  CHECK(std::abs(skew_information(rho, kron(result.observable, ComplexMatrix::identity(2))) - result.value) < 1e-12);
  CHECK(!result.history.empty());
  CHECK(std::is_sorted(result.history.rbegin(), result.history.rend()));
  CHECK(result.history.back() == doctest::Approx(result.value).epsilon(1e-9));
  CHECK(result.evaluations > 0);
}

TEST_CASE("optimized value never undercuts the bound") {
  Rng rng(16);
  const ComplexMatrix l3 = ComplexMatrix::diagonal({1.0, -1.0, 0.0});
  for (int trial = 0; trial < 8; ++trial) {
    const DensityMatrix rho = lqu::testing::random_state(3, 3, rng);
    CHECK(optimize_lqu(rho, l3, seeded(5)).value >= lower_bound(rho, l3).bound - 1e-6);
  }
  const ComplexMatrix l4 = ComplexMatrix::diagonal({3.0, 1.0, -1.0, -3.0});
  for (int trial = 0; trial < 3; ++trial) {
    const DensityMatrix rho = lqu::testing::random_state(4, 2, rng);
    CHECK(optimize_lqu(rho, l4, seeded(6)).value >= lower_bound(rho, l4).bound - 1e-6);
  }
}

TEST_CASE("same seed gives bit-identical results") {
  const DensityMatrix rho = horodecki33(0.3);
  const ComplexMatrix lambda = ComplexMatrix::diagonal({1.0, -1.0, 0.0});
  const OptimizeResult a = optimize_lqu(rho, lambda, seeded(42));
  const OptimizeResult b = optimize_lqu(rho, lambda, seeded(42));
  CHECK(a.value == b.value);
  CHECK(a.history == b.history);
  CHECK(a.best_params == b.best_params);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("unitaries on B do not change the optimum") {
  Rng rng(18);
  const ComplexMatrix lambda = ComplexMatrix::diagonal({1.0, -1.0, 0.0});
  for (int trial = 0; trial < 3; ++trial) {
    const DensityMatrix rho = lqu::testing::random_state(3, 3, rng);
    const ComplexMatrix u = kron(ComplexMatrix::identity(3), lqu::testing::random_unitary(3, rng));
    const DensityMatrix rotated(u * rho.matrix() * u.adjoint(), 3, 3);
    CHECK(std::abs(optimize_lqu(rho, lambda, seeded(7)).value - optimize_lqu(rotated, lambda, seeded(8)).value) < 2e-4);
  }
}

TEST_CASE("dense random search never beats the optimizer") {
  Rng rng(19);
  const DensityMatrix rho = horodecki33(0.4);
  const ComplexMatrix lambda = ComplexMatrix::diagonal({1.0, -1.0, 0.0});
  const LocalSkewForm form(rho);
  double best = 1e9;
  for (int sample = 0; sample < 1000000; ++sample) {
    const ComplexMatrix v = lqu::testing::random_unitary(3, rng);
    best = std::min(best, form(v * lambda * v.adjoint()));
  }
  const double optimized = optimize_lqu(rho, lambda, seeded(9)).value;
  CHECK(optimized <= best + 1e-9);
  CHECK(best - optimized < 1e-2);
}

}  // TEST_SUITE
