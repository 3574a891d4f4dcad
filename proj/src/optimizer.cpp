#include "lqu/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "lqu/errors.hpp"

namespace lqu {

void GAConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::ParamOutOfRange, "GA config: " + what); };
  if (population_size < 2) fail("population_size must be at least 2");
  if (generations < 1) fail("generations must be positive");
  if (tournament_size < 1 || tournament_size > population_size)
    fail("tournament_size must lie in [1, population_size]");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) fail("crossover_rate outside [0, 1]");
  if (!(mutation_sigma > 0.0) || !std::isfinite(mutation_sigma)) fail("mutation_sigma must be positive");
  if (!(stall_tolerance >= 0.0)) fail("stall_tolerance must be nonnegative");
  if (stall_generations < 1) fail("stall_generations must be positive");
}

ComplexMatrix unitary_from_params(std::span<const double> theta, const GeneratorSet& generators) {
  if (theta.size() != generators.size()) {
    std::ostringstream msg;
    msg << "expected " << generators.size() << " parameters for SU(" << generators.dim() << "), got "
        << theta.size();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  const std::size_t d = generators.dim();
  ComplexMatrix h(d, d);
  for (std::size_t k = 0; k < theta.size(); ++k) {
    if (theta[k] == 0.0) continue;
    h += generators[k] * Complex(theta[k]);
  }
  const HermitianEig eig = hermitian_eigendecompose(h);
  const ComplexMatrix& u = eig.eigenvectors;
  ComplexMatrix v(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Complex sum = 0.0;
      for (std::size_t k = 0; k < d; ++k)
        sum += u(i, k) * std::polar(1.0, eig.eigenvalues[k]) * std::conj(u(j, k));
      v(i, j) = sum;
    }
  return v;
}

ComplexMatrix observable_from_params(std::span<const double> theta, const ComplexMatrix& spectrum,
                                     const GeneratorSet& generators) {
  if (spectrum.rows() != generators.dim() || spectrum.cols() != generators.dim())
    throw Error(ErrorKind::DimensionMismatch, "spectrum does not match the generator dimension");
  const ComplexMatrix v = unitary_from_params(theta, generators);
  ComplexMatrix k = v * spectrum * v.adjoint();
  for (std::size_t i = 0; i < k.rows(); ++i) {
    k(i, i) = k(i, i).real();
    for (std::size_t j = i + 1; j < k.cols(); ++j) {
      const Complex mean = 0.5 * (k(i, j) + std::conj(k(j, i)));
      k(i, j) = mean;
      k(j, i) = std::conj(mean);
    }
  }
  return k;
}

LocalSkewForm::LocalSkewForm(const DensityMatrix& rho)
    : dim_a_(rho.dim_a()), reduced_(rho.reduced_a()), contraction_(dim_a_ * dim_a_ * dim_a_ * dim_a_) {
  const ComplexMatrix& root = rho.sqrt();
  const std::size_t da = dim_a_;
  const std::size_t db = rho.dim_b();
  // T_{ab,cd} = sum_{x,y} S_{(d,y),(a,x)} S_{(b,x),(c,y)}
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < da; ++b)
      for (std::size_t c = 0; c < da; ++c)
        for (std::size_t d = 0; d < da; ++d) {
          Complex sum = 0.0;
          for (std::size_t x = 0; x < db; ++x)
            for (std::size_t y = 0; y < db; ++y) sum += root(d * db + y, a * db + x) * root(b * db + x, c * db + y);
          contraction_[((a * da + b) * da + c) * da + d] = sum;
        }
}

double LocalSkewForm::operator()(const ComplexMatrix& k) const {
  const std::size_t da = dim_a_;
  Complex first = 0.0;
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < da; ++b) {
      Complex k2 = 0.0;
      for (std::size_t c = 0; c < da; ++c) k2 += k(a, c) * k(c, b);
      first += reduced_(b, a) * k2;
    }
  Complex second = 0.0;
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < da; ++b) {
      const Complex kab = k(a, b);
      const Complex* row = &contraction_[(a * da + b) * da * da];
      Complex inner = 0.0;
      for (std::size_t cd = 0; cd < da * da; ++cd) inner += k.entries()[cd] * row[cd];
      second += kab * inner;
    }
  return (first - second).real();
}

ComplexMatrix LocalSkewForm::gradient(const ComplexMatrix& k) const {
  const std::size_t da = dim_a_;
  ComplexMatrix g = k * reduced_ + reduced_ * k;
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < da; ++b) {
      const Complex* row = &contraction_[(a * da + b) * da * da];
      Complex m = 0.0;
      for (std::size_t cd = 0; cd < da * da; ++cd) m += row[cd] * k.entries()[cd];
      g(b, a) -= 2.0 * m;
    }
  return g;
}

std::vector<double> params_from_unitary(const ComplexMatrix& unitary, const GeneratorSet& generators) {
  const std::size_t d = generators.dim();
  if (unitary.rows() != d || unitary.cols() != d)
    throw Error(ErrorKind::DimensionMismatch, "unitary does not act on the generator space");
  const ComplexMatrix adjoint = unitary.adjoint();
  const ComplexMatrix real_part = (unitary + adjoint) * Complex(0.5);
  const ComplexMatrix imag_part = (unitary - adjoint) * Complex(0.0, -0.5);

  // Both Hermitian parts commute; a generic combination shares eigenvectors
  // with V unless two eigenphases collide on it, which the check below catches.
  for (double mix : {0.5772156649, 1.6180339887, -2.7182818284, 0.3183098862}) {
    const HermitianEig eig = hermitian_eigendecompose(real_part + imag_part * Complex(mix));
    const ComplexMatrix& u = eig.eigenvectors;
    const ComplexMatrix diagonalized = u.adjoint() * unitary * u;
    double off = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (i != j) off = std::max(off, std::abs(diagonalized(i, j)));
    if (off > 1e-9) continue;

    std::vector<double> phases(d);
    double total = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      phases[i] = std::arg(diagonalized(i, i));
      total += phases[i];
    }
    // det V = 1 makes the phase sum a multiple of 2 pi; move whole turns off
    // the phases farthest out on that side.
    auto turns = std::lround(total / (2.0 * std::numbers::pi));
    std::vector<std::size_t> by_phase(d);
    std::iota(by_phase.begin(), by_phase.end(), std::size_t{0});
    std::sort(by_phase.begin(), by_phase.end(), [&](std::size_t x, std::size_t y) { return phases[x] < phases[y]; });
    for (long t = 0; t < std::labs(turns); ++t) {
      if (turns > 0) phases[by_phase[d - 1 - static_cast<std::size_t>(t) % d]] -= 2.0 * std::numbers::pi;
      else phases[by_phase[static_cast<std::size_t>(t) % d]] += 2.0 * std::numbers::pi;
    }
    const ComplexMatrix h = reconstruct(eig, phases);
    std::vector<double> theta(generators.size());
    for (std::size_t k = 0; k < theta.size(); ++k) theta[k] = 0.5 * trace_product(h, generators[k]).real();
    return theta;
  }
  throw Error(ErrorKind::NoConvergence, "could not diagonalize the unitary for its logarithm");
}

namespace {

constexpr double kPi = std::numbers::pi;

double reflect_into_box(double x) {
  // Reflect at +-pi until inside; mutations are small compared to the box.
  while (x > kPi || x < -kPi) {
    if (x > kPi) x = 2.0 * kPi - x;
    if (x < -kPi) x = -2.0 * kPi - x;
  }
  return x;
}

void require_nondegenerate(const ComplexMatrix& spectrum) {
  const HermitianEig eig = hermitian_eigendecompose(spectrum);
  for (std::size_t i = 0; i + 1 < eig.eigenvalues.size(); ++i) {
    const double gap = eig.eigenvalues[i + 1] - eig.eigenvalues[i];
    if (gap <= kDegenerateSpectrumTolerance) {
      std::ostringstream msg;
      msg << "eigenvalues " << eig.eigenvalues[i] << " and " << eig.eigenvalues[i + 1] << " differ by " << gap;
      throw Error(ErrorKind::DegenerateSpectrum, msg.str());
    }
  }
}

// Random draws for one offspring, taken from the stream before any
// evaluation so the result does not depend on evaluation order.
struct OffspringDraws {
  std::vector<std::size_t> tournament_a;
  std::vector<std::size_t> tournament_b;
  bool crossover = false;
  std::vector<double> blend;
  std::vector<double> noise;
};

class Objective {
public:
  Objective(const LocalSkewForm& form, const ComplexMatrix& spectrum, const GeneratorSet& generators)
      : form_(form), spectrum_(spectrum), generators_(generators) {}

  double operator()(std::span<const double> theta) {
    ++evaluations_;
    return form_(observable_from_params(theta, spectrum_, generators_));
  }

  std::size_t evaluations() const noexcept { return evaluations_; }

private:
  const LocalSkewForm& form_;
  const ComplexMatrix& spectrum_;
  const GeneratorSet& generators_;
  std::size_t evaluations_ = 0;
};

std::size_t tournament_winner(const std::vector<std::size_t>& entrants, const std::vector<double>& fitness) {
  std::size_t best = entrants.front();
  for (std::size_t idx : entrants)
    if (fitness[idx] < fitness[best]) best = idx;
  return best;
}

// exp(i t P) for a Hermitian P, reusing one eigendecomposition across t.
class ExponentialRay {
public:
  explicit ExponentialRay(const ComplexMatrix& generator) : eig_(hermitian_eigendecompose(generator)) {}

  ComplexMatrix at(double t) const {
    const ComplexMatrix& u = eig_.eigenvectors;
    const std::size_t d = u.rows();
    ComplexMatrix out(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        Complex sum = 0.0;
        for (std::size_t k = 0; k < d; ++k) sum += u(i, k) * std::polar(1.0, t * eig_.eigenvalues[k]) * std::conj(u(j, k));
        out(i, j) = sum;
      }
    return out;
  }

private:
  HermitianEig eig_;
};

struct GroupPoint {
  ComplexMatrix unitary;
  double value = 0.0;
};

// Quasi-Newton descent on SU(d) in left-translated exponential coordinates
// V -> exp(i sum_k x_k l_k) V. The gradient is exact:
// dI/dx_k = i Tr([K, G] l_k) with G = K R + R K - 2 M(K)^T.
class GroupRefiner {
public:
  GroupRefiner(const LocalSkewForm& form, const ComplexMatrix& spectrum, const GeneratorSet& generators)
      : form_(form), spectrum_(spectrum), generators_(generators) {}

  double value(const ComplexMatrix& v) {
    ++evaluations_;
    return form_(v * spectrum_ * v.adjoint());
  }

  std::vector<double> gradient(const ComplexMatrix& v) {
    const ComplexMatrix k = v * spectrum_ * v.adjoint();
    const ComplexMatrix g = form_.gradient(k);
    const ComplexMatrix commutator = k * g - g * k;
    std::vector<double> out(generators_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = (Complex(0.0, 1.0) * trace_product(commutator, generators_[i])).real();
    return out;
  }

  GroupPoint refine(GroupPoint start, std::size_t max_iterations) {
    const std::size_t n = generators_.size();
    std::vector<double> inverse_hessian(n * n, 0.0);
    auto reset = [&] {
      std::fill(inverse_hessian.begin(), inverse_hessian.end(), 0.0);
      for (std::size_t k = 0; k < n; ++k) inverse_hessian[k * n + k] = 0.25;
    };
    reset();
    std::vector<double> g = gradient(start.unitary);

    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
      double gnorm = 0.0;
      for (double gk : g) gnorm = std::max(gnorm, std::abs(gk));
      if (gnorm < 1e-11) break;

      std::vector<double> direction(n, 0.0);
      double slope = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) direction[i] -= inverse_hessian[i * n + j] * g[j];
        slope += direction[i] * g[i];
      }
      if (slope >= 0.0) {
        reset();
        slope = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          direction[i] = -0.25 * g[i];
          slope += direction[i] * g[i];
        }
      }

      ComplexMatrix ray_generator(generators_.dim(), generators_.dim());
      for (std::size_t k = 0; k < n; ++k) ray_generator += generators_[k] * Complex(direction[k]);
      const ExponentialRay ray(ray_generator);

      double t = 1.0;
      GroupPoint trial;
      bool accepted = false;
      for (int backtrack = 0; backtrack < 50; ++backtrack, t *= 0.5) {
        trial.unitary = ray.at(t) * start.unitary;
        trial.value = value(trial.unitary);
        if (trial.value <= start.value + 1e-4 * t * slope) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;

      std::vector<double> g_new = gradient(trial.unitary);
      const double improvement = start.value - trial.value;
      start = std::move(trial);

      double sy = 0.0;
      std::vector<double> s(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = t * direction[i];
        y[i] = g_new[i] - g[i];
        sy += s[i] * y[i];
      }
      g = std::move(g_new);
      if (improvement <= 0.0 && iter > 0) break;
      if (sy > 1e-300) {
        // H <- (I - r s y^T) H (I - r y s^T) + r s s^T
        const double r = 1.0 / sy;
        std::vector<double> hy(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) hy[i] += inverse_hessian[i * n + j] * y[j];
        double yhy = 0.0;
        for (std::size_t i = 0; i < n; ++i) yhy += y[i] * hy[i];
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            inverse_hessian[i * n + j] += -r * (hy[i] * s[j] + s[i] * hy[j]) + (r * r * yhy + r) * s[i] * s[j];
      }
    }
    return start;
  }

  std::size_t evaluations() const noexcept { return evaluations_; }

private:
  const LocalSkewForm& form_;
  const ComplexMatrix& spectrum_;
  const GeneratorSet& generators_;
  std::size_t evaluations_ = 0;
};

}  // namespace

OptimizeResult optimize_lqu(const DensityMatrix& rho, const ComplexMatrix& spectrum, const GAConfig& config) {
  config.validate();
  if (spectrum.rows() != rho.dim_a() || spectrum.cols() != rho.dim_a()) {
    std::ostringstream msg;
    msg << "spectrum is " << spectrum.rows() << "x" << spectrum.cols() << ", subsystem A has d=" << rho.dim_a();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  require_nondegenerate(spectrum);

  const GeneratorSet& generators = su_algebra(rho.dim_a()).generators;
  const std::size_t n = generators.size();
  const LocalSkewForm form(rho);
  Objective objective(form, spectrum, generators);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, config.population_size - 1);

  std::vector<std::vector<double>> population(config.population_size, std::vector<double>(n));
  for (auto& individual : population)
    for (auto& x : individual) x = angle(rng);
  std::vector<double> fitness(config.population_size);
  for (std::size_t i = 0; i < population.size(); ++i) fitness[i] = objective(population[i]);
  const auto initial_population = population;
  const auto initial_fitness = fitness;

  OptimizeResult result;
  double sigma = config.mutation_sigma;
  for (std::size_t gen = 0; gen < config.generations; ++gen) {
    sigma = config.mutation_sigma * std::pow(0.5, static_cast<double>(gen / 100));
    const std::size_t elite =
        static_cast<std::size_t>(std::min_element(fitness.begin(), fitness.end()) - fitness.begin());
    result.history.push_back(fitness[elite]);
    if (gen >= config.stall_generations &&
        result.history[gen - config.stall_generations] - fitness[elite] < config.stall_tolerance)
      break;

    std::vector<OffspringDraws> draws(config.population_size - 1);
    for (auto& draw : draws) {
      draw.tournament_a.resize(config.tournament_size);
      draw.tournament_b.resize(config.tournament_size);
      for (auto& idx : draw.tournament_a) idx = pick(rng);
      for (auto& idx : draw.tournament_b) idx = pick(rng);
      draw.crossover = unit(rng) < config.crossover_rate;
      draw.blend.resize(n);
      for (auto& w : draw.blend) w = unit(rng);
      draw.noise.resize(n);
      for (auto& z : draw.noise) z = gauss(rng);
    }

    std::vector<std::vector<double>> next;
    next.reserve(config.population_size);
    next.push_back(population[elite]);
    std::vector<double> next_fitness{fitness[elite]};
    for (const auto& draw : draws) {
      const auto& first = population[tournament_winner(draw.tournament_a, fitness)];
      const auto& second = population[tournament_winner(draw.tournament_b, fitness)];
      std::vector<double> child(n);
      for (std::size_t k = 0; k < n; ++k) {
        const double base = draw.crossover ? draw.blend[k] * first[k] + (1.0 - draw.blend[k]) * second[k] : first[k];
        child[k] = reflect_into_box(base + sigma * draw.noise[k]);
      }
      next_fitness.push_back(objective(child));
      next.push_back(std::move(child));
    }
    population = std::move(next);
    fitness = std::move(next_fitness);
  }

  const std::size_t best =
      static_cast<std::size_t>(std::min_element(fitness.begin(), fitness.end()) - fitness.begin());
  std::vector<double> theta = population[best];
  double value = fitness[best];
  if (result.history.empty() || value < result.history.back()) result.history.push_back(value);

  // Refine the incumbent and the best distinct members of the initial
  // population on the group; the GA alone rarely gets below ~1e-4.
  std::vector<std::vector<double>> starts{population[best]};
  std::vector<std::size_t> order(initial_population.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return initial_fitness[a] < initial_fitness[b]; });
  for (std::size_t idx : order) {
    if (starts.size() >= config.polish_starts) break;
    starts.push_back(initial_population[idx]);
  }

  GroupRefiner refiner(form, spectrum, generators);
  GroupPoint incumbent{unitary_from_params(theta, generators), value};
  for (const auto& start : starts) {
    GroupPoint point{unitary_from_params(start, generators), 0.0};
    point.value = refiner.value(point.unitary);
    point = refiner.refine(std::move(point), config.polish_steps);
    if (point.value < incumbent.value) {
      incumbent = std::move(point);
      result.history.push_back(incumbent.value);
    }
  }

  result.best_params = params_from_unitary(incumbent.unitary, generators);
  result.observable = observable_from_params(result.best_params, spectrum, generators);
  result.value = skew_information(rho, kron(result.observable, ComplexMatrix::identity(rho.dim_b())));
  result.evaluations = objective.evaluations() + refiner.evaluations();
  return result;
}

}  // namespace lqu
