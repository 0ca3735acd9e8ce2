#include "gqme/random.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace gqme {

StateVector random_state(int dim, CounterRng& rng) {
  Vector v(dim);
  for (int n = 0; n < dim; ++n) {
    double re, im;
    rng.normal_pair(re, im);
    v[n] = Complex(re, im);
  }
  return normalize(v);
}

Observable random_hermitian(int dim, CounterRng& rng) {
  Matrix a(dim, dim);
  for (int m = 0; m < dim; ++m) {
    a(m, m) = rng.normal();
    for (int n = m + 1; n < dim; ++n) {
      double re, im;
      rng.normal_pair(re, im);
      a(m, n) = Complex(re, im) / std::sqrt(2.0);
      a(n, m) = std::conj(a(m, n));
    }
  }
  return Observable(std::move(a));
}

namespace {

// Mean energy of tilted weights w_n e^{-tau E_n}, shift-stable.
double tilted_energy(const std::vector<double>& w, const Spectrum& spec,
                     double tau) {
  double shift = -std::numeric_limits<double>::infinity();
  const int d = spec.dim();
  std::vector<double> expo(static_cast<std::size_t>(d));
  for (int n = 0; n < d; ++n) {
    expo[static_cast<std::size_t>(n)] = -tau * spec.level(n);
    if (w[static_cast<std::size_t>(n)] > 0.0)
      shift = std::max(shift, expo[static_cast<std::size_t>(n)]);
  }
  double num = 0.0, den = 0.0;
  for (int n = 0; n < d; ++n) {
    const double t = w[static_cast<std::size_t>(n)] *
                     std::exp(expo[static_cast<std::size_t>(n)] - shift);
    num += t * spec.level(n);
    den += t;
  }
  return num / den;
}

}  // namespace

StateVector random_state_with_energy(const Spectrum& spec, double energy_target,
                                     CounterRng& rng, double e_tol) {
  if (!(energy_target > spec.min_level() && energy_target < spec.max_level()))
    throw OutOfRange("random_state_with_energy: target energy outside level interval");

  const int d = spec.dim();
  Vector v(d);
  std::vector<double> w(static_cast<std::size_t>(d));
  for (int n = 0; n < d; ++n) {
    double re, im;
    rng.normal_pair(re, im);
    v[n] = Complex(re, im);
    w[static_cast<std::size_t>(n)] = std::norm(v[n]);
  }

  // Tilted mean is strictly decreasing in tau; bracket by doubling, bisect.
  double lo = 0.0, hi = 0.0, step = 1.0;
  const double g0 = tilted_energy(w, spec, 0.0) - energy_target;
  if (g0 > 0.0) {
    hi = step;
    while (tilted_energy(w, spec, hi) - energy_target > 0.0) {
      lo = hi;
      step *= 2.0;
      hi = step;
      if (!std::isfinite(hi))
        throw NoConvergence("random_state_with_energy: tilt bracketing diverged");
    }
  } else if (g0 < 0.0) {
    lo = -step;
    while (tilted_energy(w, spec, lo) - energy_target < 0.0) {
      hi = lo;
      step *= 2.0;
      lo = -step;
      if (!std::isfinite(lo))
        throw NoConvergence("random_state_with_energy: tilt bracketing diverged");
    }
  }
  double tau = 0.5 * (lo + hi);
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    tau = 0.5 * (lo + hi);
    const double g = tilted_energy(w, spec, tau) - energy_target;
    if (std::abs(g) <= e_tol) break;
    if (g > 0.0)
      lo = tau;
    else
      hi = tau;
  }

  for (int n = 0; n < d; ++n) v[n] *= std::exp(-0.5 * tau * spec.level(n));
  return normalize(v);
}

}  // namespace gqme
