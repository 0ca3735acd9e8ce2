#include "gqme/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gqme {

double entropy(const DephasedDensity& mu, double kb) {
  double s = 0.0;
  for (double w : mu.weights())
    if (w > 0.0) s -= w * std::log(w);
  return kb * s;
}

CanonicalSolution weights_at(const Spectrum& spec, double beta, double kb) {
  const int d = spec.dim();
  std::vector<double> expo(static_cast<std::size_t>(d));
  double shift = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < d; ++n) {
    const double x = -beta * spec.level(n);
    if (!std::isfinite(x))
      throw Overflow("weights_at: beta * E_n is not finite");
    expo[static_cast<std::size_t>(n)] = x;
    shift = std::max(shift, x);
  }

  std::vector<double> w(static_cast<std::size_t>(d));
  double z_shifted = 0.0;
  for (int n = 0; n < d; ++n) {
    w[static_cast<std::size_t>(n)] = std::exp(expo[static_cast<std::size_t>(n)] - shift);
    z_shifted += w[static_cast<std::size_t>(n)];
  }
  if (!std::isfinite(z_shifted) || z_shifted <= 0.0)
    throw Overflow("weights_at: partition sum not representable");
  for (double& x : w) x /= z_shifted;

  double energy = 0.0;
  for (int n = 0; n < d; ++n) energy += w[static_cast<std::size_t>(n)] * spec.level(n);
  double var = 0.0;
  for (int n = 0; n < d; ++n) {
    const double dn = spec.level(n) - energy;
    var += w[static_cast<std::size_t>(n)] * dn * dn;
  }

  CanonicalSolution sol{
      .beta = beta,
      .alpha = std::log(z_shifted) + shift,
      .weights = DephasedDensity(std::move(w)),
      .energy = energy,
      .entropy = 0.0,
      .heat_capacity = kb * beta * beta * var,
  };
  sol.entropy = entropy(sol.weights, kb);
  return sol;
}

namespace {

double mean_energy(const Spectrum& spec, double beta) {
  return weights_at(spec, beta).energy;
}

double energy_variance(const Spectrum& spec, double beta) {
  const CanonicalSolution s = weights_at(spec, beta);
  double var = 0.0;
  for (int n = 0; n < spec.dim(); ++n) {
    const double d = spec.level(n) - s.energy;
    var += s.weights.weight(n) * d * d;
  }
  return var;
}

}  // namespace

CanonicalSolution solve_beta(const Spectrum& spec, double energy_target,
                             double e_tol, double kb) {
  if (!(spec.max_level() - spec.min_level() > 0.0))
    throw DegenerateSpectrum("solve_beta: spectrum is a single repeated level");
  if (!(energy_target > spec.min_level() && energy_target < spec.max_level()))
    throw OutOfRange("solve_beta: target energy " + std::to_string(energy_target) +
                     " outside open level interval");

  // g(beta) = E(beta) - E is strictly decreasing. Bracket by doubling.
  double lo = 0.0, hi = 0.0;
  const double g0 = mean_energy(spec, 0.0) - energy_target;
  if (g0 == 0.0) return weights_at(spec, 0.0, kb);
  double step = 1.0;
  if (g0 > 0.0) {  // root at beta > 0
    lo = 0.0;
    hi = step;
    while (mean_energy(spec, hi) - energy_target > 0.0) {
      lo = hi;
      step *= 2.0;
      hi = step;
      if (!std::isfinite(hi)) throw NoConvergence("solve_beta: bracketing diverged");
    }
  } else {  // population-inverted branch, root at beta < 0
    hi = 0.0;
    lo = -step;
    while (mean_energy(spec, lo) - energy_target < 0.0) {
      hi = lo;
      step *= 2.0;
      lo = -step;
      if (!std::isfinite(lo)) throw NoConvergence("solve_beta: bracketing diverged");
    }
  }

  // Bisect to a narrow window, then polish with safeguarded Newton.
  while (hi - lo > 1e-2) {
    const double mid = 0.5 * (lo + hi);
    if (mean_energy(spec, mid) - energy_target > 0.0)
      lo = mid;
    else
      hi = mid;
  }

  double beta = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double g = mean_energy(spec, beta) - energy_target;
    if (std::abs(g) <= e_tol) return weights_at(spec, beta, kb);
    if (g > 0.0)
      lo = beta;
    else
      hi = beta;
    const double var = energy_variance(spec, beta);
    double next = var > 0.0 ? beta + g / var : beta;  // dE/dbeta = -Var
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == beta) return weights_at(spec, beta, kb);  // bracket exhausted
    beta = next;
  }
  const double g = mean_energy(spec, beta) - energy_target;
  if (std::abs(g) <= e_tol) return weights_at(spec, beta, kb);
  throw NoConvergence("solve_beta: did not reach energy tolerance");
}

double thermo_consistency(const Spectrum& spec, double energy_target, double h,
                          double kb) {
  const double s_plus = solve_beta(spec, energy_target + h, 1e-12, kb).entropy;
  const double s_minus = solve_beta(spec, energy_target - h, 1e-12, kb).entropy;
  return (s_plus - s_minus) / (2.0 * h) / kb;
}

}  // namespace gqme
