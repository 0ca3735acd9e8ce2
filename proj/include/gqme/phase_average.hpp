#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "gqme/hilbert.hpp"
#include "gqme/tolerances.hpp"

namespace gqme {

enum class AverageMethod { time, torus_mc, torus_grid, analytic };

std::string to_string(AverageMethod m);

struct AverageReport {
  double value = 0.0;
  AverageMethod method = AverageMethod::analytic;
  std::int64_t samples = 0;
  double error_estimate = 0.0;
};

// Real-valued function of a pure state. Linear means <psi|A psi>; the
// quadratic covariance is Re<psi|AB psi> - <psi|A psi><psi|B psi> (the
// expectation of a Hermitian observable is real exactly, the AB product
// term is not, hence the real part). Custom functions must declare their
// trigonometric degree per phase variable to be grid-integrable.
class StateFunction {
 public:
  using Evaluator = std::function<double(const StateVector&)>;

  static StateFunction linear(Observable a);
  static StateFunction covariance(Observable a, Observable b);
  static StateFunction custom(Evaluator f, std::optional<int> degree);

  double operator()(const StateVector& psi) const;

  // Per-variable trigonometric degree; nullopt for undeclared custom functions.
  std::optional<int> degree() const { return degree_; }

  // Evaluation on a raw amplitude vector (norm already established).
  double eval_raw(const Vector& amps) const;

 private:
  StateFunction() = default;

  enum class Kind { linear, covariance, custom } kind_ = Kind::custom;
  Matrix a_, b_, ab_;
  Evaluator fn_;
  std::optional<int> degree_;
};

// amps[n] -> amps[n] * exp(-i E_n t / hbar).
StateVector evolve(const StateVector& psi, const Spectrum& spec, double t);

// Trapezoidal estimate of (1/T) Int_0^T f(psi_t) dt with `steps` intervals;
// error estimate from a half-resolution Richardson comparison.
AverageReport time_average(const StateFunction& f, const StateVector& psi,
                           const Spectrum& spec, double total_time,
                           std::int64_t steps);

// Monte Carlo mean of f over i.i.d. uniform phases on every active mode
// (|amp| > amp_floor). Deterministic for a given seed, independent of any
// block partitioning: per-block sums are combined pairwise in index order.
AverageReport torus_average_mc(const StateFunction& f, const StateVector& psi,
                               std::int64_t samples, std::uint64_t seed);

// Exact torus integral on the uniform product grid with (2d+1) points per
// active phase, d the declared degree; exact for trigonometric polynomials
// of per-variable degree <= d.
AverageReport torus_average_grid(const StateFunction& f, const StateVector& psi,
                                 std::int64_t grid_budget = tol::grid_budget);

// Sum_n |amps[n]|^2 A_nn.
double linear_analytic(const StateVector& psi, const Observable& a);

// Closed form of the torus average of the quadratic covariance:
//   Tr rho AB - (Tr rho A)(Tr rho B) - Tr rho A rho B + Sum_n mu_n^2 A_nn B_nn
// with rho = diag(|amps|^2); real part returned.
double covariance_analytic(const StateVector& psi, const Observable& a,
                           const Observable& b);

// Default averaging horizon: T = 1000 / (smallest nonzero gap), with 64
// steps per shortest oscillation period.
std::pair<double, std::int64_t> default_time_horizon(const Spectrum& spec);

}  // namespace gqme
