#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "gqme/hilbert.hpp"
#include "gqme/maxent.hpp"
#include "gqme/tolerances.hpp"

namespace gqme {

// Truncated harmonic oscillator in the number basis, levels 0..n_levels-1.
struct OscillatorConfig {
  double mass = 1.0;
  double omega = 1.0;
  double hbar = 1.0;
  int n_levels = 2;
  double tail_tol = tol::tail;

  double quantum() const { return hbar * omega; }
  double lambda_q() const;  // sqrt(2 hbar / (m omega)), max |<Q>| per unit |z|
  double lambda_p() const;  // sqrt(2 hbar m omega),    max |<P>| per unit |z|
};

// levels[n] = hbar omega (n + 1/2). Equally spaced, so the gap-degeneracy
// flag is set for n_levels >= 3.
Spectrum oscillator_spectrum(const OscillatorConfig& cfg);

// Position and momentum in the number basis:
// Q = lambda_q (a + a^dag)/2, P = lambda_p (a - a^dag)/(2i),
// a[n-1, n] = sqrt(n). [Q, P] = i hbar on the top-left block; the last
// diagonal entry of the commutator is corrupted by truncation.
std::pair<Observable, Observable> ladder_observables(const OscillatorConfig& cfg);

// amps[n] proportional to exp(-|z|^2/2) z^n / sqrt(n!), renormalized after
// truncation. Requires the Poisson tail mass above n_levels-1 to be below
// tail_tol.
StateVector coherent_state(Complex z, const OscillatorConfig& cfg);

// One-step off-diagonal correlation Sum_n conj(amps[n+1]) amps[n] sqrt(n+1).
Complex zeta(const StateVector& psi);

// hbar omega |zeta|^2; equals <P>^2/2m + m omega^2 <Q>^2 / 2.
double classical_energy(const StateVector& psi, const OscillatorConfig& cfg);

struct PortraitPoint {
  double t;
  double q;
  double p;
};

// (<Q>_t, <P>_t) sampled at `samples` equally spaced times over one period,
// computed from the closed-form rotation of the initial point.
std::vector<PortraitPoint> phase_portrait(const StateVector& psi,
                                          const OscillatorConfig& cfg,
                                          int samples);

struct SolverOptions {
  double solver_tol = tol::solver;  // componentwise residual target
  double theta = 0.5;               // fixed-point mixing factor
  int max_iter = 10000;             // combined iteration cap
};

// Maximum-entropy state at fixed quantum energy and fixed classical energy,
// in the real-nonnegative gauge (all amps >= 0, zeta >= 0).
struct EnsembleSolution {
  StateVector state;
  double alpha;
  double beta;
  double gamma;
  double zeta;              // self-consistent, real in this gauge
  double energy;            // Sum_n |amps[n]|^2 E_n
  double classical_energy;  // hbar omega zeta^2
  double residual;          // max variational-equation residual on active modes
  std::int64_t iterations;
  double hbar_omega;        // oscillator quantum the solve was run with
};

// Solves the two-constraint variational equations for amplitudes lambda_n,
// fixing lambda_0 and recomputing alpha from normalization. gamma = 0
// degenerates to the canonical weights (lambda_0 is then determined by the
// equations themselves and the input value is not used). The damped
// fixed-point pass on (zeta, alpha) seeds a log-amplitude Newton solve of
// the full truncated system, with continuation in gamma as fallback.
EnsembleSolution solve_two_constraint(double beta, double gamma, double lambda0,
                                      const OscillatorConfig& cfg,
                                      const SolverOptions& opts = {});

// Profile x_n = amps[n] c_n / q^n with q = gamma zeta hbar omega / 2 and
// c_n = prod_{p=2}^n sqrt(p) ln sqrt(p); the product starts at p = 2 because
// the p = 0, 1 factors vanish. Flat x_n is coherent-like tail behaviour.
struct AsymptoticProfile {
  int n_start = 2;
  std::vector<double> x;
  double ratio_drift = 0.0;  // max |x_{n+1}/x_n - 1| over the last quartile
};

AsymptoticProfile asymptotic_profile(const EnsembleSolution& sol);

}  // namespace gqme
