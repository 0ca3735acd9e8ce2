#pragma once

#include "gqme/hilbert.hpp"

namespace gqme {

// Canonical maximum-entropy solution: weights[n] = exp(-alpha - beta E_n)
// with alpha = ln Z so the weights normalize.
struct CanonicalSolution {
  double beta = 0.0;
  double alpha = 0.0;
  DephasedDensity weights;
  double energy = 0.0;
  double entropy = 0.0;
  double heat_capacity = 0.0;
};

// -k_B Sum_n mu_n ln mu_n, with 0 ln 0 := 0.
double entropy(const DephasedDensity& mu, double kb = 1.0);

// Canonical weights at a given inverse temperature; shift-stable in beta.
CanonicalSolution weights_at(const Spectrum& spec, double beta, double kb = 1.0);

// Solve Sum_n mu_n E_n = E for beta. E must lie strictly inside
// (min level, max level); E(beta) is strictly decreasing so the root is
// unique. Bracketing by doubling, bisection, then safeguarded Newton with
// derivative -Var(E).
CanonicalSolution solve_beta(const Spectrum& spec, double energy_target,
                             double e_tol = 1e-12, double kb = 1.0);

// Centered difference [S(E+h) - S(E-h)] / (2h k_B); matches
// solve_beta(E).beta up to O(h^2).
double thermo_consistency(const Spectrum& spec, double energy_target, double h,
                          double kb = 1.0);

}  // namespace gqme
