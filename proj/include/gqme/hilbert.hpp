#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "gqme/errors.hpp"
#include "gqme/tolerances.hpp"

namespace gqme {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Ordered energy levels of a finite Hamiltonian, with coincidence flags.
//
// `degenerate` is set when two levels coincide within gap_tol.
// `gap_degenerate` is set when two distinct ordered pairs (m,n), m != n,
// produce the same level difference within gap_tol; equally spaced spectra
// and degenerate spectra both trip it. Time averages of quadratic state
// functions are only guaranteed to match torus averages when both flags
// are clear, so they are computed up front rather than on demand.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> levels, double hbar = 1.0,
                    double gap_tol = tol::gap);

  int dim() const { return static_cast<int>(levels_.size()); }
  const std::vector<double>& levels() const { return levels_; }
  double level(int n) const { return levels_[static_cast<std::size_t>(n)]; }
  double hbar() const { return hbar_; }
  bool degenerate() const { return degenerate_; }
  bool gap_degenerate() const { return gap_degenerate_; }

  double min_level() const { return levels_.front(); }
  double max_level() const { return levels_.back(); }

  // Smallest nonzero |E_m - E_n| and largest |E_m - E_n|; 0 if none exists.
  double min_gap() const;
  double max_gap() const;

 private:
  std::vector<double> levels_;
  double hbar_;
  bool degenerate_ = false;
  bool gap_degenerate_ = false;
};

// Unit-norm complex amplitude vector in the energy eigenbasis.
class StateVector {
 public:
  struct unchecked_t {};

  // Validates the norm; use normalize() to build from an arbitrary vector.
  explicit StateVector(Vector amps, double norm_tol = tol::norm);

  // Trusted constructor for internal paths that preserve the norm.
  StateVector(Vector amps, unchecked_t) : amps_(std::move(amps)) {}

  int dim() const { return static_cast<int>(amps_.size()); }
  const Vector& amps() const { return amps_; }
  Complex amp(int n) const { return amps_[n]; }

 private:
  Vector amps_;
};

// Dense Hermitian matrix in the energy eigenbasis.
class Observable {
 public:
  explicit Observable(Matrix a, double herm_tol = tol::herm);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }

  static Observable identity(int dim);

 private:
  Matrix matrix_;
};

// Diagonal weights of the dephased (time-averaged) density operator.
class DephasedDensity {
 public:
  explicit DephasedDensity(std::vector<double> weights,
                           double norm_tol = tol::norm);

  int dim() const { return static_cast<int>(weights_.size()); }
  const std::vector<double>& weights() const { return weights_; }
  double weight(int n) const { return weights_[static_cast<std::size_t>(n)]; }

 private:
  std::vector<double> weights_;
};

// amps = raw / ||raw||. Throws ZeroVector when ||raw|| < underflow_tol.
StateVector normalize(const Vector& raw, double underflow_tol = tol::underflow);

// <psi|A psi>; the imaginary residue is checked against herm_tol and dropped.
double expectation(const StateVector& psi, const Observable& a,
                   double herm_tol = tol::herm);

// weights[n] = |amps[n]|^2.
DephasedDensity dephase(const StateVector& psi);

// Sum_n mu_n A_nn.
double diag_trace(const DephasedDensity& rho, const Observable& a);

}  // namespace gqme
