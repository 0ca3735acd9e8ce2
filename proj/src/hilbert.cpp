#include "gqme/hilbert.hpp"

#include <algorithm>
#include <cmath>

namespace gqme {

namespace {

bool has_gap_coincidence(const std::vector<double>& levels, double gap_tol) {
  const int d = static_cast<int>(levels.size());
  std::vector<double> diffs;
  diffs.reserve(static_cast<std::size_t>(d) * (d - 1));
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      if (m != n) diffs.push_back(levels[m] - levels[n]);
  std::sort(diffs.begin(), diffs.end());
  for (std::size_t i = 1; i < diffs.size(); ++i)
    if (diffs[i] - diffs[i - 1] < gap_tol) return true;
  return false;
}

}  // namespace

Spectrum::Spectrum(std::vector<double> levels, double hbar, double gap_tol)
    : levels_(std::move(levels)), hbar_(hbar) {
  if (levels_.empty()) throw Error("Spectrum: empty level list");
  if (!(hbar_ > 0.0)) throw Error("Spectrum: hbar must be positive");
  for (double e : levels_)
    if (!std::isfinite(e)) throw Error("Spectrum: non-finite level");
  if (!std::is_sorted(levels_.begin(), levels_.end()))
    throw Error("Spectrum: levels must be sorted ascending");

  for (std::size_t i = 1; i < levels_.size(); ++i)
    if (levels_[i] - levels_[i - 1] < gap_tol) degenerate_ = true;
  gap_degenerate_ = levels_.size() > 1 && has_gap_coincidence(levels_, gap_tol);
}

double Spectrum::min_gap() const {
  double g = 0.0;
  for (std::size_t i = 1; i < levels_.size(); ++i) {
    const double gi = levels_[i] - levels_[i - 1];
    if (gi > 0.0 && (g == 0.0 || gi < g)) g = gi;
  }
  return g;
}

double Spectrum::max_gap() const { return levels_.back() - levels_.front(); }

StateVector::StateVector(Vector amps, double norm_tol) : amps_(std::move(amps)) {
  if (amps_.size() == 0) throw Error("StateVector: empty amplitude vector");
  if (std::abs(amps_.norm() - 1.0) > norm_tol)
    throw Error("StateVector: amplitudes are not unit norm");
}

Observable::Observable(Matrix a, double herm_tol) : matrix_(std::move(a)) {
  if (matrix_.rows() != matrix_.cols())
    throw DimensionMismatch("Observable: matrix is not square");
  const double residue =
      (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (residue > herm_tol)
    throw NonHermitian("Observable: matrix is not Hermitian (residue " +
                       std::to_string(residue) + ")");
}

Observable Observable::identity(int dim) {
  return Observable(Matrix::Identity(dim, dim));
}

DephasedDensity::DephasedDensity(std::vector<double> weights, double norm_tol)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error("DephasedDensity: empty weights");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0))
      throw Error("DephasedDensity: negative or non-finite weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > norm_tol)
    throw Error("DephasedDensity: weights do not sum to 1");
}

StateVector normalize(const Vector& raw, double underflow_tol) {
  if (raw.size() == 0) throw ZeroVector("normalize: empty vector");
  const double n = raw.stableNorm();
  if (n < underflow_tol)
    throw ZeroVector("normalize: vector norm below underflow tolerance");
  return StateVector(raw / n, StateVector::unchecked_t{});
}

double expectation(const StateVector& psi, const Observable& a,
                   double herm_tol) {
  if (psi.dim() != a.dim())
    throw DimensionMismatch("expectation: state and observable dimensions differ");
  const Complex v = psi.amps().dot(a.matrix() * psi.amps());
  if (std::abs(v.imag()) > herm_tol)
    throw NonHermitian("expectation: imaginary residue " +
                       std::to_string(v.imag()));
  return v.real();
}

DephasedDensity dephase(const StateVector& psi) {
  std::vector<double> w(static_cast<std::size_t>(psi.dim()));
  for (int n = 0; n < psi.dim(); ++n) w[static_cast<std::size_t>(n)] = std::norm(psi.amp(n));
  return DephasedDensity(std::move(w));
}

double diag_trace(const DephasedDensity& rho, const Observable& a) {
  if (rho.dim() != a.dim())
    throw DimensionMismatch("diag_trace: density and observable dimensions differ");
  double s = 0.0;
  for (int n = 0; n < rho.dim(); ++n)
    s += rho.weight(n) * a.matrix()(n, n).real();
  return s;
}

}  // namespace gqme
