#include "gqme/phase_average.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "gqme/rng.hpp"

namespace gqme {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

void check_finite(double v, const char* where) {
  if (!std::isfinite(v))
    throw NonFinite(std::string(where) + ": state function returned a non-finite value");
}

std::vector<int> active_modes(const Vector& amps) {
  std::vector<int> idx;
  for (int n = 0; n < amps.size(); ++n)
    if (std::abs(amps[n]) > tol::amp_floor) idx.push_back(n);
  return idx;
}

// Mean/M2 accumulator pair merged with Chan's formula so that the result
// is independent of how samples were grouped into blocks.
struct Moments {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  static Moments merge(const Moments& a, const Moments& b) {
    if (a.n == 0) return b;
    if (b.n == 0) return a;
    Moments r;
    r.n = a.n + b.n;
    const double d = b.mean - a.mean;
    r.mean = a.mean + d * static_cast<double>(b.n) / static_cast<double>(r.n);
    r.m2 = a.m2 + b.m2 +
           d * d * static_cast<double>(a.n) * static_cast<double>(b.n) /
               static_cast<double>(r.n);
    return r;
  }
};

Moments pairwise_merge(std::vector<Moments>& blocks, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return blocks[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return Moments::merge(pairwise_merge(blocks, lo, mid),
                        pairwise_merge(blocks, mid, hi));
}

constexpr std::int64_t kMcBlock = 4096;

}  // namespace

std::string to_string(AverageMethod m) {
  switch (m) {
    case AverageMethod::time: return "time";
    case AverageMethod::torus_mc: return "torus-mc";
    case AverageMethod::torus_grid: return "torus-grid";
    case AverageMethod::analytic: return "analytic";
  }
  return "unknown";
}

StateFunction StateFunction::linear(Observable a) {
  StateFunction f;
  f.kind_ = Kind::linear;
  f.a_ = a.matrix();
  f.degree_ = 1;
  return f;
}

StateFunction StateFunction::covariance(Observable a, Observable b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("StateFunction::covariance: observable dimensions differ");
  StateFunction f;
  f.kind_ = Kind::covariance;
  f.a_ = a.matrix();
  f.b_ = b.matrix();
  f.ab_ = f.a_ * f.b_;
  f.degree_ = 2;
  return f;
}

StateFunction StateFunction::custom(Evaluator fn, std::optional<int> degree) {
  if (!fn) throw Error("StateFunction::custom: empty evaluator");
  if (degree && *degree < 0)
    throw Error("StateFunction::custom: negative trigonometric degree");
  StateFunction f;
  f.kind_ = Kind::custom;
  f.fn_ = std::move(fn);
  f.degree_ = degree;
  return f;
}

double StateFunction::eval_raw(const Vector& amps) const {
  switch (kind_) {
    case Kind::linear: {
      if (amps.size() != a_.rows())
        throw DimensionMismatch("StateFunction: state and observable dimensions differ");
      return amps.dot(a_ * amps).real();
    }
    case Kind::covariance: {
      if (amps.size() != a_.rows())
        throw DimensionMismatch("StateFunction: state and observable dimensions differ");
      const double mixed = amps.dot(ab_ * amps).real();
      const double ea = amps.dot(a_ * amps).real();
      const double eb = amps.dot(b_ * amps).real();
      return mixed - ea * eb;
    }
    case Kind::custom:
      return fn_(StateVector(amps, StateVector::unchecked_t{}));
  }
  throw Error("StateFunction: invalid kind");
}

double StateFunction::operator()(const StateVector& psi) const {
  return eval_raw(psi.amps());
}

StateVector evolve(const StateVector& psi, const Spectrum& spec, double t) {
  if (psi.dim() != spec.dim())
    throw DimensionMismatch("evolve: state and spectrum dimensions differ");
  Vector amps = psi.amps();
  const double inv_hbar = 1.0 / spec.hbar();
  for (int n = 0; n < amps.size(); ++n)
    amps[n] *= std::polar(1.0, -spec.level(n) * t * inv_hbar);
  return StateVector(std::move(amps), StateVector::unchecked_t{});
}

namespace {

double trapezoid_time_mean(const StateFunction& f, const StateVector& psi,
                           const Spectrum& spec, double total_time,
                           std::int64_t steps) {
  const double h = total_time / static_cast<double>(steps);
  KahanSum acc;
  for (std::int64_t j = 0; j <= steps; ++j) {
    const double t = h * static_cast<double>(j);
    const double v = f.eval_raw(evolve(psi, spec, t).amps());
    check_finite(v, "time_average");
    acc.add((j == 0 || j == steps) ? 0.5 * v : v);
  }
  return acc.sum / static_cast<double>(steps);
}

}  // namespace

AverageReport time_average(const StateFunction& f, const StateVector& psi,
                           const Spectrum& spec, double total_time,
                           std::int64_t steps) {
  if (!(total_time > 0.0)) throw Error("time_average: horizon must be positive");
  if (steps < 2) throw Error("time_average: need at least 2 steps");

  const double full = trapezoid_time_mean(f, psi, spec, total_time, steps);
  const double half = trapezoid_time_mean(f, psi, spec, total_time,
                                          std::max<std::int64_t>(1, steps / 2));
  AverageReport r;
  r.value = full;
  r.method = AverageMethod::time;
  r.samples = steps + 1;
  r.error_estimate = std::abs(full - half) / 3.0;
  return r;
}

AverageReport torus_average_mc(const StateFunction& f, const StateVector& psi,
                               std::int64_t samples, std::uint64_t seed) {
  if (samples < 1) throw Error("torus_average_mc: need at least one sample");

  const std::vector<int> active = active_modes(psi.amps());
  const std::size_t k = active.size();

  const std::int64_t n_blocks = (samples + kMcBlock - 1) / kMcBlock;
  std::vector<Moments> blocks(static_cast<std::size_t>(n_blocks));

  Vector amps = psi.amps();
  for (std::int64_t b = 0; b < n_blocks; ++b) {
    const std::uint64_t block_key = CounterRng::derive(seed, static_cast<std::uint64_t>(b));
    const std::int64_t lo = b * kMcBlock;
    const std::int64_t hi = std::min(samples, lo + kMcBlock);
    Moments mom;
    for (std::int64_t s = lo; s < hi; ++s) {
      const std::uint64_t base = static_cast<std::uint64_t>(s - lo) * k;
      for (std::size_t t = 0; t < k; ++t) {
        const double phase =
            kTwoPi * (static_cast<double>(CounterRng::at(block_key, base + t) >> 11) * 0x1.0p-53);
        amps[active[t]] = psi.amp(active[t]) * std::polar(1.0, phase);
      }
      const double v = f.eval_raw(amps);
      check_finite(v, "torus_average_mc");
      mom.add(v);
    }
    blocks[static_cast<std::size_t>(b)] = mom;
  }

  const Moments total = pairwise_merge(blocks, 0, blocks.size());
  AverageReport r;
  r.value = total.mean;
  r.method = AverageMethod::torus_mc;
  r.samples = samples;
  r.error_estimate =
      total.n > 1 ? std::sqrt(std::max(0.0, total.m2 /
                                                static_cast<double>(total.n - 1)) /
                              static_cast<double>(total.n))
                  : 0.0;
  return r;
}

AverageReport torus_average_grid(const StateFunction& f, const StateVector& psi,
                                 std::int64_t grid_budget) {
  if (!f.degree())
    throw UnknownDegree("torus_average_grid: state function has no declared degree");
  const int d = *f.degree();
  const std::int64_t points_per = 2 * static_cast<std::int64_t>(d) + 1;

  const std::vector<int> active = active_modes(psi.amps());
  const std::size_t k = active.size();

  std::int64_t total = 1;
  for (std::size_t t = 0; t < k; ++t) {
    if (total > grid_budget / points_per)
      throw BudgetExceeded("torus_average_grid: grid of " + std::to_string(k) +
                           " phases at " + std::to_string(points_per) +
                           " points each exceeds budget " + std::to_string(grid_budget));
    total *= points_per;
  }

  // Roots of unity reused across the odometer sweep.
  std::vector<Complex> w(static_cast<std::size_t>(points_per));
  for (std::int64_t j = 0; j < points_per; ++j)
    w[static_cast<std::size_t>(j)] =
        std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(points_per));

  Vector amps = psi.amps();
  std::vector<std::int64_t> idx(k, 0);
  for (std::size_t t = 0; t < k; ++t) amps[active[t]] = psi.amp(active[t]) * w[0];

  KahanSum acc;
  for (std::int64_t point = 0;; ++point) {
    const double v = f.eval_raw(amps);
    check_finite(v, "torus_average_grid");
    acc.add(v);
    if (point + 1 == total) break;
    for (std::size_t t = 0;; ++t) {
      idx[t] = (idx[t] + 1) % points_per;
      amps[active[t]] = psi.amp(active[t]) * w[static_cast<std::size_t>(idx[t])];
      if (idx[t] != 0) break;
    }
  }

  AverageReport r;
  r.value = acc.sum / static_cast<double>(total);
  r.method = AverageMethod::torus_grid;
  r.samples = total;
  r.error_estimate = 0.0;
  return r;
}

double linear_analytic(const StateVector& psi, const Observable& a) {
  if (psi.dim() != a.dim())
    throw DimensionMismatch("linear_analytic: state and observable dimensions differ");
  double s = 0.0;
  for (int n = 0; n < psi.dim(); ++n)
    s += std::norm(psi.amp(n)) * a.matrix()(n, n).real();
  return s;
}

double covariance_analytic(const StateVector& psi, const Observable& a,
                           const Observable& b) {
  const int d = psi.dim();
  if (d != a.dim() || d != b.dim())
    throw DimensionMismatch("covariance_analytic: dimensions differ");

  Eigen::VectorXd mu(d);
  for (int n = 0; n < d; ++n) mu[n] = std::norm(psi.amp(n));

  const Matrix& ma = a.matrix();
  const Matrix& mb = b.matrix();

  Complex tr_ab = 0.0;   // Tr rho AB
  double tr_a = 0.0;     // Tr rho A
  double tr_b = 0.0;     // Tr rho B
  double diag4 = 0.0;    // Sum_n mu_n^2 A_nn B_nn
  for (int n = 0; n < d; ++n) {
    Complex abnn = 0.0;
    for (int m = 0; m < d; ++m) abnn += ma(n, m) * mb(m, n);
    tr_ab += mu[n] * abnn;
    tr_a += mu[n] * ma(n, n).real();
    tr_b += mu[n] * mb(n, n).real();
    diag4 += mu[n] * mu[n] * ma(n, n).real() * mb(n, n).real();
  }

  Complex tr_arb = 0.0;  // Tr rho A rho B
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) tr_arb += mu[m] * ma(m, n) * mu[n] * mb(n, m);

  return tr_ab.real() - tr_a * tr_b - tr_arb.real() + diag4;
}

std::pair<double, std::int64_t> default_time_horizon(const Spectrum& spec) {
  const double gap_min = spec.min_gap();
  const double gap_max = spec.max_gap();
  if (gap_min <= 0.0 || gap_max <= 0.0)
    throw DegenerateSpectrum("default_time_horizon: spectrum has no nonzero gap");
  const double total_time = 1000.0 / gap_min;
  const double shortest_period = kTwoPi * spec.hbar() / gap_max;
  const auto steps = static_cast<std::int64_t>(
      std::ceil(64.0 * total_time / shortest_period));
  return {total_time, std::max<std::int64_t>(steps, 2)};
}

}  // namespace gqme
