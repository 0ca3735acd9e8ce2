#include "gqme/oscillator.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

namespace gqme {

double OscillatorConfig::lambda_q() const {
  return std::sqrt(2.0 * hbar / (mass * omega));
}

double OscillatorConfig::lambda_p() const {
  return std::sqrt(2.0 * hbar * mass * omega);
}

namespace {

void validate(const OscillatorConfig& cfg) {
  if (!(cfg.mass > 0.0) || !(cfg.omega > 0.0) || !(cfg.hbar > 0.0))
    throw Error("OscillatorConfig: mass, omega, hbar must be positive");
  if (cfg.n_levels < 2) throw Error("OscillatorConfig: need at least 2 levels");
  if (!(cfg.tail_tol > 0.0)) throw Error("OscillatorConfig: tail_tol must be positive");
}

}  // namespace

Spectrum oscillator_spectrum(const OscillatorConfig& cfg) {
  validate(cfg);
  std::vector<double> levels(static_cast<std::size_t>(cfg.n_levels));
  for (int n = 0; n < cfg.n_levels; ++n)
    levels[static_cast<std::size_t>(n)] = cfg.quantum() * (0.5 + n);
  return Spectrum(std::move(levels), cfg.hbar);
}

std::pair<Observable, Observable> ladder_observables(const OscillatorConfig& cfg) {
  validate(cfg);
  const int d = cfg.n_levels;
  Matrix q = Matrix::Zero(d, d);
  Matrix p = Matrix::Zero(d, d);
  const double cq = 0.5 * cfg.lambda_q();
  const double cp = 0.5 * cfg.lambda_p();
  for (int n = 1; n < d; ++n) {
    const double r = std::sqrt(static_cast<double>(n));  // a[n-1, n]
    q(n - 1, n) = cq * r;
    q(n, n - 1) = cq * r;
    p(n - 1, n) = Complex(0.0, -cp * r);
    p(n, n - 1) = Complex(0.0, cp * r);
  }
  return {Observable(std::move(q)), Observable(std::move(p))};
}

StateVector coherent_state(Complex z, const OscillatorConfig& cfg) {
  validate(cfg);
  const int d = cfg.n_levels;
  const double zsq = std::norm(z);

  // Poisson tail mass above the truncation.
  double term = std::exp(-zsq);
  double cum = term;
  for (int n = 1; n < d; ++n) {
    term *= zsq / static_cast<double>(n);
    cum += term;
  }
  if (1.0 - cum > cfg.tail_tol)
    throw TruncationTooSmall("coherent_state: Poisson tail " +
                             std::to_string(1.0 - cum) + " above " +
                             std::to_string(d - 1) + " exceeds tail tolerance");

  Vector amps(d);
  Complex a = std::exp(-0.5 * zsq);
  amps[0] = a;
  for (int n = 1; n < d; ++n) {
    a *= z / std::sqrt(static_cast<double>(n));
    amps[n] = a;
  }
  return normalize(amps);
}

Complex zeta(const StateVector& psi) {
  Complex z = 0.0;
  for (int n = 0; n + 1 < psi.dim(); ++n)
    z += std::conj(psi.amp(n + 1)) * psi.amp(n) *
         std::sqrt(static_cast<double>(n + 1));
  return z;
}

double classical_energy(const StateVector& psi, const OscillatorConfig& cfg) {
  validate(cfg);
  if (psi.dim() != cfg.n_levels)
    throw DimensionMismatch("classical_energy: state and config dimensions differ");
  return cfg.quantum() * std::norm(zeta(psi));
}

std::vector<PortraitPoint> phase_portrait(const StateVector& psi,
                                          const OscillatorConfig& cfg,
                                          int samples) {
  validate(cfg);
  if (psi.dim() != cfg.n_levels)
    throw DimensionMismatch("phase_portrait: state and config dimensions differ");
  if (samples < 4) throw Error("phase_portrait: need at least 4 samples");

  const Complex zt = zeta(psi);
  const double q0 = cfg.lambda_q() * zt.real();
  const double p0 = -cfg.lambda_p() * zt.imag();

  const double period = 2.0 * std::numbers::pi / cfg.omega;
  std::vector<PortraitPoint> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    const double t = period * static_cast<double>(j) / static_cast<double>(samples);
    const double c = std::cos(cfg.omega * t);
    const double s = std::sin(cfg.omega * t);
    pts.push_back({t, q0 * c + p0 / (cfg.mass * cfg.omega) * s,
                   -cfg.mass * cfg.omega * q0 * s + p0 * c});
  }
  return pts;
}

namespace {

// ---------------------------------------------------------------------------
// Two-constraint solver internals. Work in log amplitudes l_n = ln lambda_n
// (real-nonnegative gauge). The variational residual of mode n is
//   res_n = -2 l_n - 1 - alpha - beta E_n
//           - g zeta (e^{l_{n+1}-l_n} sqrt(n+1) + e^{l_{n-1}-l_n} sqrt(n)),
// g = gamma hbar omega, zeta = Sum_k e^{l_{k+1}+l_k} sqrt(k+1).
// ---------------------------------------------------------------------------

struct OscProblem {
  double beta;
  double gamma;
  double hw;  // hbar omega
  int n;      // truncation dimension

  double level(int k) const { return hw * (0.5 + k); }
};

double zeta_of(const OscProblem& pb, const Eigen::VectorXd& l) {
  double z = 0.0;
  for (int k = 0; k + 1 < pb.n; ++k) {
    const double e = std::exp(l[k + 1] + l[k]);
    z += e * std::sqrt(static_cast<double>(k + 1));
  }
  return z;
}

// Residual vector: components 0..n-2 are variational residuals, component
// n-1 is the normalization defect Sum e^{2 l} - 1.
Eigen::VectorXd residual_system(const OscProblem& pb, const Eigen::VectorXd& l,
                                double alpha) {
  const int n = pb.n;
  const double g = pb.gamma * pb.hw;
  const double zt = zeta_of(pb, l);
  Eigen::VectorXd f(n);
  for (int k = 0; k < n - 1; ++k) {
    const double a = std::exp(l[k + 1] - l[k]) * std::sqrt(static_cast<double>(k + 1));
    const double b = k > 0 ? std::exp(l[k - 1] - l[k]) * std::sqrt(static_cast<double>(k)) : 0.0;
    f[k] = -2.0 * l[k] - 1.0 - alpha - pb.beta * pb.level(k) - g * zt * (a + b);
  }
  double norm = -1.0;
  for (int k = 0; k < n; ++k) norm += std::exp(2.0 * l[k]);
  f[n - 1] = norm;
  return f;
}

// Variational residuals of every mode, including the truncated last one
// (whose upward coupling is absent); used for reporting.
Eigen::VectorXd residual_all_modes(const OscProblem& pb, const Eigen::VectorXd& l,
                                   double alpha) {
  const int n = pb.n;
  const double g = pb.gamma * pb.hw;
  const double zt = zeta_of(pb, l);
  Eigen::VectorXd res(n);
  for (int k = 0; k < n; ++k) {
    const double a = k + 1 < n
                         ? std::exp(l[k + 1] - l[k]) * std::sqrt(static_cast<double>(k + 1))
                         : 0.0;
    const double b = k > 0 ? std::exp(l[k - 1] - l[k]) * std::sqrt(static_cast<double>(k)) : 0.0;
    res[k] = -2.0 * l[k] - 1.0 - alpha - pb.beta * pb.level(k) - g * zt * (a + b);
  }
  return res;
}

// Dense Jacobian of residual_system with respect to (l_1..l_{n-1}, alpha);
// l_0 is fixed by the caller.
Eigen::MatrixXd jacobian(const OscProblem& pb, const Eigen::VectorXd& l,
                         double /*alpha*/) {
  const int n = pb.n;
  const double g = pb.gamma * pb.hw;
  const double zt = zeta_of(pb, l);

  Eigen::VectorXd lam(n), dzeta(n);
  for (int k = 0; k < n; ++k) lam[k] = std::exp(l[k]);
  for (int m = 0; m < n; ++m) {
    double d = 0.0;
    if (m > 0) d += lam[m] * lam[m - 1] * std::sqrt(static_cast<double>(m));
    if (m + 1 < n) d += lam[m] * lam[m + 1] * std::sqrt(static_cast<double>(m + 1));
    dzeta[m] = d;
  }

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n - 1; ++k) {
    const double a = std::exp(l[k + 1] - l[k]) * std::sqrt(static_cast<double>(k + 1));
    const double b = k > 0 ? std::exp(l[k - 1] - l[k]) * std::sqrt(static_cast<double>(k)) : 0.0;

    // coupling through zeta (dense, columns m = 1..n-1)
    for (int m = 1; m < n; ++m) jac(k, m - 1) = -g * dzeta[m] * (a + b);
    // local couplings
    if (k >= 1) jac(k, k - 1) += -2.0 - g * zt * (-a - b);
    if (k + 1 >= 1) jac(k, k + 1 - 1) += -g * zt * a;
    if (k - 1 >= 1) jac(k, k - 1 - 1) += -g * zt * b;
    // alpha column
    jac(k, n - 1) = -1.0;
  }
  for (int m = 1; m < n; ++m) jac(n - 1, m - 1) = 2.0 * std::exp(2.0 * l[m]);
  jac(n - 1, n - 1) = 0.0;
  return jac;
}

struct NewtonResult {
  Eigen::VectorXd l;
  double alpha = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Superfactorial continuation of the log amplitudes with ratio
// q / (sqrt(k) ln sqrt(k)), the tail shape of the converged solutions.
void extend_tail(Eigen::VectorXd& l, int from, double q) {
  const double ln_q = std::log(std::max(q, 1e-300));
  for (int k = from; k < l.size(); ++k) {
    const double half_ln = 0.5 * std::log(static_cast<double>(k));
    const double inc = ln_q - (half_ln + std::log(std::max(half_ln, 0.5)));
    l[k] = l[k - 1] + std::min(inc, -0.5);
  }
}

NewtonResult newton_solve_dense(const OscProblem& pb, Eigen::VectorXd l,
                                double alpha, int max_iter);

// Joint Newton on the modes that carry weight. Amplitudes far below
// amp_floor make the full Jacobian numerically singular (the linearized
// recurrence has an inward-decaying homogeneous mode), so the system is
// solved on a window [0, window) that covers every active mode with margin;
// the remainder is filled with the asymptotic tail shape, which keeps
// |lambda|^2 orders of magnitude under tail_tol and out of the residual
// contract. Widens and re-solves if the converged window end is still fat.
NewtonResult windowed_newton(const OscProblem& pb, Eigen::VectorXd l,
                             double alpha, int max_iter) {
  constexpr double kActiveLog = -33.0;   // ~ln(amp_floor)
  constexpr int kWindowMargin = 16;      // modes past the last active one
  constexpr double kThinEndLog = -40.0;  // window end must decay below this

  NewtonResult out;
  int window = 12;
  for (int k = 0; k < pb.n; ++k)
    if (l[k] >= kActiveLog) window = std::max(window, k + 1 + kWindowMargin);
  window = std::min(window, pb.n);

  int spent = 0;
  while (true) {
    OscProblem pb_w{pb.beta, pb.gamma, pb.hw, window};
    NewtonResult nr = newton_solve_dense(pb_w, l.head(window), alpha,
                                         std::max(1, max_iter - spent));
    spent += nr.iterations;
    if (!nr.converged) {
      out.iterations = spent;
      return out;
    }
    l.head(window) = nr.l;
    alpha = nr.alpha;
    const double q = 0.5 * pb.gamma * pb.hw * zeta_of(pb_w, nr.l);
    if (window < pb.n) extend_tail(l, window, q);
    if (window == pb.n || nr.l[window - 1] <= kThinEndLog) {
      out.l = std::move(l);
      out.alpha = alpha;
      out.iterations = spent;
      out.converged = true;
      return out;
    }
    window = std::min(pb.n, window + std::max(8, window / 2));
    if (spent >= max_iter) {
      out.iterations = spent;
      return out;
    }
  }
}

NewtonResult newton_solve_dense(const OscProblem& pb, Eigen::VectorXd l,
                                double alpha, int max_iter) {
  constexpr double kTol = 1e-12;
  constexpr double kStepCap = 25.0;
  const bool trace = std::getenv("GQME_SOLVER_TRACE") != nullptr;

  NewtonResult out;
  Eigen::VectorXd f = residual_system(pb, l, alpha);
  double fnorm = f.lpNorm<Eigen::Infinity>();
  if (trace)
    std::fprintf(stderr, "[newton] n=%d gamma=%g fnorm0=%.3e\n", pb.n, pb.gamma,
                 fnorm);
  if (!std::isfinite(fnorm)) return out;

  for (int it = 0; it < max_iter; ++it) {
    if (fnorm <= kTol) {
      out.l = l;
      out.alpha = alpha;
      out.iterations = it;
      out.converged = true;
      return out;
    }

    Eigen::MatrixXd jac = jacobian(pb, l, alpha);
    Eigen::VectorXd rhs = -f;
    // Row equilibration; magnitudes span many decades between head and tail.
    for (int r = 0; r < jac.rows(); ++r) {
      const double scale = std::max(jac.row(r).cwiseAbs().maxCoeff(),
                                    std::numeric_limits<double>::min());
      jac.row(r) /= scale;
      rhs[r] /= scale;
    }
    // Modes below the underflow horizon form an inward-decaying homogeneous
    // direction of the linearized recurrence, so the Jacobian is numerically
    // rank-deficient; take the minimum-norm Gauss-Newton step instead of LU.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
    cod.setThreshold(1e-13);
    Eigen::VectorXd step = cod.solve(rhs);
    if (!step.allFinite()) return out;
    const double mag = step.lpNorm<Eigen::Infinity>();
    if (mag > kStepCap) step *= kStepCap / mag;

    bool accepted = false;
    for (double damp = 1.0; damp >= 1.0 / 1024.0; damp *= 0.5) {
      Eigen::VectorXd l_try = l;
      for (int m = 1; m < pb.n; ++m) l_try[m] += damp * step[m - 1];
      const double alpha_try = alpha + damp * step[pb.n - 1];
      Eigen::VectorXd f_try = residual_system(pb, l_try, alpha_try);
      const double fn_try = f_try.lpNorm<Eigen::Infinity>();
      if (std::isfinite(fn_try) && fn_try < fnorm) {
        l = std::move(l_try);
        alpha = alpha_try;
        f = std::move(f_try);
        fnorm = fn_try;
        accepted = true;
        break;
      }
    }
    if (trace)
      std::fprintf(stderr, "[newton]   it=%d fnorm=%.3e step=%.3e accepted=%d\n",
                   it, fnorm, mag, accepted ? 1 : 0);
    if (!accepted) {
      out.iterations = it + 1;
      out.l = l;
      out.alpha = alpha;
      out.converged = fnorm <= 1e-10;  // rounding plateau
      return out;
    }
  }
  out.l = l;
  out.alpha = alpha;
  out.iterations = max_iter;
  out.converged = fnorm <= kTol;
  return out;
}

// Forward generation of the recurrence at fixed (zeta, alpha); linear-space
// shooting. Relative error grows like (lambda_0/lambda_n)^2, so generation
// stops once amplitudes reach the forward-stable floor.
struct Generated {
  std::vector<double> lam;
  int filled = 0;         // entries 0..filled-1 are meaningful
  bool negative = false;  // sign flip above the tail floor
};

Generated generate_forward(const OscProblem& pb, double zt, double alpha,
                           double lambda0, double tail_tol) {
  constexpr double kStopSq = 1e-18;
  const double g = pb.gamma * pb.hw;
  Generated out;
  out.lam.assign(static_cast<std::size_t>(pb.n), 0.0);
  out.lam[0] = lambda0;
  out.filled = 1;
  double prev = 0.0, cur = lambda0;
  for (int k = 0; k + 1 < pb.n; ++k) {
    const double bracket = -2.0 * std::log(cur) - 1.0 - alpha - pb.beta * pb.level(k);
    double next = cur * bracket / (g * zt);
    if (k > 0) next -= prev * std::sqrt(static_cast<double>(k));
    next /= std::sqrt(static_cast<double>(k + 1));
    if (!(next > 0.0) || !std::isfinite(next)) {
      if (cur * cur > tail_tol) out.negative = true;
      break;
    }
    out.lam[static_cast<std::size_t>(k + 1)] = next;
    out.filled = k + 2;
    if (next * next < kStopSq) break;
    prev = cur;
    cur = next;
  }
  return out;
}

double zeta_of_prefix(const std::vector<double>& lam, int filled) {
  double z = 0.0;
  for (int k = 0; k + 1 < filled; ++k)
    z += lam[static_cast<std::size_t>(k + 1)] * lam[static_cast<std::size_t>(k)] *
         std::sqrt(static_cast<double>(k + 1));
  return z;
}

struct FixedPointSeed {
  double zt;
  double alpha;
  Generated gen;
  int iterations = 0;
  bool usable = false;
  bool negative = false;
};

// Damped fixed point on (zeta, alpha): generate, read off the implied zeta,
// absorb the normalization defect into alpha, mix with factor theta.
FixedPointSeed fixed_point_seed(const OscProblem& pb, double zt0, double alpha0,
                                double lambda0, double theta, int max_iter,
                                double tail_tol) {
  FixedPointSeed fp;
  fp.zt = zt0;
  fp.alpha = alpha0;
  Generated gen;
  for (int it = 0; it < max_iter; ++it) {
    gen = generate_forward(pb, fp.zt, fp.alpha, lambda0, tail_tol);
    fp.iterations = it + 1;
    fp.negative = gen.negative;
    if (gen.filled < 2) return fp;
    double s = 0.0;
    for (int k = 0; k < gen.filled; ++k) {
      const double v = gen.lam[static_cast<std::size_t>(k)];
      s += v * v;
    }
    if (!(s > 0.0) || !std::isfinite(s)) return fp;
    const double zt_new = zeta_of_prefix(gen.lam, gen.filled) / s;
    const double alpha_new = fp.alpha + std::log(s);
    if (!(zt_new > 0.0) || !std::isfinite(zt_new) || !std::isfinite(alpha_new))
      return fp;
    const double drift =
        std::abs(zt_new - fp.zt) + std::abs(alpha_new - fp.alpha) + std::abs(s - 1.0);
    fp.zt += theta * (zt_new - fp.zt);
    fp.alpha += theta * (alpha_new - fp.alpha);
    if (drift < 1e-10) {
      fp.usable = true;
      fp.gen = gen;
      return fp;
    }
  }
  fp.usable = gen.filled >= 2;
  fp.gen = gen;
  return fp;
}

// Initial log amplitudes from a generated prefix: trusted down to 1e-6,
// asymptotic tail continuation below (Newton corrects the tail shape).
Eigen::VectorXd log_guess_from_prefix(const OscProblem& pb,
                                      const std::vector<double>& lam, int filled,
                                      double lambda0, double q) {
  Eigen::VectorXd l(pb.n);
  l[0] = std::log(lambda0);
  int last = 0;
  for (int k = 1; k < filled; ++k) {
    const double v = lam[static_cast<std::size_t>(k)];
    if (v > 1e-6) {
      l[k] = std::log(v);
      last = k;
    } else {
      break;
    }
  }
  if (last + 1 < pb.n) extend_tail(l, last + 1, q);
  return l;
}

// The variational equations have no real solution near the canonical shape:
// mode k requires T_k = -2 l_k - 1 - alpha - beta E_k >= 2 g zeta sqrt(k),
// while canonical amplitudes sit at T_k = 0. Suppressing the tail by the
// integrated fold bound, delta l_k ~ -(2/3) g zeta k^{3/2}, lands the
// initial guess on the feasible side; Newton then relaxes it upward.
void suppress_tail(Eigen::VectorXd& l, double g_zeta_increment) {
  for (int k = 1; k < l.size(); ++k)
    l[k] -= (2.0 / 3.0) * g_zeta_increment *
            std::pow(static_cast<double>(k), 1.5);
}

EnsembleSolution canonical_solution(double beta, const OscillatorConfig& cfg) {
  const Spectrum spec = oscillator_spectrum(cfg);
  const CanonicalSolution cs = weights_at(spec, beta);
  const int d = cfg.n_levels;

  if (cs.weights.weight(d - 1) > cfg.tail_tol)
    throw TruncationTooSmall("solve_two_constraint: canonical tail weight " +
                             std::to_string(cs.weights.weight(d - 1)) +
                             " exceeds tail tolerance; increase n_levels");

  Vector amps(d);
  for (int n = 0; n < d; ++n) amps[n] = std::sqrt(cs.weights.weight(n));
  StateVector state(std::move(amps), StateVector::unchecked_t{});

  const double zt = zeta(state).real();
  const double alpha = cs.alpha - 1.0;  // lambda_n^2 = e^{-1 - alpha - beta E_n}

  OscProblem pb{beta, 0.0, cfg.quantum(), d};
  Eigen::VectorXd l(d);
  for (int n = 0; n < d; ++n)
    l[n] = 0.5 * (-cs.alpha - beta * pb.level(n));  // exact, no underflow
  const Eigen::VectorXd res = residual_all_modes(pb, l, alpha);
  double rmax = 0.0;
  for (int n = 0; n < d; ++n)
    if (l[n] > std::log(tol::amp_floor)) rmax = std::max(rmax, std::abs(res[n]));

  return EnsembleSolution{
      .state = std::move(state),
      .alpha = alpha,
      .beta = beta,
      .gamma = 0.0,
      .zeta = zt,
      .energy = cs.energy,
      .classical_energy = cfg.quantum() * zt * zt,
      .residual = rmax,
      .iterations = 0,
      .hbar_omega = cfg.quantum(),
  };
}

}  // namespace

EnsembleSolution solve_two_constraint(double beta, double gamma, double lambda0,
                                      const OscillatorConfig& cfg,
                                      const SolverOptions& opts) {
  validate(cfg);
  if (!(beta > 0.0)) throw Error("solve_two_constraint: beta must be positive");
  if (!(gamma >= 0.0)) throw Error("solve_two_constraint: gamma must be nonnegative");
  if (!(lambda0 > 0.0 && lambda0 <= 1.0))
    throw Error("solve_two_constraint: lambda0 must lie in (0, 1]");

  if (gamma == 0.0) return canonical_solution(beta, cfg);

  const int d = cfg.n_levels;
  const Spectrum spec = oscillator_spectrum(cfg);
  const CanonicalSolution cs = weights_at(spec, beta);
  const double lambda0_can = std::sqrt(cs.weights.weight(0));

  Eigen::VectorXd l_can(d);
  for (int n = 0; n < d; ++n)
    l_can[n] = 0.5 * (-cs.alpha - beta * spec.level(n));
  const double alpha_can = cs.alpha - 1.0;

  OscProblem pb{beta, gamma, cfg.quantum(), d};
  std::int64_t iterations = 0;
  bool saw_negative = false;

  // Spec'd damped fixed point on (zeta, alpha); forward shooting is only
  // accurate down to |lambda| ~ 1e-8, so the result seeds the Newton polish.
  // The start is offset from the exact canonical multipliers: at those the
  // recurrence bracket vanishes identically and generation flips sign at
  // once, for every gamma > 0.
  double zt_can = 0.0;
  {
    Eigen::VectorXd tmp = l_can;
    zt_can = zeta_of(pb, tmp);
  }
  const int fp_budget = std::min(opts.max_iter, 400);
  FixedPointSeed fp = fixed_point_seed(pb, zt_can, alpha_can - 1.0, lambda0,
                                       opts.theta, fp_budget, cfg.tail_tol);
  iterations += fp.iterations;
  saw_negative = fp.usable && fp.negative;

  NewtonResult best;
  if (fp.usable && fp.gen.filled >= 2 && !fp.negative) {
    Eigen::VectorXd l0 =
        log_guess_from_prefix(pb, fp.gen.lam, fp.gen.filled, lambda0,
                              0.5 * gamma * cfg.quantum() * fp.zt);
    best = windowed_newton(pb, std::move(l0), fp.alpha,
                           std::max(50, opts.max_iter / 10));
    iterations += best.iterations;
  }

  if (!best.converged) {
    // Continuation from the canonical closed form: walk gamma (and the
    // fixed lambda_0) toward the target, Newton at each step. Each trial
    // tail is pre-suppressed past the fold for the gamma increment.
    Eigen::VectorXd l_cur = l_can;
    double alpha_cur = alpha_can;
    double s = 0.0, ds = 0.25;
    while (s < 1.0) {
      const double s_try = std::min(1.0, s + ds);
      OscProblem pb_try{beta, s_try * gamma, cfg.quantum(), d};
      const double lam0_try = (1.0 - s_try) * lambda0_can + s_try * lambda0;
      Eigen::VectorXd l0 = l_cur;
      l0[0] = std::log(lam0_try);
      const double zt_cur = zeta_of(pb, l_cur);
      suppress_tail(l0, (s_try - s) * gamma * cfg.quantum() * zt_cur);
      NewtonResult nr = windowed_newton(pb_try, std::move(l0), alpha_cur,
                                        std::max(50, opts.max_iter / 20));
      iterations += nr.iterations;
      if (nr.converged) {
        l_cur = nr.l;
        alpha_cur = nr.alpha;
        s = s_try;
        ds = std::min(2.0 * ds, 0.25);
        if (s >= 1.0) best = nr;
      } else {
        ds *= 0.5;
        if (ds < 1.0 / 512.0) break;
      }
      if (iterations > opts.max_iter) break;
    }
  }

  if (!best.converged) {
    if (saw_negative)
      throw NonPositiveAmplitude(
          "solve_two_constraint: recurrence produced a nonpositive amplitude "
          "above the tail floor; (beta, gamma, lambda0) appears infeasible");
    throw NoConvergence("solve_two_constraint: iteration cap reached without "
                        "meeting the residual tolerance");
  }

  const Eigen::VectorXd& l = best.l;
  const double alpha = best.alpha;

  Vector amps(d);
  for (int n = 0; n < d; ++n) amps[n] = std::exp(l[n]);
  StateVector state(std::move(amps), StateVector::unchecked_t{});

  if (std::norm(state.amp(d - 1)) > cfg.tail_tol)
    throw TruncationTooSmall("solve_two_constraint: |lambda_{N-1}|^2 = " +
                             std::to_string(std::norm(state.amp(d - 1))) +
                             " exceeds tail tolerance; increase n_levels");

  const Eigen::VectorXd res = residual_all_modes(pb, l, alpha);
  const double log_floor = std::log(tol::amp_floor);
  double rmax = 0.0;
  for (int n = 0; n < d; ++n)
    if (l[n] > log_floor) rmax = std::max(rmax, std::abs(res[n]));
  if (rmax > opts.solver_tol)
    throw NoConvergence("solve_two_constraint: converged point has residual " +
                        std::to_string(rmax) + " above solver tolerance");

  const double zt = zeta_of(pb, l);
  double energy = 0.0;
  for (int n = 0; n < d; ++n) energy += std::norm(state.amp(n)) * spec.level(n);

  return EnsembleSolution{
      .state = std::move(state),
      .alpha = alpha,
      .beta = beta,
      .gamma = gamma,
      .zeta = zt,
      .energy = energy,
      .classical_energy = cfg.quantum() * zt * zt,
      .residual = rmax,
      .iterations = iterations,
      .hbar_omega = cfg.quantum(),
  };
}

AsymptoticProfile asymptotic_profile(const EnsembleSolution& sol) {
  if (!(sol.gamma > 0.0) || !(sol.zeta > 0.0))
    throw Error("asymptotic_profile: requires gamma > 0 and zeta > 0");

  const double q = 0.5 * sol.gamma * sol.zeta * sol.hbar_omega;
  const double ln_q = std::log(q);

  const StateVector& st = sol.state;
  int n_max = -1;
  for (int n = 2; n < st.dim(); ++n) {
    if (std::abs(st.amp(n)) > tol::amp_floor)
      n_max = n;
    else
      break;
  }
  if (n_max < 9)  // need at least 8 usable profile points
    throw InsufficientTail("asymptotic_profile: fewer than 8 amplitudes above the floor");

  AsymptoticProfile prof;
  prof.n_start = 2;
  double ln_c = 0.0;
  for (int n = 2; n <= n_max; ++n) {
    const double half_ln = 0.5 * std::log(static_cast<double>(n));
    ln_c += half_ln + std::log(half_ln);  // c_n = c_{n-1} sqrt(n) ln sqrt(n)
    const double x = std::exp(std::log(std::abs(st.amp(n))) + ln_c -
                              static_cast<double>(n) * ln_q);
    if (!std::isfinite(x))
      throw Error("asymptotic_profile: profile value not representable");
    prof.x.push_back(x);
  }

  const std::size_t n_ratios = prof.x.size() - 1;
  const std::size_t quart = std::max<std::size_t>(1, n_ratios / 4);
  double drift = 0.0;
  for (std::size_t i = n_ratios - quart; i < n_ratios; ++i)
    drift = std::max(drift, std::abs(prof.x[i + 1] / prof.x[i] - 1.0));
  prof.ratio_drift = drift;
  return prof;
}

}  // namespace gqme
