#include "gqme/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gqme/maxent.hpp"
#include "gqme/oscillator.hpp"
#include "gqme/phase_average.hpp"
#include "gqme/random.hpp"
#include "gqme/serialize.hpp"

namespace gqme::cli {

namespace {

double tol_or(const RunConfig& rc, const std::string& name, double fallback) {
  const auto it = rc.tol_overrides.find(name);
  return it == rc.tol_overrides.end() ? fallback : it->second;
}

bool check_tol_names(const RunConfig& rc) {
  static const char* known[] = {"gap_tol",     "tail_tol", "solver_tol", "e_tol",
                                "grid_budget", "theta",    "max_iter"};
  for (const auto& [name, value] : rc.tol_overrides) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
          return name == k;
        }) == std::end(known)) {
      std::cerr << Json{{"error", "unknown tolerance name"}, {"name", name}}.dump()
                << "\n";
      return false;
    }
    (void)value;
  }
  return true;
}

void warn(const Json& record) { std::cerr << record.dump() << "\n"; }

int emit(const RunConfig& rc, const std::string& text) {
  if (rc.out.empty()) {
    std::cout << text;
    return kOk;
  }
  std::ofstream f(rc.out, std::ios::binary);
  if (!f) {
    warn(Json{{"error", "cannot open output file"}, {"path", rc.out}});
    return kRunFailure;
  }
  f << text;
  return kOk;
}

int write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    warn(Json{{"error", "cannot open output file"}, {"path", path}});
    return kRunFailure;
  }
  f << text;
  return kOk;
}

SolverOptions solver_options(const RunConfig& rc) {
  SolverOptions opts;
  opts.solver_tol = tol_or(rc, "solver_tol", opts.solver_tol);
  opts.theta = tol_or(rc, "theta", opts.theta);
  opts.max_iter = static_cast<int>(tol_or(rc, "max_iter", opts.max_iter));
  return opts;
}

OscillatorConfig osc_config(const RunConfig& rc, int n_levels) {
  OscillatorConfig cfg;
  cfg.mass = rc.mass;
  cfg.omega = rc.omega;
  cfg.hbar = rc.hbar;
  cfg.n_levels = n_levels;
  cfg.tail_tol = tol_or(rc, "tail_tol", cfg.tail_tol);
  return cfg;
}

}  // namespace

int cmd_nlevel(const RunConfig& rc, std::vector<double> levels, double sweep_min,
               double sweep_max, int sweep_count) {
  if (!check_tol_names(rc)) return kBadArguments;
  if (levels.size() < 2) {
    warn(Json{{"error", "nlevel needs at least 2 levels"}});
    return kBadArguments;
  }
  if (sweep_count < 1 || !(sweep_min <= sweep_max)) {
    warn(Json{{"error", "invalid sweep range"}});
    return kBadArguments;
  }
  std::sort(levels.begin(), levels.end());
  const Spectrum spec(levels, rc.hbar, tol_or(rc, "gap_tol", tol::gap));
  const double e_tol = tol_or(rc, "e_tol", 1e-12);

  struct Row {
    double e, beta, s, c;
  };
  std::vector<Row> rows;
  for (int i = 0; i < sweep_count; ++i) {
    const double e =
        sweep_count == 1
            ? sweep_min
            : sweep_min + (sweep_max - sweep_min) * static_cast<double>(i) /
                              static_cast<double>(sweep_count - 1);
    try {
      const CanonicalSolution sol = solve_beta(spec, e, e_tol, rc.kb);
      rows.push_back({e, sol.beta, sol.entropy, sol.heat_capacity});
    } catch (const Error& err) {
      warn(Json{{"warning", "sweep point skipped"}, {"E", e}, {"reason", err.what()}});
    }
  }

  std::ostringstream os;
  if (rc.format == Format::csv) {
    os << "E,beta,S,C\n";
    for (const Row& r : rows)
      os << format_full(r.e) << ',' << format_full(r.beta) << ','
         << format_full(r.s) << ',' << format_full(r.c) << "\n";
  } else {
    Json arr = Json::array();
    for (const Row& r : rows)
      arr.push_back(Json{{"E", r.e}, {"beta", r.beta}, {"S", r.s}, {"C", r.c}});
    os << arr.dump(2) << "\n";
  }
  return emit(rc, os.str());
}

int cmd_verify_ergodic(const RunConfig& rc, int dim) {
  if (!check_tol_names(rc)) return kBadArguments;
  if (dim < 2 || dim > 6) {
    warn(Json{{"error", "verify-ergodic supports dim in [2, 6]"}});
    return kBadArguments;
  }

  // Unit-spaced levels with seeded jitter; redraw until both coincidence
  // flags are clear (first draw suffices in practice).
  const double gap_tol = tol_or(rc, "gap_tol", tol::gap);
  std::optional<Spectrum> spec;
  for (std::uint64_t attempt = 0; attempt < 64 && !spec; ++attempt) {
    CounterRng rng(CounterRng::derive(rc.seed, 101 + attempt));
    std::vector<double> levels(static_cast<std::size_t>(dim));
    for (int n = 0; n < dim; ++n)
      levels[static_cast<std::size_t>(n)] = n + 0.37 * rng.uniform01();
    Spectrum s(levels, rc.hbar, gap_tol);
    if (!s.degenerate() && !s.gap_degenerate()) spec.emplace(std::move(s));
  }
  if (!spec) {
    warn(Json{{"error", "could not draw a gap-nondegenerate spectrum"}});
    return kRunFailure;
  }

  CounterRng rng_state(CounterRng::derive(rc.seed, 1));
  CounterRng rng_a(CounterRng::derive(rc.seed, 2));
  CounterRng rng_b(CounterRng::derive(rc.seed, 3));
  const StateVector psi = random_state(dim, rng_state);
  const Observable a = random_hermitian(dim, rng_a);
  const Observable b = random_hermitian(dim, rng_b);

  const auto [horizon, steps] = default_time_horizon(*spec);
  const auto budget =
      static_cast<std::int64_t>(tol_or(rc, "grid_budget", tol::grid_budget));

  struct Row {
    std::string function;
    AverageReport report;
    double diff_vs_grid;
  };
  std::vector<Row> rows;
  double worst_analytic_vs_grid = 0.0;

  const auto run_function = [&](const std::string& name, const StateFunction& f,
                                double analytic_value) {
    const AverageReport grid = torus_average_grid(f, psi, budget);
    const AverageReport tavg = time_average(f, psi, *spec, horizon, steps);
    const AverageReport analytic{analytic_value, AverageMethod::analytic, 0, 0.0};
    rows.push_back({name, analytic, std::abs(analytic_value - grid.value)});
    rows.push_back({name, grid, 0.0});
    rows.push_back({name, tavg, std::abs(tavg.value - grid.value)});
    worst_analytic_vs_grid =
        std::max(worst_analytic_vs_grid, std::abs(analytic_value - grid.value));
  };

  run_function("linear", StateFunction::linear(a), linear_analytic(psi, a));
  run_function("covariance", StateFunction::covariance(a, b),
               covariance_analytic(psi, a, b));

  std::ostringstream os;
  if (rc.format == Format::csv) {
    os << "function,method,value,samples,error_estimate,diff_vs_grid\n";
    for (const Row& r : rows)
      os << r.function << ',' << to_string(r.report.method) << ','
         << format_full(r.report.value) << ',' << r.report.samples << ','
         << format_full(r.report.error_estimate) << ','
         << format_full(r.diff_vs_grid) << "\n";
  } else {
    Json arr = Json::array();
    for (const Row& r : rows) {
      Json j = to_json(r.report);
      j["function"] = r.function;
      j["diff_vs_grid"] = r.diff_vs_grid;
      arr.push_back(std::move(j));
    }
    os << arr.dump(2) << "\n";
  }
  const int emitted = emit(rc, os.str());
  if (emitted != kOk) return emitted;

  if (worst_analytic_vs_grid > 1e-10) {
    warn(Json{{"error", "analytic and grid averages disagree"},
              {"max_diff", worst_analytic_vs_grid}});
    return kRunFailure;
  }
  return kOk;
}

int cmd_oscillator(const RunConfig& rc, double beta, double gamma,
                   std::optional<double> lambda0, int n_levels) {
  if (!check_tol_names(rc)) return kBadArguments;
  const OscillatorConfig cfg = osc_config(rc, n_levels);
  const std::string prefix = rc.out.empty() ? "oscillator" : rc.out;

  double lam0 = 0.0;
  try {
    lam0 = lambda0 ? *lambda0
                   : std::sqrt(weights_at(oscillator_spectrum(cfg), beta)
                                   .weights.weight(0));
  } catch (const Error& err) {
    warn(Json{{"error", err.what()}});
    return kRunFailure;
  }

  std::optional<EnsembleSolution> solved;
  try {
    solved = solve_two_constraint(beta, gamma, lam0, cfg, solver_options(rc));
  } catch (const Error& err) {
    warn(Json{{"error", err.what()}});
    return kRunFailure;
  }
  const EnsembleSolution& sol = *solved;

  {
    std::ostringstream os;
    os << to_json(sol).dump(2) << "\n";
    if (write_file(prefix + ".solution.json", os.str()) != kOk) return kRunFailure;
  }
  {
    std::ostringstream os;
    os << "n,weight\n";
    for (int n = 0; n < sol.state.dim(); ++n)
      os << n << ',' << format_full(std::norm(sol.state.amp(n))) << "\n";
    if (write_file(prefix + ".weights.csv", os.str()) != kOk) return kRunFailure;
  }
  if (gamma > 0.0) {
    try {
      const AsymptoticProfile prof = asymptotic_profile(sol);
      std::ostringstream os;
      os << "n,x_n\n";
      for (std::size_t i = 0; i < prof.x.size(); ++i)
        os << (prof.n_start + static_cast<int>(i)) << ','
           << format_full(prof.x[i]) << "\n";
      if (write_file(prefix + ".profile.csv", os.str()) != kOk) return kRunFailure;
    } catch (const Error& err) {
      warn(Json{{"warning", "profile skipped"}, {"reason", err.what()}});
    }
  } else {
    warn(Json{{"warning", "profile skipped"}, {"reason", "gamma = 0"}});
  }
  {
    const auto pts = phase_portrait(sol.state, cfg, 256);
    std::ostringstream os;
    os << "t,q,p\n";
    for (const PortraitPoint& p : pts)
      os << format_full(p.t) << ',' << format_full(p.q) << ','
         << format_full(p.p) << "\n";
    if (write_file(prefix + ".portrait.csv", os.str()) != kOk) return kRunFailure;
  }
  return kOk;
}

int cmd_coherent(const RunConfig& rc, double z_sq, int n_levels) {
  if (!check_tol_names(rc)) return kBadArguments;
  if (z_sq < 0.0) {
    warn(Json{{"error", "z_sq must be nonnegative"}});
    return kBadArguments;
  }
  const OscillatorConfig cfg = osc_config(rc, n_levels);

  std::optional<StateVector> coh;
  try {
    coh = coherent_state(std::sqrt(z_sq), cfg);
  } catch (const Error& err) {
    warn(Json{{"error", err.what()}});
    return kRunFailure;
  }
  const StateVector& psi = *coh;
  const Spectrum spec = oscillator_spectrum(cfg);

  Matrix h = Matrix::Zero(cfg.n_levels, cfg.n_levels);
  for (int n = 0; n < cfg.n_levels; ++n) h(n, n) = spec.level(n);
  const double e = expectation(psi, Observable(std::move(h)));
  const double e_cl = classical_energy(psi, cfg);

  double q_max = 0.0, p_max = 0.0;
  for (const PortraitPoint& p : phase_portrait(psi, cfg, 512)) {
    q_max = std::max(q_max, std::abs(p.q));
    p_max = std::max(p_max, std::abs(p.p));
  }

  const double zmag = std::sqrt(z_sq);
  struct Row {
    const char* quantity;
    double computed;
    double predicted;
  };
  const Row rows[] = {
      {"E", e, cfg.quantum() * (0.5 + z_sq)},
      {"E_cl", e_cl, cfg.quantum() * z_sq},
      {"Q_max", q_max, cfg.lambda_q() * zmag},
      {"P_max", p_max, cfg.lambda_p() * zmag},
  };

  std::ostringstream os;
  if (rc.format == Format::csv) {
    os << "quantity,computed,predicted\n";
    for (const Row& r : rows)
      os << r.quantity << ',' << format_full(r.computed) << ','
         << format_full(r.predicted) << "\n";
  } else {
    Json arr = Json::array();
    for (const Row& r : rows)
      arr.push_back(Json{{"quantity", r.quantity},
                         {"computed", r.computed},
                         {"predicted", r.predicted}});
    os << arr.dump(2) << "\n";
  }
  return emit(rc, os.str());
}

}  // namespace gqme::cli
