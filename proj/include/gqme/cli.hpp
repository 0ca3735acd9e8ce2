#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gqme::cli {

enum class Format { csv, json };

struct RunConfig {
  double hbar = 1.0;
  double mass = 1.0;
  double omega = 1.0;
  double kb = 1.0;
  std::uint64_t seed = 0;
  std::string out;  // empty -> stdout (oscillator uses it as a file prefix)
  Format format = Format::csv;
  std::map<std::string, double> tol_overrides;
};

// Exit codes shared by all subcommands.
inline constexpr int kOk = 0;
inline constexpr int kRunFailure = 1;
inline constexpr int kBadArguments = 2;

// Canonical ensemble sweep over a fixed level list: rows E, beta, S, C.
// Out-of-range targets are skipped with a structured warning on stderr.
int cmd_nlevel(const RunConfig& rc, std::vector<double> levels, double sweep_min,
               double sweep_max, int sweep_count);

// Compares time averaging, exact torus-grid integration and the closed forms
// on a random state and random Hermitian A, B over a jittered
// gap-nondegenerate spectrum. Nonzero exit if analytic and grid values
// disagree beyond 1e-10.
int cmd_verify_ergodic(const RunConfig& rc, int dim);

// Two-constraint ensemble solve; writes <out>.solution.json, <out>.weights.csv,
// <out>.profile.csv and <out>.portrait.csv.
int cmd_oscillator(const RunConfig& rc, double beta, double gamma,
                   std::optional<double> lambda0, int n_levels);

// Coherent-state report: computed E, E_cl, <Q>_max, <P>_max next to their
// closed-form predictions.
int cmd_coherent(const RunConfig& rc, double z_sq, int n_levels);

}  // namespace gqme::cli
