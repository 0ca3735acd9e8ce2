#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gqme/cli.hpp"

namespace {

// "--tol name=value" entries.
bool parse_tol(const std::vector<std::string>& entries, gqme::cli::RunConfig& rc) {
  for (const std::string& e : entries) {
    const auto pos = e.find('=');
    if (pos == std::string::npos || pos == 0 || pos + 1 == e.size()) {
      std::cerr << "bad --tol entry (expected name=value): " << e << "\n";
      return false;
    }
    try {
      rc.tol_overrides[e.substr(0, pos)] = std::stod(e.substr(pos + 1));
    } catch (const std::exception&) {
      std::cerr << "bad --tol value: " << e << "\n";
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized quantum microcanonical ensemble toolkit"};
  app.require_subcommand(1);

  gqme::cli::RunConfig rc;
  std::string format = "csv";
  std::vector<std::string> tol_entries;
  app.add_option("--hbar", rc.hbar, "Reduced Planck constant")->capture_default_str();
  app.add_option("--mass", rc.mass, "Oscillator mass")->capture_default_str();
  app.add_option("--omega", rc.omega, "Oscillator angular frequency")->capture_default_str();
  app.add_option("--kb", rc.kb, "Boltzmann constant")->capture_default_str();
  app.add_option("--seed", rc.seed, "Random stream seed")->capture_default_str();
  app.add_option("--out", rc.out, "Output file (oscillator: file prefix); stdout if omitted");
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--tol", tol_entries, "Tolerance override name=value (repeatable)");

  auto* nlevel = app.add_subcommand("nlevel", "Canonical ensemble sweep over fixed levels");
  std::vector<double> levels;
  double sweep_min = 0.0, sweep_max = 0.0;
  int sweep_count = 0;
  nlevel->add_option("--levels", levels, "Energy levels")->required()->delimiter(',');
  nlevel->add_option("--sweep-min", sweep_min, "Lowest target energy")->required();
  nlevel->add_option("--sweep-max", sweep_max, "Highest target energy")->required();
  nlevel->add_option("--sweep-count", sweep_count, "Number of sweep points")->required();

  auto* verify = app.add_subcommand("verify-ergodic",
                                    "Time average vs torus grid vs closed forms");
  int dim = 4;
  verify->add_option("--dim", dim, "State dimension (2..6)")->capture_default_str();

  auto* osc = app.add_subcommand("oscillator", "Two-constraint ensemble solve");
  double beta = 1.0, gamma = 0.0;
  std::optional<double> lambda0;
  int n_levels = 120;
  osc->add_option("--beta", beta, "Energy multiplier")->required();
  osc->add_option("--gamma", gamma, "Classical-energy multiplier")->required();
  osc->add_option("--lambda0", lambda0,
                  "Ground amplitude; canonical value if omitted");
  osc->add_option("--nlevels", n_levels, "Truncation dimension")->capture_default_str();

  auto* coh = app.add_subcommand("coherent", "Coherent-state report");
  double z_sq = 1.0;
  int coh_levels = 40;
  coh->add_option("--zsq", z_sq, "|z|^2")->required();
  coh->add_option("--nlevels", coh_levels, "Truncation dimension")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gqme::cli::kBadArguments;
  }

  if (!parse_tol(tol_entries, rc)) return gqme::cli::kBadArguments;

  try {
    if (nlevel->parsed())
      return gqme::cli::cmd_nlevel(rc, levels, sweep_min, sweep_max, sweep_count);
    if (verify->parsed()) return gqme::cli::cmd_verify_ergodic(rc, dim);
    if (osc->parsed())
      return gqme::cli::cmd_oscillator(rc, beta, gamma, lambda0, n_levels);
    if (coh->parsed()) return gqme::cli::cmd_coherent(rc, z_sq, coh_levels);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return gqme::cli::kRunFailure;
  }
  return gqme::cli::kBadArguments;
}
