#include "gqme/serialize.hpp"

#include <cstdio>

namespace gqme {

namespace {

Json complex_list(const Vector& v) {
  Json arr = Json::array();
  for (int n = 0; n < v.size(); ++n)
    arr.push_back(Json::array({v[n].real(), v[n].imag()}));
  return arr;
}

}  // namespace

Json to_json(const StateVector& psi) { return complex_list(psi.amps()); }

Json to_json(const Spectrum& spec) {
  return Json{{"levels", spec.levels()},
              {"hbar", spec.hbar()},
              {"degenerate", spec.degenerate()},
              {"gap_degenerate", spec.gap_degenerate()}};
}

Json to_json(const DephasedDensity& rho) { return Json(rho.weights()); }

Json to_json(const AverageReport& report) {
  return Json{{"value", report.value},
              {"method", to_string(report.method)},
              {"samples", report.samples},
              {"error_estimate", report.error_estimate}};
}

Json to_json(const CanonicalSolution& sol) {
  return Json{{"beta", sol.beta},
              {"alpha", sol.alpha},
              {"weights", sol.weights.weights()},
              {"energy", sol.energy},
              {"entropy", sol.entropy},
              {"heat_capacity", sol.heat_capacity}};
}

Json to_json(const EnsembleSolution& sol) {
  return Json{{"state", to_json(sol.state)},
              {"alpha", sol.alpha},
              {"beta", sol.beta},
              {"gamma", sol.gamma},
              {"zeta", sol.zeta},
              {"energy", sol.energy},
              {"classical_energy", sol.classical_energy},
              {"residual", sol.residual},
              {"iterations", sol.iterations},
              {"hbar_omega", sol.hbar_omega}};
}

Json to_json(const AsymptoticProfile& prof) {
  return Json{{"n_start", prof.n_start},
              {"x", prof.x},
              {"ratio_drift", prof.ratio_drift}};
}

StateVector state_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    throw Error("state_from_json: expected a nonempty array of [re, im] pairs");
  Vector v(static_cast<int>(j.size()));
  int n = 0;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 2)
      throw Error("state_from_json: each amplitude must be an [re, im] pair");
    v[n++] = Complex(entry[0].get<double>(), entry[1].get<double>());
  }
  return StateVector(std::move(v));
}

Spectrum spectrum_from_json(const Json& j) {
  return Spectrum(j.at("levels").get<std::vector<double>>(),
                  j.value("hbar", 1.0));
}

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace gqme
