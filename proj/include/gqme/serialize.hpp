#pragma once

#include <string>

#include <json.hpp>

#include "gqme/hilbert.hpp"
#include "gqme/maxent.hpp"
#include "gqme/oscillator.hpp"
#include "gqme/phase_average.hpp"

namespace gqme {

using Json = nlohmann::json;

// Complex amplitudes serialize as [re, im] pairs.
Json to_json(const StateVector& psi);
Json to_json(const Spectrum& spec);
Json to_json(const DephasedDensity& rho);
Json to_json(const AverageReport& report);
Json to_json(const CanonicalSolution& sol);
Json to_json(const EnsembleSolution& sol);
Json to_json(const AsymptoticProfile& prof);

StateVector state_from_json(const Json& j);
Spectrum spectrum_from_json(const Json& j);

// Shortest round-trip decimal form of a double (17 significant digits).
std::string format_full(double v);

}  // namespace gqme
