#pragma once

#include "gqme/hilbert.hpp"
#include "gqme/rng.hpp"

namespace gqme {

// Haar-like random unit state: i.i.d. complex Gaussian amplitudes, normalized.
StateVector random_state(int dim, CounterRng& rng);

// GUE-like random Hermitian matrix with O(1) entries.
Observable random_hermitian(int dim, CounterRng& rng);

// Random state with <H> equal to `energy_target`: Gaussian amplitudes whose
// magnitudes are exponentially tilted, exp(-tau E_n / 2), with tau solved so
// the energy constraint holds; phases are kept. Throws OutOfRange when the
// target is outside the open level interval.
StateVector random_state_with_energy(const Spectrum& spec, double energy_target,
                                     CounterRng& rng, double e_tol = 1e-13);

}  // namespace gqme
