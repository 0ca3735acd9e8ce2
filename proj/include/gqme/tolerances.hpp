#pragma once

#include <cstdint>

namespace gqme::tol {

// Unit-norm check on states and weight vectors.
inline constexpr double norm = 1e-10;

// Entrywise Hermiticity check and imaginary-residue check on expectation values.
inline constexpr double herm = 1e-10;

// Level / level-gap coincidence detection.
inline constexpr double gap = 1e-9;

// Amplitudes at or below this magnitude carry no integrable phase.
inline constexpr double amp_floor = 1e-14;

// normalize() rejects inputs whose norm is below this (squared norm would
// underflow long before the quotient becomes meaningless).
inline constexpr double underflow = 1e-150;

// Default cap on the number of torus grid points.
inline constexpr std::int64_t grid_budget = 1'000'000;

// Oscillator truncation: require |amps[N-1]|^2 <= tail.
inline constexpr double tail = 1e-12;

// Componentwise residual target for the two-constraint solver.
inline constexpr double solver = 1e-9;

}  // namespace gqme::tol
