#pragma once

#include <stdexcept>
#include <string>

namespace gqme {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroVector : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NonHermitian : Error {
  using Error::Error;
};

struct NonFinite : Error {
  using Error::Error;
};

struct BudgetExceeded : Error {
  using Error::Error;
};

struct UnknownDegree : Error {
  using Error::Error;
};

struct OutOfRange : Error {
  using Error::Error;
};

// Spectrum consists of a single repeated level; no inverse-temperature root exists.
struct DegenerateSpectrum : Error {
  using Error::Error;
};

struct Overflow : Error {
  using Error::Error;
};

struct NoConvergence : Error {
  using Error::Error;
};

struct TruncationTooSmall : Error {
  using Error::Error;
};

struct NonPositiveAmplitude : Error {
  using Error::Error;
};

struct InsufficientTail : Error {
  using Error::Error;
};

}  // namespace gqme
