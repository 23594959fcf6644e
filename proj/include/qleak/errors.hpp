#pragma once

#include <stdexcept>
#include <string>

namespace qleak {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A probability vector or joint table violates non-negativity or normalization.
struct NonDistribution : Error {
    using Error::Error;
};

// Conditioning event has probability zero.
struct ZeroProbabilityEvent : Error {
    using Error::Error;
};

// Exhaustive relabeling search would exceed the configured alphabet bound.
struct AlphabetTooLarge : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NotHermitian : Error {
    using Error::Error;
};

struct NotPositiveSemidefinite : Error {
    using Error::Error;
};

// A phase function's domain does not match the support of the distribution.
struct PhaseDomainMismatch : Error {
    using Error::Error;
};

struct InvalidSpec : Error {
    using Error::Error;
};

struct TooManyParameters : Error {
    using Error::Error;
};

struct NotAPovm : Error {
    using Error::Error;
};

// Malformed input file; message carries the offending location.
struct ParseError : Error {
    using Error::Error;
};

} // namespace qleak
