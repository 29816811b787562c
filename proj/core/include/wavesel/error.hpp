#pragma once

#include <stdexcept>
#include <string>

namespace wavesel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (bad shape, bad parameter, malformed file).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A computation could not produce a finite, meaningful result.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace wavesel
