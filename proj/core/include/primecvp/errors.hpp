#pragma once

#include <stdexcept>
#include <string>

namespace primecvp {

// Every failure raised by the library derives from Error so callers can
// catch the whole family at the CLI boundary.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The composite handed to the lattice builder is even, prime or too small.
class InvalidInstance : public Error {
public:
    using Error::Error;
};

/// Basis columns are linearly dependent (a Gram-Schmidt norm vanished).
class DegenerateBasis : public Error {
public:
    using Error::Error;
};

/// A requested enumeration or simulation exceeds its configured cap.
class ResourceLimit : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// The objective handed to the optimizer returned NaN or infinity.
class OptimizerError : public Error {
public:
    using Error::Error;
};

}  // namespace primecvp
