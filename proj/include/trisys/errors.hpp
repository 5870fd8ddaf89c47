// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace trisys {

/// Base class for every error thrown by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A regime or argument precondition does not hold (e.g. CPQD without
/// propensities bounded away from 0 and 1, mismatched grids).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or invalid user input (observables JSON, design JSON).
class InputError : public Error {
public:
    using Error::Error;
};

/// Quadrature failed its convergence check or a computation produced NaN.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace trisys
