#pragma once

#include <stdexcept>
#include <string>

namespace qwi {

// Bad model parameters or malformed configuration input.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A computation left its domain of validity: a root bracket could not be
// stabilised, an exponential envelope would overflow, a consistency residual
// exceeded its tolerance, and so on.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// The impedance was evaluated at (or numerically on top of) a node of the
// wave function, where Z = -i hbar psi'/(m psi) diverges.
struct PoleError : NumericalError {
    explicit PoleError(const std::string& what) : NumericalError(what) {}
};

} // namespace qwi
