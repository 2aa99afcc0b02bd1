#pragma once

#include <stdexcept>
#include <string>

namespace herald {

// Invalid or inconsistent input (bad parameters, out-of-range indices,
// malformed flags). The CLI maps these to exit code 2.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure: singular systems, non-convergence, step-size underflow,
// trace drift. The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularParametersError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IntegrationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Two slow Liouvillian eigenvalues too close to tell which one is the
// heralded decay rate.
class SpectralAmbiguityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// The fidelity maximum sits on the edge of the sampled window; the caller
// should widen the window and rerun.
class InconclusiveWindowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace herald
