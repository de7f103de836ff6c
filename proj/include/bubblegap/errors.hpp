#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace bubblegap {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the supported domain (order too large, k <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Evaluation at a singular point: H_n(0), alpha = (0,0) with k = 0,
// an empty-lattice pole, or a frequency inside a band.
class SingularityError : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, std::complex<double> best, double best_residual)
        : Error(what), best_(best), best_residual_(best_residual) {}
    std::complex<double> best_iterate() const { return best_; }
    double best_residual() const { return best_residual_; }

private:
    std::complex<double> best_;
    double best_residual_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// A root that is legitimately absent, e.g. no defect mode in the gap.
class NotFound : public Error {
public:
    using Error::Error;
};

// Internal consistency check failed (band maximum not at alpha2 = pi, c <= 0).
class InconsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace bubblegap
