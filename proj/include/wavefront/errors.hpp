#pragma once

#include <stdexcept>
#include <string>

namespace wavefront {

/// Base class for all domain errors thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A kernel failed its construction contract (negative weight, weights not
/// summing to one, non-positive rate or variance, ...).
class IllFormedKernel : public Error {
public:
    using Error::Error;
};

/// A Laplace moment was requested within the machine neighbourhood of a
/// finite convergence abscissa; the value is unreliable either way.
/// Carries the abscissa and the one-sided limit estimate when available.
class AbscissaBoundary : public Error {
public:
    AbscissaBoundary(const std::string& what, double abscissa, double limit)
        : Error(what), abscissa_(abscissa), limit_(limit) {}
    double abscissa() const { return abscissa_; }
    double one_sided_limit() const { return limit_; }

private:
    double abscissa_;
    double limit_;
};

/// Speed bisection found no sign change within |c| <= 1e6.
class BracketFailure : public Error {
public:
    using Error::Error;
};

/// |beta + c z - z^2| fell below 1e-12 in the characteristic identity.
class DenominatorNearZero : public Error {
public:
    using Error::Error;
};

/// cz + alpha <= 0 in the epidemic characteristic function.
class DenominatorNonPositive : public Error {
public:
    using Error::Error;
};

/// Sampled derivative overflowed while selecting beta.
class NonFiniteDerivative : public Error {
public:
    using Error::Error;
};

/// The requested grid cannot resolve the decay scale 1/lambda_1.
class GridTooCoarse : public Error {
public:
    using Error::Error;
};

/// phi(-T) is not small at convergence; the window truncates the wave.
class WindowTooSmall : public Error {
public:
    using Error::Error;
};

/// Fewer than 20 usable tail points for the decay fit.
class TailTooShort : public Error {
public:
    using Error::Error;
};

/// Configuration parsing/validation failure with a JSON-path diagnostic.
class ConfigError : public Error {
public:
    ConfigError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

}  // namespace wavefront
