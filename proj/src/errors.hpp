#ifndef DNAK_ERRORS_HPP
#define DNAK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dnak {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument or parameter outside its documented domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Adaptive quadrature ran out of subdivisions before meeting the tolerance.
// Carries the best estimate obtained and the bound on its error.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best, double err)
        : Error(what), best_estimate(best), err_bound(err) {}
    double best_estimate;
    double err_bound;
};

// An internal numerical self-check failed (e.g. a stationarity residual).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// Invalid simulation or sweep configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace dnak

#endif
