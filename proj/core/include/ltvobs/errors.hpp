#pragma once

#include <stdexcept>
#include <string>

namespace ltvobs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Matrix shape disagreement between declared and evaluated dimensions.
struct DimensionError : Error {
    using Error::Error;
};

// Requested derivative order exceeds what the function provides.
struct SmoothnessError : Error {
    using Error::Error;
};

// Non-finite values produced while integrating; carries the offending time.
struct IntegrationError : Error {
    IntegrationError(const std::string& what, double time)
        : Error(what), time(time) {}
    double time;
};

struct NumericError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// Riccati covariance lost positive definiteness.
struct CovarianceError : Error {
    CovarianceError(const std::string& what, double time)
        : Error(what), time(time) {}
    double time;
};

}  // namespace ltvobs
