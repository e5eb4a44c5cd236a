#pragma once

#include <stdexcept>
#include <string>

namespace wishart {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonSymmetricError : Error {
    using Error::Error;
};
struct NotPsdError : Error {
    using Error::Error;
};
struct NotSpdError : Error {
    using Error::Error;
};
struct SingularError : Error {
    using Error::Error;
};
struct NonFiniteError : Error {
    using Error::Error;
};
struct OutOfDomainError : Error {
    using Error::Error;
};
struct ConditionFailedError : Error {
    using Error::Error;
};
struct NotConvergedError : Error {
    using Error::Error;
};
struct OnBoundaryError : Error {
    using Error::Error;
};
struct PlateauRegimeError : Error {
    using Error::Error;
};
struct NegativeRadicandError : Error {
    using Error::Error;
};
struct DegenerateYError : Error {
    using Error::Error;
};
struct OutOfPlateauError : Error {
    using Error::Error;
};
struct DegenerateCError : Error {
    using Error::Error;
};
struct OutOfBoundsError : Error {
    using Error::Error;
};
struct NumericalError : Error {
    using Error::Error;
};

}  // namespace wishart
