#pragma once

#include <stdexcept>
#include <string>

namespace weylcurv {

// Error hierarchy shared by the library and the CLI front end. The CLI maps
// these onto its exit-code contract: parse/shape/dimension -> 2,
// degeneracy -> 3, class -> 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class DegeneracyError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

// Raised when a tensor is fed to an operation that needs a stronger symmetry
// class than it has; carries the label of the first violated identity.
class ClassError : public Error {
public:
    ClassError(std::string violated, const std::string& message)
        : Error(message), violated_(std::move(violated)) {}

    const std::string& violated() const noexcept { return violated_; }

private:
    std::string violated_;
};

}  // namespace weylcurv
