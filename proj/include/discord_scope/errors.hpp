#pragma once

#include <stdexcept>
#include <string>

namespace dscope {

// Base for every error raised by the library. The CLI maps subclasses to
// exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonHermitianInput : public Error {
public:
    using Error::Error;
};

// Eigenvalues below the round-off clamp window.
class InvalidDensityMatrix : public Error {
public:
    using Error::Error;
};

class InvalidWeights : public Error {
public:
    using Error::Error;
};

// Malformed state-spec document; field() names the offending JSON path.
class InvalidSpec : public Error {
public:
    InvalidSpec(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class ZeroMeanTerm : public Error {
public:
    using Error::Error;
};

class VerificationFailed : public Error {
public:
    using Error::Error;
};

class InsufficientPhases : public Error {
public:
    using Error::Error;
};

class DegenerateDesign : public Error {
public:
    using Error::Error;
};

}  // namespace dscope
