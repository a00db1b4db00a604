#pragma once

#include <stdexcept>
#include <string>

namespace pnarrow {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The requested operation is not defined for this pulse shape.
class UnsupportedShape : public Error {
public:
    using Error::Error;
};

/// A step, sample or cell budget would be exceeded.
class ResourceLimit : public Error {
public:
    using Error::Error;
};

class DegenerateSampling : public Error {
public:
    using Error::Error;
};

/// Mixing angle is undefined on resonance.
class SingularConfiguration : public Error {
public:
    using Error::Error;
};

/// Root bracket failed; carries the residuals at both bracket ends.
class NoRoot : public Error {
public:
    NoRoot(const std::string& what, double lower_residual, double upper_residual)
        : Error(what), lower_residual_(lower_residual), upper_residual_(upper_residual) {}

    double lower_residual() const noexcept { return lower_residual_; }
    double upper_residual() const noexcept { return upper_residual_; }

private:
    double lower_residual_;
    double upper_residual_;
};

/// A width or slope measurement could not be made on the given grid.
class Inconclusive : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace pnarrow
