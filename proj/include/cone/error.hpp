#pragma once

#include <stdexcept>
#include <string>

namespace cone {

// Root of all library exceptions. `numerical()` separates engineering faults
// (quadrature, truncation) from invalid input.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual bool numerical() const noexcept { return false; }
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class UnsupportedCrossSection : public Error {
public:
    using Error::Error;
};

class AliasingError : public Error {
public:
    using Error::Error;
};

class EmptySpectrum : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class TipSupportError : public Error {
public:
    using Error::Error;
};

class RegimeError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
    bool numerical() const noexcept override { return true; }
};

class QuadratureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class BoundaryError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace cone
