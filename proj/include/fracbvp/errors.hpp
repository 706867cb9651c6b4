#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracbvp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// frac-core
class DomainError : public Error {
public:
    using Error::Error;
};

/// Gamma(t+1) has a pole while Gamma(t+1-nu) does not; the ratio is undefined.
class PoleNumerator : public DomainError {
public:
    using DomainError::DomainError;
};

// expr
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& message)
        : Error("syntax error at column " + std::to_string(position) + ": " + message),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class UnknownIdentifier : public SyntaxError {
public:
    UnknownIdentifier(std::size_t position, const std::string& name)
        : SyntaxError(position, "unknown identifier '" + name + "'"), name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class EvalError : public Error {
public:
    using Error::Error;
};

// green-solver
class ValidationError : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

class DegenerateCone : public Error {
public:
    using Error::Error;
};

class Diverged : public Error {
public:
    using Error::Error;
};

class MaxIterations : public Error {
public:
    using Error::Error;
};

class SingularJacobian : public Error {
public:
    using Error::Error;
};

class NegativeSolution : public Error {
public:
    using Error::Error;
};

}  // namespace fracbvp
