#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pursuit {

/// Root of every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter outside its documented domain (negative a_max, dt > t_max, ...).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Pursuer and evader occupy the same point, so the line of sight is undefined.
class CoincidentAgents : public Error {
public:
    CoincidentAgents() : Error("pursuer and evader positions coincide") {}
};

/// Semi-implicit Euler with mu*dt >= 1 flips the sign of the damping factor.
class UnstableStep : public Error {
public:
    using Error::Error;
};

/// Per-step displacement is too large for discrete capture detection.
class StepTooCoarse : public Error {
public:
    using Error::Error;
};

class InvalidDirection : public Error {
public:
    using Error::Error;
};

/// A pursuit law was asked to act for the evader, or vice versa.
class PolicyMismatch : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

/// Malformed policy weight file. `where()` is a byte offset or a field path.
class WeightFileError : public Error {
public:
    WeightFileError(const std::string& what, std::string where)
        : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

class NoBoundary : public Error {
public:
    using Error::Error;
};

class DegenerateFit : public Error {
public:
    using Error::Error;
};

/// Malformed CSV input; `line()` is 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace pursuit
