#pragma once

#include <stdexcept>
#include <string>

namespace nlab {

// Input rejected by a documented precondition.
class GuardViolation : public std::invalid_argument {
public:
    explicit GuardViolation(const std::string& what) : std::invalid_argument(what) {}
};

// A computation that could not produce a trustworthy number.
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

// Malformed configuration or serialized input.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nlab
