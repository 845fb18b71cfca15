#pragma once

#include <stdexcept>
#include <string>

namespace flexsim {

/// Bad or inconsistent configuration (file contents or parameter values).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver failed to converge or produced a non-finite result.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// The rotated surface is not a graph y(x) over the requested window.
class NonGraphError : public std::runtime_error {
public:
    explicit NonGraphError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace flexsim
