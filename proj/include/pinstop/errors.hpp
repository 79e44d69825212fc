#pragma once

#include <stdexcept>
#include <string>

namespace pinstop {

/// Argument outside the mathematical domain of an operation (e.g. t >= 1).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Invalid run configuration (grid sizes, path counts, priors out of range).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Bracketing failed: endpoints agree in sign.
class NoSignChange : public std::runtime_error {
public:
    explicit NoSignChange(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative method exceeded its iteration cap.
class MaxIterations : public std::runtime_error {
public:
    explicit MaxIterations(const std::string& what) : std::runtime_error(what) {}
};

/// Searched quantity does not exist in the searched range.
class NotFound : public std::runtime_error {
public:
    explicit NotFound(const std::string& what) : std::runtime_error(what) {}
};

/// PSOR sweep failed to reach tolerance within the iteration cap.
class NonConvergence : public std::runtime_error {
public:
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pinstop
