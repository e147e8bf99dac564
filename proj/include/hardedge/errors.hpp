#pragma once

#include <stdexcept>
#include <string>

namespace hardedge {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A numerical procedure failed to reach its accuracy target.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hardedge
