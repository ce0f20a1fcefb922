#pragma once

#include <stdexcept>
#include <string>

namespace cmc {

// Input outside the mathematical domain of an operation (CLI exit code 1).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Numerical failure: non-convergence, drift, closure defects (CLI exit code 2).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, double estimate = 0.0)
        : std::runtime_error(what), estimate_(estimate) {}
    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

} // namespace cmc
