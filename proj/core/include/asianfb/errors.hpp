#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asianfb {

/// Argument outside the domain of a formula (t <= 0, x <= 0, bad parameters).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Zero (or numerically zero) pivot met during tridiagonal elimination.
class SingularPivotError : public std::runtime_error {
public:
    SingularPivotError(std::size_t row, const std::string& what)
        : std::runtime_error(what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// The time-stepping scheme produced non-finite values or an out-of-range
/// boundary. Carries the failing time index.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::size_t step, const std::string& what)
        : std::runtime_error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Root bracketing failed.
class RootFindingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative solver hit its sweep cap.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(std::size_t step, const std::string& what)
        : std::runtime_error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

} // namespace asianfb
