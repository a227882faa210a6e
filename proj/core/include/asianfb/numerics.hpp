#pragma once

#include <span>
#include <vector>

namespace asianfb {

/// Tridiagonal system sub[i] x[i-1] + diag[i] x[i] + super[i] x[i+1] = rhs[i].
/// sub[0] and super[size-1] are ignored.
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;
    std::vector<double> rhs;

    explicit TridiagonalSystem(std::size_t size = 0)
        : sub(size, 0.0), diag(size, 0.0), super(size, 0.0), rhs(size, 0.0) {}

    std::size_t size() const noexcept { return diag.size(); }

    /// ||A x - rhs||_inf
    double residual_inf(std::span<const double> x) const;
};

/// Thomas elimination. Throws SingularPivotError with the offending row.
std::vector<double> thomas_solve(const TridiagonalSystem& system);

/// Composite trapezoid rule on a uniform grid with step h.
double trapezoid(std::span<const double> values, double h);

/// Piecewise-linear interpolation of nodal values on the uniform grid
/// x_i = i h. Arguments past the last node return `above`.
double interpolate_uniform(std::span<const double> values, double h, double x, double above);

} // namespace asianfb
