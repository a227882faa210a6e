#include "asianfb/numerics.hpp"

#include "asianfb/errors.hpp"

#include <cmath>
#include <sstream>

namespace asianfb {

double TridiagonalSystem::residual_inf(std::span<const double> x) const
{
    const std::size_t n = size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double ax = diag[i] * x[i];
        if (i > 0) ax += sub[i] * x[i - 1];
        if (i + 1 < n) ax += super[i] * x[i + 1];
        worst = std::max(worst, std::abs(ax - rhs[i]));
    }
    return worst;
}

std::vector<double> thomas_solve(const TridiagonalSystem& system)
{
    const std::size_t n = system.size();
    std::vector<double> c(n, 0.0);
    std::vector<double> x(n, 0.0);
    if (n == 0)
        return x;

    auto pivot_check = [](std::size_t row, double pivot, double scale) {
        if (!(std::abs(pivot) > 1e-300) || !std::isfinite(pivot) ||
            std::abs(pivot) <= 1e-14 * scale) {
            std::ostringstream os;
            os << "thomas_solve: singular pivot " << pivot << " at row " << row;
            throw SingularPivotError(row, os.str());
        }
    };

    double pivot = system.diag[0];
    pivot_check(0, pivot, std::abs(system.diag[0]) + std::abs(n > 1 ? system.super[0] : 0.0));
    c[0] = n > 1 ? system.super[0] / pivot : 0.0;
    x[0] = system.rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = system.diag[i] - system.sub[i] * c[i - 1];
        const double scale = std::abs(system.diag[i]) + std::abs(system.sub[i]) +
                             (i + 1 < n ? std::abs(system.super[i]) : 0.0);
        pivot_check(i, pivot, scale);
        c[i] = i + 1 < n ? system.super[i] / pivot : 0.0;
        x[i] = (system.rhs[i] - system.sub[i] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] -= c[i] * x[i + 1];
    return x;
}

double trapezoid(std::span<const double> values, double h)
{
    if (values.size() < 2)
        return 0.0;
    double sum = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i)
        sum += values[i];
    return h * sum;
}

double interpolate_uniform(std::span<const double> values, double h, double x, double above)
{
    const std::size_t last = values.size() - 1;
    const double pos = x / h;
    if (pos >= static_cast<double>(last))
        return pos == static_cast<double>(last) ? values[last] : above;
    if (pos <= 0.0)
        return values[0];
    const auto cell = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(cell);
    return (1.0 - w) * values[cell] + w * values[cell + 1];
}

} // namespace asianfb
