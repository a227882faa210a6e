#include "asianfb/reconstruction.hpp"

#include "asianfb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace asianfb {

double reconstruct_W(const SolutionField& field, std::size_t j, double x)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        std::ostringstream os;
        os << "reconstruct_W: price ratio must be positive, got " << x;
        throw DomainError(os.str());
    }
    if (j >= field.rho.size())
        throw DomainError("reconstruct_W: time index out of range");

    const double rho = field.rho[j];
    if (x >= rho)
        return x - 1.0;

    const std::span<const double> pi = field.row(j);
    const Grid& grid = field.grid;
    const double h = grid.h;
    // Pi vanishes past L, so the integral stops there.
    const double upper = std::min(std::log(rho / x), grid.length());

    const auto full_cells = std::min(static_cast<std::size_t>(upper / h), grid.nodes() - 1);
    double integral = 0.0;
    for (std::size_t i = 0; i < full_cells; ++i) {
        const double left = std::exp(grid.xi[i]) * pi[i];
        const double right = std::exp(grid.xi[i + 1]) * pi[i + 1];
        integral += 0.5 * h * (left + right);
    }
    const double start = grid.xi[full_cells];
    const double width = upper - start;
    if (width > 0.0 && full_cells + 1 < grid.nodes()) {
        const double w = width / h;
        const double pi_end = (1.0 - w) * pi[full_cells] + w * pi[full_cells + 1];
        integral += 0.5 * width * (std::exp(start) * pi[full_cells] + std::exp(upper) * pi_end);
    }
    return x / rho * (rho - 1.0 + integral);
}

std::size_t nearest_time_index(const Grid& grid, double tau)
{
    const double pos = std::round(tau / grid.k);
    return static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(grid.steps())));
}

double price(const PriceQuery& query, const SolutionField& field)
{
    const double T = field.params.T;
    if (!(query.S >= 0.0) || !(query.A > 0.0) || !(query.t >= 0.0 && query.t <= T)) {
        std::ostringstream os;
        os << "price: invalid query S=" << query.S << " A=" << query.A << " t=" << query.t
           << " (need S>=0, A>0, 0<=t<=" << T << ")";
        throw DomainError(os.str());
    }
    const std::size_t j = nearest_time_index(field.grid, T - query.t);
    if (query.S == 0.0)
        return 0.0;
    return query.A * reconstruct_W(field, j, query.S / query.A);
}

} // namespace asianfb
