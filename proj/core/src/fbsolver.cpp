#include "asianfb/fbsolver.hpp"

#include "asianfb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace asianfb {

namespace {

constexpr double kMaxLogRho = 10.0;

bool all_finite(std::span<const double> v)
{
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

const char* to_string(TransportLookup lookup)
{
    return lookup == TransportLookup::Linear ? "linear" : "nearest";
}

const char* to_string(InnerIteration inner)
{
    return inner == InnerIteration::Plain ? "plain" : "secant";
}

TransportLookup parse_transport_lookup(std::string_view name)
{
    if (name == "linear") return TransportLookup::Linear;
    if (name == "nearest") return TransportLookup::NearestNode;
    throw DomainError("unknown transport lookup '" + std::string(name) + "' (expected linear|nearest)");
}

InnerIteration parse_inner_iteration(std::string_view name)
{
    if (name == "plain") return InnerIteration::Plain;
    if (name == "secant") return InnerIteration::Secant;
    throw DomainError("unknown inner iteration '" + std::string(name) + "' (expected plain|secant)");
}

void NumericalParams::validate() const
{
    if (n < 3 || m < 1 || !(L > 0.0) || !std::isfinite(L) || p_max < 1 || !(toll > 0.0)) {
        std::ostringstream os;
        os << "invalid numerical parameters: need n>=3, m>=1, L>0, p_max>=1, toll>0; got n=" << n
           << " m=" << m << " L=" << L << " p_max=" << p_max << " toll=" << toll;
        throw DomainError(os.str());
    }
}

Grid Grid::make(const NumericalParams& num, double T)
{
    num.validate();
    Grid grid;
    grid.h = num.h();
    grid.k = num.k(T);
    grid.T = T;
    grid.xi.resize(static_cast<std::size_t>(num.n) + 1);
    grid.tau.resize(static_cast<std::size_t>(num.m) + 1);
    for (std::size_t i = 0; i < grid.xi.size(); ++i)
        grid.xi[i] = static_cast<double>(i) * grid.h;
    for (std::size_t j = 0; j < grid.tau.size(); ++j)
        grid.tau[j] = static_cast<double>(j) * grid.k;
    return grid;
}

double coefficient_time(const Grid& grid, std::size_t j)
{
    return std::max(grid.T - grid.tau[j], 0.5 * grid.k);
}

std::span<const double> SolutionField::row(std::size_t j) const
{
    const std::size_t width = grid.nodes();
    if (j == grid.steps() && !last_profile.empty())
        return last_profile;
    if (!has_field())
        throw DomainError("SolutionField::row: field was not stored (keep_field=false)");
    return std::span<const double>(pi).subspan(j * width, width);
}

std::vector<double> initial_profile(double rho0, const Grid& grid)
{
    const double kink = std::log(rho0);
    std::vector<double> pi(grid.nodes());
    for (std::size_t i = 0; i < pi.size(); ++i)
        pi[i] = grid.xi[i] <= kink ? -1.0 : 0.0;
    pi.front() = -1.0;
    pi.back() = 0.0;
    return pi;
}

std::vector<double> transport_step(std::span<const double> previous, double rho_prev, double rho_cur,
                                   const ModelParams& params, const Grid& grid, TransportLookup lookup)
{
    const double shift = std::log(rho_prev / rho_cur) - (params.r - params.q) * grid.k;
    const std::size_t last = previous.size() - 1;
    std::vector<double> out(previous.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double nu = grid.xi[i] + shift;
        if (!(nu > 0.0)) {
            out[i] = -1.0;
        } else if (lookup == TransportLookup::Linear) {
            out[i] = interpolate_uniform(previous, grid.h, nu, 0.0);
        } else {
            const double node = std::round(nu / grid.h);
            out[i] = node > static_cast<double>(last) ? 0.0 : previous[static_cast<std::size_t>(node)];
        }
    }
    return out;
}

TridiagonalSystem assemble_system(std::span<const double> half_step, double rho_cur, std::size_t j,
                                  const ModelParams& params, const AveragingMethod& method,
                                  const Grid& grid)
{
    const std::size_t n = grid.nodes() - 1;
    const double h = grid.h;
    const double k = grid.k;
    const double t = coefficient_time(grid, j);
    const double s2 = params.sigma * params.sigma;
    const double diffusion = k * s2 / (2.0 * h * h);

    TridiagonalSystem system(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        const double x = rho_cur * std::exp(-grid.xi[i]);
        const double f = drift_f(method, x, t);
        const double b = params.r + x_df_dx(method, x, t) - f;
        const double convection = k / (2.0 * h) * (0.5 * s2 + f);
        const double alpha = -diffusion + convection;
        const double gamma = -diffusion - convection;
        const std::size_t row = i - 1;
        system.sub[row] = alpha;
        system.super[row] = gamma;
        system.diag[row] = 1.0 + b * k - (alpha + gamma);
        system.rhs[row] = half_step[i];
    }
    // Pi_0 = -1 moves to the right-hand side; Pi_n = 0 contributes nothing.
    system.rhs.front() += system.sub.front();
    system.sub.front() = 0.0;
    system.super.back() = 0.0;
    return system;
}

double update_boundary(std::span<const double> previous, std::span<const double> current,
                       double rho_prev, std::size_t j, const ModelParams& params,
                       const AveragingMethod& method, const Grid& grid)
{
    const double t = coefficient_time(grid, j);
    std::vector<double> weighted(current.size());
    for (std::size_t i = 0; i < current.size(); ++i) {
        const double x = rho_prev * std::exp(-grid.xi[i]);
        weighted[i] = (params.r - drift_f(method, x, t)) * current[i];
    }
    const double s2 = params.sigma * params.sigma;
    const double log_rho = std::log(rho_prev) + trapezoid(previous, grid.h) - trapezoid(current, grid.h) +
                           grid.k * (params.q + 0.5 * s2 - params.q * rho_prev - trapezoid(weighted, grid.h));
    if (!(std::abs(log_rho) <= kMaxLogRho)) {
        std::ostringstream os;
        os << "boundary update diverged at step " << j << ": ln rho = " << log_rho;
        throw DivergenceError(j, os.str());
    }
    return std::exp(log_rho);
}

StepResult time_step(std::span<const double> previous, double rho_prev, std::size_t j,
                     const ModelParams& params, const NumericalParams& num,
                     const AveragingMethod& method, const Grid& grid, bool track_residual)
{
    StepResult result;
    result.pi.assign(previous.begin(), previous.end());
    result.rho = rho_prev;

    // Secant state: two most recent (guess, F(Pi(guess))) pairs.
    double guess_a = 0.0, image_a = 0.0;
    double guess_b = 0.0, image_b = 0.0;
    int pairs = 0;

    for (int p = 0; p < num.p_max; ++p) {
        // F is evaluated on Pi^{j,p}; for p >= 1 that profile was built from result.rho.
        const double image = update_boundary(previous, result.pi, rho_prev, j, params, method, grid);
        double rho_next = image;
        if (p >= 1) {
            guess_a = guess_b;
            image_a = image_b;
            guess_b = result.rho;
            image_b = image;
            pairs = std::min(pairs + 1, 2);
        }
        if (num.inner == InnerIteration::Secant && pairs == 2) {
            const double res_a = image_a - guess_a;
            const double res_b = image_b - guess_b;
            const double denom = res_b - res_a;
            if (denom != 0.0 && std::isfinite(denom)) {
                const double candidate = guess_b - res_b * (guess_b - guess_a) / denom;
                // Keep the accelerated guess within a factor of two of the plain one.
                if (candidate > 0.5 * image && candidate < 2.0 * image)
                    rho_next = candidate;
            }
        }

        const std::vector<double> half = transport_step(previous, rho_prev, rho_next, params, grid, num.transport);
        const TridiagonalSystem system = assemble_system(half, rho_next, j, params, method, grid);

        std::vector<double> interior;
        try {
            interior = thomas_solve(system);
        } catch (const SingularPivotError& e) {
            throw DivergenceError(j, std::string("tridiagonal solve failed: ") + e.what());
        }
        if (track_residual)
            result.max_residual = std::max(result.max_residual, system.residual_inf(interior));

        std::copy(interior.begin(), interior.end(), result.pi.begin() + 1);
        result.pi.front() = -1.0;
        result.pi.back() = 0.0;

        result.final_increment = std::abs(rho_next - result.rho);
        result.rho = rho_next;
        result.iterations = p + 1;
        if (!all_finite(result.pi) || !std::isfinite(rho_next)) {
            std::ostringstream os;
            os << "non-finite values at step " << j << ", inner iteration " << p + 1;
            throw DivergenceError(j, os.str());
        }
        if (result.final_increment < num.toll) {
            result.converged = true;
            break;
        }
    }
    return result;
}

SolutionField solve(const ModelParams& params, const NumericalParams& num,
                    const AveragingMethod& method, const SolveOptions& options)
{
    params.validate();
    method.validate();
    num.validate();

    SolutionField field;
    field.params = params;
    field.numerics = num;
    field.method = method;
    field.grid = Grid::make(num, params.T);

    const std::size_t steps = field.grid.steps();
    const std::size_t width = field.grid.nodes();
    field.rho.assign(steps + 1, 0.0);
    field.iterations.assign(steps + 1, 0);
    field.final_increment.assign(steps + 1, 0.0);
    if (options.keep_field)
        field.pi.reserve((steps + 1) * width);

    field.rho[0] = initial_rho(method, params);
    std::vector<double> current = initial_profile(field.rho[0], field.grid);
    if (options.keep_field)
        field.pi.insert(field.pi.end(), current.begin(), current.end());

    for (std::size_t j = 1; j <= steps; ++j) {
        StepResult step = time_step(current, field.rho[j - 1], j, params, num, method, field.grid,
                                    options.track_residual);
        field.rho[j] = step.rho;
        field.iterations[j] = step.iterations;
        field.final_increment[j] = step.final_increment;
        field.max_residual = std::max(field.max_residual, step.max_residual);
        if (!step.converged)
            ++field.nonconverged_steps;
        current = std::move(step.pi);
        if (options.keep_field)
            field.pi.insert(field.pi.end(), current.begin(), current.end());
    }
    field.last_profile = std::move(current);
    return field;
}

} // namespace asianfb
