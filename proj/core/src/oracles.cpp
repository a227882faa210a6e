#include "asianfb/oracles.hpp"

#include "asianfb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace asianfb::oracles {

double sigma_zero_boundary(double r, double q, double T, double tau)
{
    const double remaining = T - tau;
    return std::max(1.0, (1.0 + r * remaining) / (1.0 + q * remaining));
}

double bisect(const std::function<double(double)>& fn, double lo, double hi, double tol, int max_iter)
{
    double flo = fn(lo);
    const double fhi = fn(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw RootFindingError("bisect: interval does not bracket a sign change");
    for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = fn(mid);
        if (fmid == 0.0) return mid;
        if ((fmid < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

bool bracket_positive(const std::function<double(double)>& fn, double& lo, double& hi, int max_steps)
{
    for (int step = 0; step < max_steps; ++step) {
        if ((fn(lo) < 0.0) != (fn(hi) < 0.0))
            return true;
        lo *= 0.5;
        hi *= 2.0;
    }
    return false;
}

void LcpGridSpec::validate() const
{
    if (!(x_max > 1.0) || nx < 10 || !(omega > 0.0 && omega < 2.0) || mt < 1 || !(tol > 0.0) ||
        max_sweeps < 1) {
        std::ostringstream os;
        os << "invalid LCP grid: need x_max>1, nx>=10, 0<omega<2, mt>=1, tol>0; got x_max=" << x_max
           << " nx=" << nx << " omega=" << omega << " mt=" << mt << " tol=" << tol;
        throw DomainError(os.str());
    }
}

double extract_boundary(const std::vector<double>& x, const std::vector<double>& value, double tol)
{
    const auto gap = [&](std::size_t i) { return std::max(value[i] - (x[i] - 1.0), 0.0); };
    std::size_t contact = x.size() - 1;
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (x[i] >= 1.0 && gap(i) <= tol) {
            contact = i;
            break;
        }
    }
    if (contact < 3)
        return x[contact];
    // Quadratic through the last three continuation gaps; its first root past
    // x[contact-1] (or its vertex when it never reaches zero) locates the contact
    // point inside the straddling cell. Handles both the smooth-pasting (double
    // root) and the kinked profiles seen close to t = 0.
    const double x0 = x[contact - 1];
    const double dx = x0 - x[contact - 2];
    const double g0 = gap(contact - 1), g1 = gap(contact - 2), g2 = gap(contact - 3);
    // g(s) = g0 + b s + c s^2 with s = (x - x0) / dx, fitted at s = 0, -1, -2.
    const double c = 0.5 * (g2 - 2.0 * g1 + g0);
    const double b = c - (g1 - g0);
    double s = 1.0;
    if (std::abs(c) < 1e-300) {
        if (b < 0.0) s = -g0 / b;
    } else {
        const double disc = b * b - 4.0 * c * g0;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            const double r1 = (-b - sq) / (2.0 * c);
            const double r2 = (-b + sq) / (2.0 * c);
            const double lo = std::min(r1, r2), hi = std::max(r1, r2);
            s = lo >= 0.0 ? lo : hi;
        } else if (c > 0.0) {
            s = -b / (2.0 * c);
        }
    }
    return x0 + std::clamp(s, 0.0, 1.0) * dx;
}

PsorResult psor_solve(const ModelParams& params, const AveragingMethod& method, const LcpGridSpec& spec)
{
    params.validate();
    method.validate();
    spec.validate();

    const std::size_t nx = static_cast<std::size_t>(spec.nx);
    const double dx = spec.x_max / static_cast<double>(nx - 1);
    const double dt = params.T / spec.mt;
    const double s2 = params.sigma * params.sigma;

    PsorResult out;
    out.x.resize(nx);
    for (std::size_t i = 0; i < nx; ++i)
        out.x[i] = static_cast<double>(i) * dx;
    out.x.back() = spec.x_max;

    std::vector<double> obstacle(nx);
    for (std::size_t i = 0; i < nx; ++i)
        obstacle[i] = std::max(out.x[i] - 1.0, 0.0);
    std::vector<double> w = obstacle;

    FreeBoundaryCurve& curve = out.curve;
    curve.label = "psor:" + method.label();
    curve.method = method;
    curve.params = params;
    curve.tau.resize(static_cast<std::size_t>(spec.mt) + 1);
    curve.rho.resize(curve.tau.size());
    curve.tau[0] = 0.0;
    curve.rho[0] = initial_rho(method, params);

    std::vector<double> lower(nx, 0.0), diag(nx, 1.0), upper(nx, 0.0);
    for (int j = 1; j <= spec.mt; ++j) {
        const double tau = j * dt;
        const double t = std::max(params.T - tau, 0.5 * dt);
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            const double x = out.x[i];
            const double f = drift_f(method, x, t);
            const double diffusion = 0.5 * s2 * x * x;
            const double velocity = (f - params.r + params.q) * x;
            double a = -diffusion / (dx * dx);
            double c = -diffusion / (dx * dx);
            double b = 2.0 * diffusion / (dx * dx) + params.r - f;
            if (std::abs(velocity) * dx <= 2.0 * diffusion) {
                a -= velocity / (2.0 * dx);
                c += velocity / (2.0 * dx);
            } else if (velocity > 0.0) {
                a -= velocity / dx;
                b += velocity / dx;
            } else {
                c += velocity / dx;
                b -= velocity / dx;
            }
            lower[i] = dt * a;
            upper[i] = dt * c;
            diag[i] = 1.0 + dt * b;
            if (!(diag[i] > 0.0)) {
                std::ostringstream os;
                os << "psor: non-positive diagonal at x=" << x << " step " << j;
                throw ConvergenceError(static_cast<std::size_t>(j), os.str());
            }
        }

        const std::vector<double> rhs = w;
        w.front() = 0.0;
        w.back() = spec.x_max - 1.0;
        const std::vector<double> start = w;
        // Returns the sweep count, or -1 when the iteration stalls or blows up.
        auto relax = [&](double omega) {
            for (int sweeps = 1; sweeps <= spec.max_sweeps; ++sweeps) {
                double change = 0.0;
                for (std::size_t i = 1; i + 1 < nx; ++i) {
                    const double gs = (rhs[i] - lower[i] * w[i - 1] - upper[i] * w[i + 1]) / diag[i];
                    const double next = std::max(obstacle[i], w[i] + omega * (gs - w[i]));
                    change = std::max(change, std::abs(next - w[i]));
                    w[i] = next;
                }
                if (!std::isfinite(change))
                    return -1;
                if (change < spec.tol)
                    return sweeps;
            }
            return -1;
        };
        int sweeps = relax(spec.omega);
        if (sweeps < 0 && spec.omega > 1.0) {
            // over-relaxation can diverge close to t = 0
            w = start;
            sweeps = relax(1.0);
        }
        if (sweeps < 0) {
            std::ostringstream os;
            os << "psor: no convergence after " << spec.max_sweeps << " sweeps at step " << j;
            throw ConvergenceError(static_cast<std::size_t>(j), os.str());
        }
        out.stats.max_sweeps_used = std::max(out.stats.max_sweeps_used, sweeps);
        out.stats.total_sweeps += sweeps;

        for (std::size_t i = 1; i + 1 < nx; ++i) {
            out.stats.worst_obstacle_violation =
                std::min(out.stats.worst_obstacle_violation, w[i] - obstacle[i]);
            if (w[i] > obstacle[i] + spec.tol) {
                const double residual = lower[i] * w[i - 1] + diag[i] * w[i] + upper[i] * w[i + 1] - rhs[i];
                out.stats.worst_free_residual = std::max(out.stats.worst_free_residual, std::abs(residual));
            }
        }

        curve.tau[static_cast<std::size_t>(j)] = tau;
        curve.rho[static_cast<std::size_t>(j)] = extract_boundary(out.x, w, spec.tol);
    }
    out.value = std::move(w);
    return out;
}

FreeBoundaryCurve psor_boundary(const ModelParams& params, const AveragingMethod& method,
                                const LcpGridSpec& spec)
{
    return psor_solve(params, method, spec).curve;
}

double NormalSource::uniform()
{
    // 53 random bits mapped to the midpoints of a 2^-53 lattice in (0, 1).
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double NormalSource::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

PathSample simulate_path_averages(double S0, double r, double q, double sigma, double T, int steps,
                                  std::uint64_t seed, double lambda)
{
    if (!(S0 > 0.0) || steps < 2 || !(T > 0.0) || !(lambda > 0.0))
        throw DomainError("simulate_path_averages: need S0>0, steps>=2, T>0, lambda>0");

    const double dt = T / steps;
    const double sqrt_dt = std::sqrt(dt);
    const double decay = std::exp(-lambda * dt);
    NormalSource normals(seed);

    const std::size_t count = static_cast<std::size_t>(steps) + 1;
    PathSample path;
    path.lambda = lambda;
    path.times.resize(count);
    path.spot.resize(count);
    path.arithmetic.resize(count);
    path.weighted.resize(count);
    path.geometric.resize(count);

    path.times[0] = 0.0;
    path.spot[0] = S0;
    path.arithmetic[0] = path.weighted[0] = path.geometric[0] = S0;

    double integral = 0.0;     // int_0^t S du
    double log_integral = 0.0; // int_0^t ln S du
    double weighted_num = 0.0; // int_0^t e^{-lambda(t-u)} S du
    double weighted_den = 0.0; // int_0^t e^{-lambda(t-u)} du, same quadrature
    for (std::size_t i = 1; i < count; ++i) {
        const double prev = path.spot[i - 1];
        double next = prev * (1.0 + (r - q) * dt + sigma * sqrt_dt * normals.normal());
        next = std::max(next, 1e-300 * S0);
        const double t = static_cast<double>(i) * dt;

        integral += 0.5 * dt * (prev + next);
        log_integral += 0.5 * dt * (std::log(prev) + std::log(next));
        weighted_num = decay * weighted_num + 0.5 * dt * (decay * prev + next);
        weighted_den = decay * weighted_den + 0.5 * dt * (decay + 1.0);

        path.times[i] = t;
        path.spot[i] = next;
        path.arithmetic[i] = integral / t;
        path.geometric[i] = std::exp(log_integral / t);
        path.weighted[i] = weighted_num / weighted_den;
    }
    return path;
}

} // namespace asianfb::oracles
