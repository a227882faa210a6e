#include "asianfb/averaging.hpp"

#include "asianfb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace asianfb {

namespace {

void require_positive_time(double t)
{
    if (!(t > 0.0) || !std::isfinite(t)) {
        std::ostringstream os;
        os << "averaging: elapsed time must be positive, got t=" << t;
        throw DomainError(os.str());
    }
}

// 1 - exp(-lambda t), accurate for small lambda t.
double weight_mass(double lambda, double t) { return -std::expm1(-lambda * t); }

} // namespace

void AveragingMethod::validate() const
{
    if (kind == AveragingKind::WeightedArithmetic && !(lambda > 0.0 && std::isfinite(lambda))) {
        std::ostringstream os;
        os << "weighted averaging requires lambda > 0, got " << lambda;
        throw DomainError(os.str());
    }
}

std::string AveragingMethod::name() const
{
    switch (kind) {
    case AveragingKind::Arithmetic: return "arithmetic";
    case AveragingKind::WeightedArithmetic: return "weighted";
    case AveragingKind::Geometric: return "geometric";
    }
    return "unknown";
}

std::string AveragingMethod::label() const
{
    if (kind != AveragingKind::WeightedArithmetic)
        return name();
    std::ostringstream os;
    os.precision(12);
    os << "weighted(lambda=" << lambda << ")";
    return os.str();
}

AveragingKind parse_averaging_kind(std::string_view name)
{
    if (name == "arithmetic") return AveragingKind::Arithmetic;
    if (name == "weighted") return AveragingKind::WeightedArithmetic;
    if (name == "geometric") return AveragingKind::Geometric;
    throw DomainError("unknown averaging method '" + std::string(name) +
                      "' (expected arithmetic|weighted|geometric)");
}

void ModelParams::validate() const
{
    const bool finite = std::isfinite(r) && std::isfinite(q) && std::isfinite(sigma) && std::isfinite(T);
    if (!finite || !(r > 0.0) || !(q >= 0.0) || !(sigma >= 0.0) || !(T > 0.0)) {
        std::ostringstream os;
        os << "invalid model parameters: need r>0, q>=0, sigma>=0, T>0; got r=" << r << " q=" << q
           << " sigma=" << sigma << " T=" << T;
        throw DomainError(os.str());
    }
}

double drift_f(const AveragingMethod& method, double x, double t)
{
    require_positive_time(t);
    switch (method.kind) {
    case AveragingKind::Arithmetic:
        return (x - 1.0) / t;
    case AveragingKind::WeightedArithmetic:
        return method.lambda * (x - 1.0) / weight_mass(method.lambda, t);
    case AveragingKind::Geometric:
        if (!(x > 0.0))
            throw DomainError("geometric averaging: price ratio must be positive");
        return std::log(x) / t;
    }
    throw DomainError("drift_f: unknown averaging kind");
}

double x_df_dx(const AveragingMethod& method, double x, double t)
{
    require_positive_time(t);
    switch (method.kind) {
    case AveragingKind::Arithmetic:
        return x / t;
    case AveragingKind::WeightedArithmetic:
        return method.lambda * x / weight_mass(method.lambda, t);
    case AveragingKind::Geometric:
        if (!(x > 0.0))
            throw DomainError("geometric averaging: price ratio must be positive");
        return 1.0 / t;
    }
    throw DomainError("x_df_dx: unknown averaging kind");
}

double solve_geometric_root(double r, double q, double T)
{
    if (!(r > 0.0) || !(q >= 0.0) || !(T > 0.0))
        throw DomainError("solve_geometric_root: need r>0, q>=0, T>0");
    if (q == 0.0)
        return std::exp(r * T);

    // g is strictly increasing on (0, inf): g' = qT + 1/x > 0.
    const auto g = [&](double x) { return x * q * T - r * T + std::log(x); };
    double lo = std::min(1.0, std::exp((r - q) * T));
    double hi = std::max(1.0, std::exp(r * T));
    if (!std::isfinite(hi) || !(lo > 0.0) || g(lo) > 0.0 || g(hi) < 0.0) {
        std::ostringstream os;
        os << "solve_geometric_root: cannot bracket root for r=" << r << " q=" << q << " T=" << T;
        throw RootFindingError(os.str());
    }

    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        const double step = g(x) / (q * T + 1.0 / x);
        const double next = x - step;
        if (!(next > 0.0) || next == x)
            break;
        x = next;
    }
    if (!(std::abs(g(x)) <= 1e-12)) {
        std::ostringstream os;
        os << "solve_geometric_root: residual " << g(x) << " above 1e-12";
        throw RootFindingError(os.str());
    }
    return x;
}

double initial_rho(const AveragingMethod& method, const ModelParams& params)
{
    params.validate();
    method.validate();
    const double r = params.r, q = params.q, T = params.T;
    switch (method.kind) {
    case AveragingKind::Arithmetic:
        return std::max((1.0 + r * T) / (1.0 + q * T), 1.0);
    case AveragingKind::WeightedArithmetic: {
        const double mass = weight_mass(method.lambda, T);
        return std::max((method.lambda + r * mass) / (method.lambda + q * mass), 1.0);
    }
    case AveragingKind::Geometric:
        return std::max(solve_geometric_root(r, q, T), 1.0);
    }
    throw DomainError("initial_rho: unknown averaging kind");
}

} // namespace asianfb
