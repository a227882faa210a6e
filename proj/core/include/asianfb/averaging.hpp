#pragma once

#include <string>
#include <string_view>

namespace asianfb {

enum class AveragingKind { Arithmetic, WeightedArithmetic, Geometric };

/// Averaging rule for the running average A_t. `lambda` is the exponential
/// weight rate and is only read for WeightedArithmetic.
struct AveragingMethod {
    AveragingKind kind = AveragingKind::Arithmetic;
    double lambda = 0.0;

    static AveragingMethod arithmetic() { return {AveragingKind::Arithmetic, 0.0}; }
    static AveragingMethod weighted(double lambda) { return {AveragingKind::WeightedArithmetic, lambda}; }
    static AveragingMethod geometric() { return {AveragingKind::Geometric, 0.0}; }

    /// Throws DomainError when lambda <= 0 for the weighted rule.
    void validate() const;

    /// "arithmetic" | "weighted" | "geometric"
    std::string name() const;
    /// Label including lambda for weighted averaging, e.g. "weighted(lambda=0.5)".
    std::string label() const;

    friend bool operator==(const AveragingMethod&, const AveragingMethod&) = default;
};

/// Parses "arithmetic", "weighted" or "geometric"; lambda is attached by the caller.
AveragingKind parse_averaging_kind(std::string_view name);

/// Financial inputs: interest rate r, dividend yield q, volatility sigma, maturity T.
struct ModelParams {
    double r = 0.06;
    double q = 0.04;
    double sigma = 0.2;
    double T = 50.0;

    /// Throws DomainError unless r > 0, q >= 0, sigma >= 0, T > 0 (all finite).
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// The functions below are the formula layer: no clamping of t happens here.

/// Drift of the average, dA = A f(S/A, t) dt.
double drift_f(const AveragingMethod& method, double x, double t);

/// x * df/dx for the same rule.
double x_df_dx(const AveragingMethod& method, double x, double t);

/// Unique root of x q T - r T + ln x = 0.
double solve_geometric_root(double r, double q, double T);

/// Free boundary position at expiry, rho(0).
double initial_rho(const AveragingMethod& method, const ModelParams& params);

} // namespace asianfb
