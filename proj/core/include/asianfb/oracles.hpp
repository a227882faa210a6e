#pragma once

#include "asianfb/averaging.hpp"
#include "asianfb/curve.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace asianfb::oracles {

/// Closed-form arithmetic-average boundary for sigma = 0:
/// max{1, (1 + r(T - tau)) / (1 + q(T - tau))}.
double sigma_zero_boundary(double r, double q, double T, double tau);

/// Plain bisection on a sign-changing bracket [lo, hi]. Independent of the
/// root finder used by the averaging layer.
double bisect(const std::function<double(double)>& fn, double lo, double hi, double tol = 1e-14,
              int max_iter = 400);

/// Expands [lo, hi] geometrically (keeping lo > 0) until fn changes sign.
/// Returns false when no sign change is found within max_steps doublings.
bool bracket_positive(const std::function<double(double)>& fn, double& lo, double& hi,
                      int max_steps = 200);

/// Discretization of the untransformed problem on 0 <= x <= x_max.
struct LcpGridSpec {
    double x_max = 5.0;
    int nx = 1001;
    int mt = 2000;
    double omega = 1.6;
    double tol = 1e-9;
    int max_sweeps = 200000;

    void validate() const;
};

struct PsorStats {
    int max_sweeps_used = 0;
    long long total_sweeps = 0;
    double worst_obstacle_violation = 0.0; ///< min(W - obstacle) over all steps, <= 0
    double worst_free_residual = 0.0;      ///< max PDE residual where W > obstacle + tol
};

struct PsorResult {
    FreeBoundaryCurve curve;
    std::vector<double> x;     ///< grid nodes
    std::vector<double> value; ///< W(x, T) at the last step
    PsorStats stats;
};

/// Backward-Euler + projected SOR solve of the reduced variational problem
/// W_tau + (f - r + q) x W_x - sigma^2/2 x^2 W_xx + (r - f) W = 0,
/// W >= max{x - 1, 0}, W(0) = 0, W(x_max) = x_max - 1.
/// Throws ConvergenceError when a step exceeds spec.max_sweeps.
PsorResult psor_solve(const ModelParams& params, const AveragingMethod& method, const LcpGridSpec& spec);

/// Boundary curve only.
FreeBoundaryCurve psor_boundary(const ModelParams& params, const AveragingMethod& method,
                                const LcpGridSpec& spec);

/// Contact point of W with the exercise value x - 1 on a uniform grid:
/// the first node whose gap is <= tol, refined inside the straddling cell.
double extract_boundary(const std::vector<double>& x, const std::vector<double>& value, double tol);

/// Seeded normal source: std::mt19937_64 (fully specified by the standard)
/// feeding a Box-Muller transform on 53-bit uniforms. Replays bit-identically
/// across platforms, unlike std::normal_distribution.
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct PathSample {
    std::vector<double> times;
    std::vector<double> spot;
    std::vector<double> arithmetic;
    std::vector<double> weighted;
    std::vector<double> geometric;
    double lambda = 0.0;
};

/// Euler-Maruyama path of dS = (r - q) S dt + sigma S dB on [0, T] with
/// running averages by cumulative trapezoid quadrature. averages[0] = S0.
PathSample simulate_path_averages(double S0, double r, double q, double sigma, double T, int steps,
                                  std::uint64_t seed, double lambda = 1.0);

} // namespace asianfb::oracles
