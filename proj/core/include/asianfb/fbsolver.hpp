#pragma once

#include "asianfb/averaging.hpp"
#include "asianfb/numerics.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace asianfb {

/// How the convective sub-step reads Pi^{j-1} at the off-grid foot nu_i.
enum class TransportLookup {
    Linear,      ///< piecewise-linear interpolation between nodes
    NearestNode, ///< value at the nearest grid node
};

/// How the per-step fixed point rho = F(Pi(rho)) is iterated.
enum class InnerIteration {
    Plain,  ///< rho^{p+1} = F(Pi^{p}) as written
    Secant, ///< same evaluations, secant-accelerated from the third iterate on
};

const char* to_string(TransportLookup lookup);
const char* to_string(InnerIteration inner);
TransportLookup parse_transport_lookup(std::string_view name);
InnerIteration parse_inner_iteration(std::string_view name);

/// Discretization controls for the front-fixed scheme. Defaults are the
/// reference settings m=10000, n=300, L=3, p_max=500, toll=1e-8.
struct NumericalParams {
    int n = 300;
    int m = 10000;
    double L = 3.0;
    int p_max = 500;
    double toll = 1e-8;
    TransportLookup transport = TransportLookup::Linear;
    InnerIteration inner = InnerIteration::Secant;

    void validate() const;
    double h() const { return L / n; }
    double k(double T) const { return T / m; }

    friend bool operator==(const NumericalParams&, const NumericalParams&) = default;
};

/// Uniform nodes xi_i = i h (i = 0..n) and tau_j = j k (j = 0..m).
struct Grid {
    std::vector<double> xi;
    std::vector<double> tau;
    double h = 0.0;
    double k = 0.0;
    double T = 0.0;

    static Grid make(const NumericalParams& num, double T);

    std::size_t nodes() const noexcept { return xi.size(); }
    std::size_t steps() const noexcept { return tau.size() - 1; }
    double length() const noexcept { return xi.back(); }
};

/// Time at which the averaging coefficients are evaluated for step j:
/// T - tau_j, clamped below at k/2 so the last step avoids t = 0.
double coefficient_time(const Grid& grid, std::size_t j);

struct SolveOptions {
    /// Store the full (m+1) x (n+1) field. Off for sweeps that only need rho.
    bool keep_field = true;
    /// Record max ||A Pi - Pi^{j-1/2}||_inf over all solves.
    bool track_residual = false;
};

/// Pi on the (xi, tau) grid together with the free boundary rho(tau_j).
struct SolutionField {
    ModelParams params;
    NumericalParams numerics;
    AveragingMethod method;
    Grid grid;

    std::vector<double> pi; ///< row-major, row j holds Pi^j; empty unless keep_field
    std::vector<double> rho;
    std::vector<int> iterations;          ///< inner iterations used at step j (0 for j=0)
    std::vector<double> final_increment;  ///< |rho^{j,p+1} - rho^{j,p}| at loop exit
    std::vector<double> last_profile;     ///< Pi^m, always kept
    std::size_t nonconverged_steps = 0;
    double max_residual = 0.0;

    bool has_field() const noexcept { return !pi.empty(); }
    /// Pi^j. Requires has_field(), except for j = m.
    std::span<const double> row(std::size_t j) const;
};

/// Payoff-derived start profile: -1 left of ln rho0 (ties included), 0 right of it.
/// The Dirichlet value Pi_0 = -1 is always set.
std::vector<double> initial_profile(double rho0, const Grid& grid);

/// Characteristic shift of Pi^{j-1} for the convective sub-step.
std::vector<double> transport_step(std::span<const double> previous, double rho_prev, double rho_cur,
                                   const ModelParams& params, const Grid& grid,
                                   TransportLookup lookup = TransportLookup::Linear);

/// Backward-Euler diffusion-reaction system for the interior nodes 1..n-1,
/// with the Dirichlet values eliminated into the right-hand side.
TridiagonalSystem assemble_system(std::span<const double> half_step, double rho_cur, std::size_t j,
                                  const ModelParams& params, const AveragingMethod& method,
                                  const Grid& grid);

/// Discrete integral constraint: new rho from Pi^{j-1} and the current iterate Pi^{j,p}.
/// Throws DivergenceError when |ln rho| exceeds 10.
double update_boundary(std::span<const double> previous, std::span<const double> current,
                       double rho_prev, std::size_t j, const ModelParams& params,
                       const AveragingMethod& method, const Grid& grid);

struct StepResult {
    std::vector<double> pi;
    double rho = 0.0;
    int iterations = 0;
    double final_increment = 0.0;
    bool converged = false;
    double max_residual = 0.0;
};

/// One time level: fixed-point cycle F -> T -> A until |rho change| < toll or
/// p_max. Every iteration costs one F, one T and one tridiagonal solve; the
/// secant variant only changes how the next boundary guess is formed.
StepResult time_step(std::span<const double> previous, double rho_prev, std::size_t j,
                     const ModelParams& params, const NumericalParams& num,
                     const AveragingMethod& method, const Grid& grid, bool track_residual = false);

/// Full forward sweep from the expiry profile.
SolutionField solve(const ModelParams& params, const NumericalParams& num,
                    const AveragingMethod& method, const SolveOptions& options = {});

} // namespace asianfb
