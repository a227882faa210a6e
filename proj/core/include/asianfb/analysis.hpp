#pragma once

#include "asianfb/averaging.hpp"
#include "asianfb/curve.hpp"
#include "asianfb/fbsolver.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace asianfb::analysis {

/// max_j |rho_j - reference|.
double sup_deviation(const FreeBoundaryCurve& curve, double reference);

/// max_j |rho_j - reference_j|. Throws DomainError when the tau grids differ.
double sup_deviation(const FreeBoundaryCurve& curve, const FreeBoundaryCurve& reference);

/// Order alpha in dev = O(lambda^-alpha) from two runs:
/// alpha = (ln dev1 - ln dev2) / (ln lambda2 - ln lambda1).
double eoc_alpha(double dev1, double dev2, double lambda1, double lambda2);

enum class SweptParameter { R, Q, Sigma, Lambda };

const char* to_string(SweptParameter parameter);
SweptParameter parse_swept_parameter(std::string_view name);

struct SweepSpec {
    std::vector<AveragingMethod> methods;
    ModelParams base;
    SweptParameter parameter = SweptParameter::R;
    std::vector<double> values;
    NumericalParams numerics;
    /// Worker count; 0 means std::thread::hardware_concurrency().
    unsigned threads = 0;

    /// Throws DomainError on an empty value list, an empty method list, or a
    /// swept value that fails the parameter checks.
    void validate() const;
};

struct SweepFailure {
    std::size_t index = 0;
    std::string label;
    std::string message;
};

/// Curves are method-major, then in value order. A failed run leaves an
/// empty curve in its slot and an entry in `failures`.
struct SweepResult {
    std::vector<FreeBoundaryCurve> curves;
    std::vector<SweepFailure> failures;
};

SweepResult run_sweep(const SweepSpec& spec);

struct EocRecord {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double dev1 = 0.0;
    double dev2 = 0.0;
    double alpha = 0.0;
};

struct EocTable {
    std::vector<double> lambdas;
    std::vector<double> deviations; ///< sup |rho_lambda - 1|
    std::vector<EocRecord> records; ///< consecutive pairs
    std::vector<FreeBoundaryCurve> curves;
};

/// Weighted-average runs for increasing lambdas, deviations against rho_inf = 1.
EocTable eoc_table(const ModelParams& params, const NumericalParams& num,
                   const std::vector<double>& lambdas, unsigned threads = 0);

/// Sup gap between rho(tau; r, q, sigma, T) and rho(tau/T; Tr, Tq, sqrt(T) sigma, 1)
/// on grids with the same m and n. The weighted rate is rescaled to lambda T.
double scaling_check(const ModelParams& params, const NumericalParams& num,
                     const AveragingMethod& method);

struct OrderingReport {
    std::size_t times = 0;        ///< grid times checked, tau_0 included
    std::size_t holding = 0;      ///< times with rho_wa < rho_a < rho_g
    double fraction = 0.0;
    double worst_violation = 0.0; ///< max over tau of max(rho_wa - rho_a, rho_a - rho_g, 0)
    double min_gap = 0.0;         ///< min over tau of min(rho_a - rho_wa, rho_g - rho_a)
};

/// Solves all three rules (weighted at `lambda`) and compares them pointwise.
OrderingReport ordering_check(const ModelParams& params, const NumericalParams& num, double lambda = 1.0);

/// rho_app = 1 + (s^2 / (b1 r + b2 q))^b3 + (r / q) b4 on scaled inputs.
struct FitModel {
    double beta1 = 0.0;
    double beta2 = 0.0;
    double beta3 = 0.0;
    double beta4 = 0.0;

    static FitModel published() { return {-0.15064, 7.74793, 0.79067, 0.09193}; }
};

/// Evaluates the fit at (T r, T q, sqrt(T) sigma). Throws DomainError when
/// q <= 0 or the power-law base is not positive.
double fit_eval(const FitModel& model, double r, double q, double sigma, double T);

struct FitSample {
    double r = 0.0;
    double q = 0.0;
    double sigma = 0.0;
    double T = 0.0;
    double rho_T = 0.0; ///< solver value of rho at tau = T
};

struct RssReport {
    double rss = 0.0;
    std::size_t used = 0;
    std::vector<std::size_t> excluded; ///< samples where fit_eval threw
};

RssReport fit_rss(const FitModel& model, const std::vector<FitSample>& samples);

/// Uniform draws over [0.01, 0.11] x [0.01, 0.11] x [0.2, 0.8]; rho_T is left at 0.
std::vector<FitSample> draw_fit_samples(std::size_t count, std::uint64_t seed, double T = 50.0);

/// Fills rho_T for each sample by solving with `method`. Failed solves are
/// reported in `failures` and keep rho_T = NaN.
struct FitSampleRun {
    std::vector<FitSample> samples;
    std::vector<SweepFailure> failures;
};
FitSampleRun compute_fit_samples(std::vector<FitSample> samples, const NumericalParams& num,
                                 const AveragingMethod& method = AveragingMethod::arithmetic(),
                                 unsigned threads = 0);

/// Levenberg-Marquardt least squares for beta starting from `initial`.
FitModel refit(const std::vector<FitSample>& samples, const FitModel& initial = FitModel::published());

/// Runs `count` independent jobs on at most `threads` workers (0 = hardware).
/// Job i writes only to slot i, so results are order-stable.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job);

} // namespace asianfb::analysis
