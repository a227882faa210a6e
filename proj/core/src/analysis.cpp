#include "asianfb/analysis.hpp"

#include "asianfb/errors.hpp"
#include "asianfb/oracles.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace asianfb::analysis {

double sup_deviation(const FreeBoundaryCurve& curve, double reference) {
    double worst = 0.0;
    for (double rho : curve.rho) worst = std::max(worst, std::abs(rho - reference));
    return worst;
}

double sup_deviation(const FreeBoundaryCurve& curve, const FreeBoundaryCurve& reference) {
    if (curve.tau.size() != reference.tau.size() || curve.rho.size() != reference.rho.size())
        throw DomainError("sup_deviation: curves live on different time grids");
    double worst = 0.0;
    for (std::size_t j = 0; j < curve.rho.size(); ++j) {
        double scale = std::max(1.0, std::abs(curve.tau[j]));
        if (std::abs(curve.tau[j] - reference.tau[j]) > 1e-9 * scale)
            throw DomainError("sup_deviation: curves live on different time grids");
        worst = std::max(worst, std::abs(curve.rho[j] - reference.rho[j]));
    }
    return worst;
}

double eoc_alpha(double dev1, double dev2, double lambda1, double lambda2) {
    if (!(dev1 > 0.0) || !(dev2 > 0.0)) throw DomainError("eoc_alpha: deviations must be positive");
    if (!(lambda1 > 0.0) || !(lambda2 > lambda1))
        throw DomainError("eoc_alpha: need 0 < lambda1 < lambda2");
    return (std::log(dev1) - std::log(dev2)) / (std::log(lambda2) - std::log(lambda1));
}

const char* to_string(SweptParameter parameter) {
    switch (parameter) {
    case SweptParameter::R: return "r";
    case SweptParameter::Q: return "q";
    case SweptParameter::Sigma: return "sigma";
    case SweptParameter::Lambda: return "lambda";
    }
    return "?";
}

SweptParameter parse_swept_parameter(std::string_view name) {
    if (name == "r") return SweptParameter::R;
    if (name == "q") return SweptParameter::Q;
    if (name == "sigma") return SweptParameter::Sigma;
    if (name == "lambda") return SweptParameter::Lambda;
    throw DomainError("unknown sweep parameter '" + std::string(name) + "' (expected r|q|sigma|lambda)");
}

namespace {

struct Case {
    ModelParams params;
    AveragingMethod method;
    std::string label;
};

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Case make_case(const SweepSpec& spec, const AveragingMethod& method, double value) {
    Case c{spec.base, method, {}};
    switch (spec.parameter) {
    case SweptParameter::R: c.params.r = value; break;
    case SweptParameter::Q: c.params.q = value; break;
    case SweptParameter::Sigma: c.params.sigma = value; break;
    case SweptParameter::Lambda:
        if (method.kind != AveragingKind::WeightedArithmetic)
            throw DomainError("lambda sweep requires weighted averaging, got " + method.name());
        c.method.lambda = value;
        break;
    }
    c.label = c.method.label() + " " + to_string(spec.parameter) + "=" + format_value(value);
    return c;
}

} // namespace

void SweepSpec::validate() const {
    if (methods.empty()) throw DomainError("sweep: no averaging method given");
    if (values.empty()) throw DomainError("sweep: empty value list");
    numerics.validate();
    for (const auto& method : methods) {
        for (double v : values) {
            Case c = make_case(*this, method, v);
            c.params.validate();
            c.method.validate();
        }
    }
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job) {
    if (count == 0) return;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        job(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                    }
                }
            });
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<Case> cases;
    for (const auto& method : spec.methods)
        for (double v : spec.values) cases.push_back(make_case(spec, method, v));

    SweepResult result;
    result.curves.resize(cases.size());
    std::vector<std::string> errors(cases.size());
    std::vector<char> failed(cases.size(), 0);

    SolveOptions options;
    options.keep_field = false;
    parallel_for(cases.size(), spec.threads, [&](std::size_t i) {
        try {
            auto field = solve(cases[i].params, spec.numerics, cases[i].method, options);
            result.curves[i] = to_curve(field, cases[i].label);
        } catch (const std::exception& e) {
            failed[i] = 1;
            errors[i] = e.what();
            result.curves[i].label = cases[i].label;
            result.curves[i].method = cases[i].method;
            result.curves[i].params = cases[i].params;
        }
    });
    for (std::size_t i = 0; i < cases.size(); ++i)
        if (failed[i]) result.failures.push_back({i, cases[i].label, errors[i]});
    return result;
}

EocTable eoc_table(const ModelParams& params, const NumericalParams& num,
                   const std::vector<double>& lambdas, unsigned threads) {
    if (lambdas.empty()) throw DomainError("eoc_table: empty lambda list");
    if (!std::is_sorted(lambdas.begin(), lambdas.end()) ||
        std::adjacent_find(lambdas.begin(), lambdas.end()) != lambdas.end())
        throw DomainError("eoc_table: lambdas must be strictly increasing");

    SweepSpec spec;
    spec.methods = {AveragingMethod::weighted(lambdas.front())};
    spec.base = params;
    spec.parameter = SweptParameter::Lambda;
    spec.values = lambdas;
    spec.numerics = num;
    spec.threads = threads;
    auto sweep = run_sweep(spec);
    if (!sweep.failures.empty())
        throw DivergenceError(0, "eoc_table: run '" + sweep.failures.front().label +
                                     "' failed: " + sweep.failures.front().message);

    EocTable table;
    table.lambdas = lambdas;
    for (const auto& curve : sweep.curves) table.deviations.push_back(sup_deviation(curve, 1.0));
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        EocRecord rec{lambdas[i - 1], lambdas[i], table.deviations[i - 1], table.deviations[i], 0.0};
        rec.alpha = eoc_alpha(rec.dev1, rec.dev2, rec.lambda1, rec.lambda2);
        table.records.push_back(rec);
    }
    table.curves = std::move(sweep.curves);
    return table;
}

double scaling_check(const ModelParams& params, const NumericalParams& num,
                     const AveragingMethod& method) {
    SolveOptions options;
    options.keep_field = false;
    auto original = solve(params, num, method, options);

    ModelParams scaled{params.T * params.r, params.T * params.q, std::sqrt(params.T) * params.sigma, 1.0};
    AveragingMethod scaled_method = method;
    if (method.kind == AveragingKind::WeightedArithmetic) scaled_method.lambda = method.lambda * params.T;
    if (scaled == params && scaled_method == method) return 0.0;
    auto normalized = solve(scaled, num, scaled_method, options);

    double gap = 0.0;
    for (std::size_t j = 0; j < original.rho.size(); ++j)
        gap = std::max(gap, std::abs(original.rho[j] - normalized.rho[j]));
    return gap;
}

OrderingReport ordering_check(const ModelParams& params, const NumericalParams& num, double lambda) {
    SolveOptions options;
    options.keep_field = false;
    auto wa = solve(params, num, AveragingMethod::weighted(lambda), options);
    auto a = solve(params, num, AveragingMethod::arithmetic(), options);
    auto g = solve(params, num, AveragingMethod::geometric(), options);

    OrderingReport report;
    report.times = a.rho.size();
    report.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < report.times; ++j) {
        double low = a.rho[j] - wa.rho[j];
        double high = g.rho[j] - a.rho[j];
        if (low > 0.0 && high > 0.0) ++report.holding;
        report.worst_violation = std::max({report.worst_violation, -low, -high});
        report.min_gap = std::min({report.min_gap, low, high});
    }
    report.fraction = static_cast<double>(report.holding) / static_cast<double>(report.times);
    return report;
}

double fit_eval(const FitModel& model, double r, double q, double sigma, double T) {
    if (!(q > 0.0)) throw DomainError("fit_eval: q must be positive");
    if (!(T > 0.0)) throw DomainError("fit_eval: T must be positive");
    double rs = T * r;
    double qs = T * q;
    double ss = std::sqrt(T) * sigma;
    double denom = model.beta1 * rs + model.beta2 * qs;
    if (!(denom > 0.0)) throw DomainError("fit_eval: beta1 r + beta2 q must be positive");
    double base = ss * ss / denom;
    return 1.0 + std::pow(base, model.beta3) + (rs / qs) * model.beta4;
}

RssReport fit_rss(const FitModel& model, const std::vector<FitSample>& samples) {
    if (samples.empty()) throw DomainError("fit_rss: empty sample");
    RssReport report;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!std::isfinite(s.rho_T)) {
            report.excluded.push_back(i);
            continue;
        }
        try {
            double d = fit_eval(model, s.r, s.q, s.sigma, s.T) - s.rho_T;
            report.rss += d * d;
            ++report.used;
        } catch (const DomainError&) {
            report.excluded.push_back(i);
        }
    }
    return report;
}

std::vector<FitSample> draw_fit_samples(std::size_t count, std::uint64_t seed, double T) {
    oracles::NormalSource source(seed);
    std::vector<FitSample> samples(count);
    for (auto& s : samples) {
        s.r = 0.01 + 0.10 * source.uniform();
        s.q = 0.01 + 0.10 * source.uniform();
        s.sigma = 0.2 + 0.6 * source.uniform();
        s.T = T;
    }
    return samples;
}

FitSampleRun compute_fit_samples(std::vector<FitSample> samples, const NumericalParams& num,
                                 const AveragingMethod& method, unsigned threads) {
    FitSampleRun run;
    run.samples = std::move(samples);
    std::vector<std::string> errors(run.samples.size());
    SolveOptions options;
    options.keep_field = false;
    parallel_for(run.samples.size(), threads, [&](std::size_t i) {
        auto& s = run.samples[i];
        try {
            auto field = solve({s.r, s.q, s.sigma, s.T}, num, method, options);
            s.rho_T = field.rho.back();
        } catch (const std::exception& e) {
            s.rho_T = std::numeric_limits<double>::quiet_NaN();
            errors[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i].empty()) {
            const auto& s = run.samples[i];
            run.failures.push_back({i,
                                    "r=" + format_value(s.r) + " q=" + format_value(s.q) +
                                        " sigma=" + format_value(s.sigma),
                                    errors[i]});
        }
    }
    return run;
}

namespace {

struct FitResiduals {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    const std::vector<FitSample>* samples;

    int inputs() const { return 4; }
    int values() const { return static_cast<int>(samples->size()); }

    int operator()(const Eigen::VectorXd& beta, Eigen::VectorXd& out) const {
        FitModel model{beta[0], beta[1], beta[2], beta[3]};
        for (std::size_t i = 0; i < samples->size(); ++i) {
            const auto& s = (*samples)[i];
            try {
                out[static_cast<Eigen::Index>(i)] = fit_eval(model, s.r, s.q, s.sigma, s.T) - s.rho_T;
            } catch (const DomainError&) {
                // pushes the search back into the admissible region
                out[static_cast<Eigen::Index>(i)] = 1e3;
            }
        }
        return 0;
    }
};

} // namespace

FitModel refit(const std::vector<FitSample>& samples, const FitModel& initial) {
    std::vector<FitSample> usable;
    for (const auto& s : samples)
        if (std::isfinite(s.rho_T)) usable.push_back(s);
    if (usable.size() < 4) throw DomainError("refit: need at least 4 finite samples");

    Eigen::VectorXd beta(4);
    beta << initial.beta1, initial.beta2, initial.beta3, initial.beta4;
    FitResiduals functor{&usable};
    Eigen::NumericalDiff<FitResiduals> numeric(functor);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<FitResiduals>> lm(numeric);
    lm.parameters.maxfev = 4000;
    lm.parameters.xtol = 1e-12;
    lm.parameters.ftol = 1e-14;
    auto status = lm.minimize(beta);
    if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters || !beta.allFinite())
        throw RootFindingError("refit: least squares did not produce finite coefficients");
    return {beta[0], beta[1], beta[2], beta[3]};
}

} // namespace asianfb::analysis
