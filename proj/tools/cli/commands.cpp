#include "commands.hpp"

#include "asianfb/analysis.hpp"
#include "asianfb/errors.hpp"
#include "asianfb/fbsolver.hpp"
#include "asianfb/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace asianfb::cli {

namespace {

std::string fmt(double v) { return format_number(v); }

nlohmann::ordered_json failures_json(const std::vector<analysis::SweepFailure>& failures) {
    auto list = nlohmann::ordered_json::array();
    for (const auto& f : failures)
        list.push_back({{"index", f.index}, {"label", f.label}, {"message", f.message}});
    return list;
}

/// Linear interpolation of a curve at time tau (clamped to its range).
double curve_at(const FreeBoundaryCurve& curve, double tau) {
    const auto& t = curve.tau;
    if (tau <= t.front()) return curve.rho.front();
    if (tau >= t.back()) return curve.rho.back();
    auto hi = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), tau) - t.begin());
    std::size_t lo = hi - 1;
    double w = (tau - t[lo]) / (t[hi] - t[lo]);
    return (1.0 - w) * curve.rho[lo] + w * curve.rho[hi];
}

} // namespace

Report cmd_solve(const RunConfig& config) {
    const auto& method = config.methods.front();
    SolveOptions options;
    options.keep_field = !config.field_out.empty();
    auto field = solve(config.params, config.numerics, method, options);

    Report report;
    report.columns = {"tau", "rho", "inner_iterations"};
    for (std::size_t j = 0; j < field.rho.size(); ++j)
        report.rows.push_back({fmt(field.grid.tau[j]), fmt(field.rho[j]), std::to_string(field.iterations[j])});
    report.curves.push_back(to_curve(field, method.label()));

    int max_iter = *std::max_element(field.iterations.begin(), field.iterations.end());
    report.summary["rho_0"] = json_number(field.rho.front());
    report.summary["rho_T"] = json_number(field.rho.back());
    report.summary["max_iterations"] = max_iter;
    report.summary["nonconverged_steps"] = field.nonconverged_steps;
    report.console = "rho(0)=" + fmt(field.rho.front()) + " rho(T)=" + fmt(field.rho.back()) +
                     " max_iterations=" + std::to_string(max_iter);

    if (!config.field_out.empty()) {
        Report pi;
        pi.columns = {"tau"};
        for (std::size_t i = 0; i < field.grid.nodes(); ++i) pi.columns.push_back("pi_" + std::to_string(i));
        const auto stride = static_cast<std::size_t>(config.field_stride);
        for (std::size_t j = 0; j < field.rho.size(); ++j) {
            if (j % stride != 0 && j + 1 != field.rho.size()) continue;
            std::vector<std::string> row{fmt(field.grid.tau[j])};
            for (double v : field.row(j)) row.push_back(fmt(v));
            pi.rows.push_back(std::move(row));
        }
        write_output(config.field_out, render_csv(config, pi));
    }
    return report;
}

Report cmd_sweep(const RunConfig& config) {
    analysis::SweepSpec spec{config.methods, config.params, config.sweep_parameter,
                             config.values, config.numerics, config.threads};
    auto result = analysis::run_sweep(spec);

    Report report;
    report.columns = {"label", "tau", "rho", "inner_iterations"};
    for (const auto& curve : result.curves) {
        for (std::size_t j = 0; j < curve.rho.size(); ++j)
            report.rows.push_back({curve.label, fmt(curve.tau[j]), fmt(curve.rho[j]),
                                   std::to_string(curve.iterations[j])});
    }
    report.curves = result.curves;
    report.summary["curves"] = result.curves.size();
    report.summary["failed"] = result.failures.size();
    report.summary["failures"] = failures_json(result.failures);
    report.partial_failure = !result.failures.empty();
    report.console = "curves=" + std::to_string(result.curves.size() - result.failures.size()) + "/" +
                     std::to_string(result.curves.size());
    return report;
}

Report cmd_eoc(const RunConfig& config) {
    auto table = analysis::eoc_table(config.params, config.numerics, config.lambdas, config.threads);

    Report report;
    report.columns = {"lambda", "deviation", "alpha"};
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < table.lambdas.size(); ++i) {
        std::string alpha = i == 0 ? "" : fmt(table.records[i - 1].alpha);
        report.rows.push_back({fmt(table.lambdas[i]), fmt(table.deviations[i]), alpha});
        nlohmann::ordered_json row;
        row["lambda"] = json_number(table.lambdas[i]);
        row["deviation"] = json_number(table.deviations[i]);
        row["alpha"] = i == 0 ? nlohmann::ordered_json(nullptr) : json_number(table.records[i - 1].alpha);
        rows.push_back(std::move(row));
    }
    report.curves = table.curves;
    report.summary["rho_inf"] = json_number(1.0);
    report.summary["table"] = rows;
    report.console = "lambdas=" + std::to_string(table.lambdas.size()) +
                     " deviation(first)=" + fmt(table.deviations.front()) +
                     " deviation(last)=" + fmt(table.deviations.back());
    return report;
}

Report cmd_scaling(const RunConfig& config) {
    const auto& method = config.methods.front();
    double gap = analysis::scaling_check(config.params, config.numerics, method);

    Report report;
    report.columns = {"method", "T", "gap"};
    report.rows.push_back({method.label(), fmt(config.params.T), fmt(gap)});
    report.summary["gap"] = json_number(gap);
    report.console = "scaling gap=" + fmt(gap);
    return report;
}

Report cmd_fit(const RunConfig& config) {
    auto draws = analysis::draw_fit_samples(config.samples, config.seed, config.params.T);
    auto run = analysis::compute_fit_samples(std::move(draws), config.numerics, config.methods.front(),
                                             config.threads);
    const auto model = analysis::FitModel::published();
    auto rss = analysis::fit_rss(model, run.samples);

    Report report;
    report.columns = {"r", "q", "sigma", "rho_T", "rho_app", "residual"};
    for (const auto& s : run.samples) {
        double app = std::numeric_limits<double>::quiet_NaN();
        try {
            app = analysis::fit_eval(model, s.r, s.q, s.sigma, s.T);
        } catch (const DomainError&) {
        }
        report.rows.push_back({fmt(s.r), fmt(s.q), fmt(s.sigma), fmt(s.rho_T), fmt(app), fmt(app - s.rho_T)});
    }
    report.summary["rss"] = json_number(rss.rss);
    report.summary["used"] = rss.used;
    report.summary["excluded"] = rss.excluded.size();
    report.summary["failures"] = failures_json(run.failures);
    report.console = "rss=" + fmt(rss.rss) + " used=" + std::to_string(rss.used) + "/" +
                     std::to_string(run.samples.size());
    if (config.refit) {
        auto fitted = analysis::refit(run.samples, model);
        auto refit_rss = analysis::fit_rss(fitted, run.samples);
        report.summary["refit_beta1"] = json_number(fitted.beta1);
        report.summary["refit_beta2"] = json_number(fitted.beta2);
        report.summary["refit_beta3"] = json_number(fitted.beta3);
        report.summary["refit_beta4"] = json_number(fitted.beta4);
        report.summary["refit_rss"] = json_number(refit_rss.rss);
        report.console += " refit_rss=" + fmt(refit_rss.rss);
    }
    report.partial_failure = !run.failures.empty();
    return report;
}

Report cmd_oracle_compare(const RunConfig& config) {
    const auto& method = config.methods.front();
    SolveOptions options;
    options.keep_field = false;
    auto field = solve(config.params, config.numerics, method, options);
    auto fb = to_curve(field, "fbsolver:" + method.label());

    const bool arithmetic = method.kind == AveragingKind::Arithmetic;
    FreeBoundaryCurve psor;
    if (config.with_psor) psor = oracles::psor_boundary(config.params, method, config.psor);
    FreeBoundaryCurve sigma0;
    if (arithmetic) {
        sigma0.label = "sigma0:arithmetic";
        sigma0.method = method;
        sigma0.params = config.params;
        sigma0.tau = fb.tau;
        for (double tau : fb.tau)
            sigma0.rho.push_back(oracles::sigma_zero_boundary(config.params.r, config.params.q, config.params.T, tau));
    }

    Report report;
    report.columns = {"tau", "rho_fb"};
    if (config.with_psor) report.columns.push_back("rho_psor");
    if (arithmetic) report.columns.push_back("rho_sigma0");
    double gap_psor = 0.0;
    for (std::size_t j = 0; j < fb.rho.size(); ++j) {
        std::vector<std::string> row{fmt(fb.tau[j]), fmt(fb.rho[j])};
        if (config.with_psor) {
            double p = curve_at(psor, fb.tau[j]);
            gap_psor = std::max(gap_psor, std::abs(p - fb.rho[j]));
            row.push_back(fmt(p));
        }
        if (arithmetic) row.push_back(fmt(sigma0.rho[j]));
        report.rows.push_back(std::move(row));
    }

    report.curves.push_back(fb);
    if (config.with_psor) report.curves.push_back(psor);
    if (arithmetic) report.curves.push_back(sigma0);
    report.console = "oracle-compare";
    if (config.with_psor) {
        report.summary["gap_psor"] = json_number(gap_psor);
        report.console += " gap_psor=" + fmt(gap_psor);
    }
    if (arithmetic) {
        double gap = analysis::sup_deviation(fb, sigma0);
        report.summary["gap_sigma0"] = json_number(gap);
        report.console += " gap_sigma0=" + fmt(gap);
    }
    return report;
}

Report run_command(const RunConfig& config) {
    if (config.command == "solve") return cmd_solve(config);
    if (config.command == "sweep") return cmd_sweep(config);
    if (config.command == "eoc") return cmd_eoc(config);
    if (config.command == "scaling") return cmd_scaling(config);
    if (config.command == "fit") return cmd_fit(config);
    if (config.command == "oracle-compare") return cmd_oracle_compare(config);
    throw ConfigError("unknown command '" + config.command + "'");
}

} // namespace asianfb::cli
