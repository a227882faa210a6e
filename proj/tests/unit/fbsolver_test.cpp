#include "asianfb/errors.hpp"
#include "asianfb/fbsolver.hpp"
#include "asianfb/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace asianfb;

namespace {

NumericalParams coarse() {
    NumericalParams num;
    num.n = 60;
    num.m = 400;
    return num;
}

Grid small_grid(double h, std::size_t nodes, double k) {
    Grid g;
    g.h = h;
    g.k = k;
    for (std::size_t i = 0; i < nodes; ++i) g.xi.push_back(static_cast<double>(i) * h);
    g.tau = {0.0, k};
    g.T = k;
    return g;
}

} // namespace

TEST(Grid, NodeAndStepCounts) {
    NumericalParams num;
    auto g = Grid::make(num, 50.0);
    EXPECT_EQ(g.nodes(), 301u);
    EXPECT_EQ(g.steps(), 10000u);
    EXPECT_DOUBLE_EQ(g.h, 0.01);
    EXPECT_DOUBLE_EQ(g.k, 0.005);
    EXPECT_DOUBLE_EQ(g.length(), 3.0);
    EXPECT_DOUBLE_EQ(g.tau.back(), 50.0);
}

TEST(Grid, CoefficientTimeIsClampedAtLastStep) {
    NumericalParams num = coarse();
    auto g = Grid::make(num, 50.0);
    EXPECT_DOUBLE_EQ(coefficient_time(g, 1), 50.0 - g.k);
    EXPECT_DOUBLE_EQ(coefficient_time(g, g.steps()), 0.5 * g.k);
}

TEST(NumericalParams, Validation) {
    NumericalParams num;
    num.n = 2;
    EXPECT_THROW(num.validate(), DomainError);
    num = {};
    num.toll = 0.0;
    EXPECT_THROW(num.validate(), DomainError);
    num = {};
    num.L = -1.0;
    EXPECT_THROW(num.validate(), DomainError);
    EXPECT_NO_THROW(NumericalParams{}.validate());
}

TEST(InitialProfile, KinkAtLogRho) {
    NumericalParams num;
    auto g = Grid::make(num, 50.0);
    auto flat = initial_profile(1.0, g);
    EXPECT_EQ(flat.front(), -1.0);
    for (std::size_t i = 1; i < flat.size(); ++i) EXPECT_EQ(flat[i], 0.0);

    auto pi = initial_profile(4.0 / 3.0, g);
    const double kink = std::log(4.0 / 3.0);
    for (std::size_t i = 0; i < pi.size(); ++i) EXPECT_EQ(pi[i], g.xi[i] < kink ? -1.0 : 0.0) << i;

    auto e = initial_profile(std::exp(1.0), g);
    EXPECT_EQ(e[99], -1.0);
    EXPECT_EQ(e[101], 0.0);
}

TEST(Transport, ZeroShiftIsIdentity) {
    ModelParams p{0.05, 0.05, 0.2, 1.0};
    auto g = small_grid(0.1, 11, 0.01);
    std::vector<double> prev{-1, -0.9, -0.7, -0.6, -0.4, -0.3, -0.2, -0.1, -0.05, -0.01, 0};
    auto out = transport_step(prev, 1.2, 1.2, p, g);
    for (std::size_t i = 1; i < prev.size(); ++i) EXPECT_DOUBLE_EQ(out[i], prev[i]);
}

TEST(Transport, LinearInterpolationAtShiftedFoot) {
    // shift -0.25 through the boundary ratio: ln(rho_prev/rho_cur) = -0.25, r = q
    ModelParams p{0.05, 0.05, 0.2, 1.0};
    auto g = small_grid(0.5, 3, 0.01);
    std::vector<double> prev{-1.0, -0.5, 0.0};
    auto out = transport_step(prev, 1.0, std::exp(0.25), p, g);
    EXPECT_DOUBLE_EQ(out[0], -1.0);
    EXPECT_NEAR(out[1], -0.75, 1e-14);
    EXPECT_NEAR(out[2], -0.25, 1e-14);
}

TEST(Transport, NegativeFootReadsMinusOne) {
    ModelParams p{0.05, 0.05, 0.2, 1.0};
    auto g = small_grid(0.5, 3, 0.01);
    std::vector<double> prev{-1.0, -0.2, 0.0};
    auto out = transport_step(prev, 1.0, std::exp(0.6), p, g, TransportLookup::NearestNode);
    EXPECT_EQ(out[1], -1.0);
    EXPECT_EQ(out[2], -0.2); // nu = 0.4 is nearest to node 1
}

TEST(Assemble, CoefficientIdentitiesAndArithmeticReaction) {
    ModelParams p;
    NumericalParams num = coarse();
    auto g = Grid::make(num, p.T);
    auto pi = initial_profile(4.0 / 3.0, g);
    const std::size_t j = 7;
    auto s = assemble_system(pi, 1.4, j, p, AveragingMethod::arithmetic(), g);
    const double t = coefficient_time(g, j);
    const double sum = -g.k * p.sigma * p.sigma / (g.h * g.h);
    for (std::size_t row = 0; row < s.size(); ++row) {
        if (row > 0 && row + 1 < s.size()) EXPECT_NEAR(s.sub[row] + s.super[row], sum, 1e-15);
        double b = (s.diag[row] - 1.0 + sum) / g.k;
        EXPECT_NEAR(b, p.r + 1.0 / t, 1e-10);
    }
    EXPECT_EQ(s.sub.front(), 0.0);
    EXPECT_EQ(s.super.back(), 0.0);
    const double alpha0 = sum - s.super[0];
    EXPECT_NEAR(s.rhs[0], pi[1] + alpha0, 1e-14);
    EXPECT_DOUBLE_EQ(s.rhs.back(), pi[g.nodes() - 2]);
}

TEST(Assemble, ZeroVolatilityIsPureConvection) {
    ModelParams p{0.06, 0.04, 0.0, 50.0};
    NumericalParams num = coarse();
    auto g = Grid::make(num, p.T);
    std::vector<double> pi(g.nodes(), 0.0);
    const std::size_t j = 3;
    auto s = assemble_system(pi, 1.3, j, p, AveragingMethod::geometric(), g);
    const double t = coefficient_time(g, j);
    for (std::size_t row = 0; row < s.size(); ++row) {
        double x = 1.3 * std::exp(-g.xi[row + 1]);
        double alpha = g.k / (2 * g.h) * drift_f(AveragingMethod::geometric(), x, t);
        if (row > 0) EXPECT_NEAR(s.sub[row], alpha, 1e-15);
        if (row + 1 < s.size()) EXPECT_NEAR(s.super[row], -alpha, 1e-15);
    }
}

TEST(Assemble, DiagonalDominanceOnDefaultGrid) {
    ModelParams p;
    NumericalParams num;
    auto g = Grid::make(num, p.T);
    std::vector<double> pi(g.nodes(), 0.0);
    const AveragingMethod methods[] = {AveragingMethod::arithmetic(), AveragingMethod::weighted(1.0),
                                       AveragingMethod::geometric()};
    for (const auto& m : methods) {
        for (std::size_t j : {std::size_t{1}, std::size_t{5000}, g.steps()}) {
            auto s = assemble_system(pi, 1.35, j, p, m, g);
            const double t = coefficient_time(g, j);
            for (std::size_t row = 0; row < s.size(); ++row) {
                double x = 1.35 * std::exp(-g.xi[row + 1]);
                double f = drift_f(m, x, t);
                double b = p.r + x_df_dx(m, x, t) - f;
                double s2 = p.sigma * p.sigma;
                if (b >= 0.0 && g.h * std::abs(0.5 * s2 + f) <= s2)
                    EXPECT_GE(std::abs(s.diag[row]),
                              std::abs(s.sub[row]) + std::abs(s.super[row]) + b * g.k - 1e-12);
            }
        }
    }
}

TEST(UpdateBoundary, VanishingProfiles) {
    ModelParams p{0.06, 0.0, 0.3, 2.0};
    NumericalParams num = coarse();
    auto g = Grid::make(num, p.T);
    std::vector<double> zero(g.nodes(), 0.0);
    double rho = update_boundary(zero, zero, 1.7, 1, p, AveragingMethod::arithmetic(), g);
    EXPECT_NEAR(std::log(rho), std::log(1.7) + g.k * 0.5 * p.sigma * p.sigma, 1e-15);
}

TEST(UpdateBoundary, DivergenceGuard) {
    ModelParams p{0.06, 0.0, 0.3, 2.0};
    NumericalParams num = coarse();
    auto g = Grid::make(num, p.T);
    std::vector<double> zero(g.nodes(), 0.0);
    EXPECT_THROW(update_boundary(zero, zero, std::exp(10.5), 1, p, AveragingMethod::arithmetic(), g),
                 DivergenceError);
}

TEST(TimeStep, HugeToleranceMeansOneIteration) {
    ModelParams p;
    NumericalParams num = coarse();
    num.toll = 1e10;
    auto g = Grid::make(num, p.T);
    auto pi = initial_profile(4.0 / 3.0, g);
    auto step = time_step(pi, 4.0 / 3.0, 1, p, num, AveragingMethod::arithmetic(), g);
    EXPECT_EQ(step.iterations, 1);
    EXPECT_TRUE(step.converged);
}

TEST(TimeStep, PlainAndSecantShareTheFixedPoint) {
    ModelParams p;
    NumericalParams num = coarse();
    num.p_max = 20000;
    num.toll = 1e-12;
    auto g = Grid::make(num, p.T);
    auto pi = initial_profile(4.0 / 3.0, g);
    num.inner = InnerIteration::Secant;
    auto fast = time_step(pi, 4.0 / 3.0, 5, p, num, AveragingMethod::arithmetic(), g);
    num.inner = InnerIteration::Plain;
    auto slow = time_step(pi, 4.0 / 3.0, 5, p, num, AveragingMethod::arithmetic(), g);
    ASSERT_TRUE(fast.converged);
    EXPECT_LT(fast.iterations, slow.iterations);
    EXPECT_NEAR(fast.rho, slow.rho, 1e-6);
}

TEST(Solve, StructuralInvariants) {
    ModelParams p;
    NumericalParams num = coarse();
    num.m = 2000; // the first geometric step has no discrete fixed point when k is large
    SolveOptions opt;
    opt.track_residual = true;
    const AveragingMethod methods[] = {AveragingMethod::arithmetic(), AveragingMethod::weighted(0.5),
                                       AveragingMethod::geometric()};
    for (const auto& m : methods) {
        auto field = solve(p, num, m, opt);
        ASSERT_EQ(field.rho.size(), 2001u);
        EXPECT_EQ(field.rho[0], initial_rho(m, p));
        EXPECT_EQ(field.iterations[0], 0);
        EXPECT_EQ(field.nonconverged_steps, 0u);
        EXPECT_LE(field.max_residual, 1e-10 * 2.0);
        for (std::size_t j = 0; j < field.rho.size(); ++j) {
            auto row = field.row(j);
            EXPECT_EQ(row.front(), -1.0);
            EXPECT_EQ(row.back(), 0.0);
            EXPECT_TRUE(std::all_of(row.begin(), row.end(), [](double v) { return std::isfinite(v); }));
            if (j > 0) EXPECT_LT(field.final_increment[j], num.toll);
        }
        auto last = field.row(field.rho.size() - 1);
        EXPECT_TRUE(std::equal(last.begin(), last.end(), field.last_profile.begin()));
    }
}

TEST(Solve, FieldCanBeDropped) {
    ModelParams p;
    NumericalParams num = coarse();
    SolveOptions opt;
    opt.keep_field = false;
    auto field = solve(p, num, AveragingMethod::arithmetic(), opt);
    EXPECT_FALSE(field.has_field());
    EXPECT_THROW(field.row(3), DomainError);
    EXPECT_NO_THROW(field.row(field.rho.size() - 1));
}

TEST(Solve, EqualRatesSmallVolatilityStaysNearOne) {
    ModelParams p{0.05, 0.05, 0.01, 50.0};
    NumericalParams num;
    num.m = 2000;
    auto field = solve(p, num, AveragingMethod::arithmetic(), {false, false});
    for (double rho : field.rho) EXPECT_LT(std::abs(rho - 1.0), 5e-2);
}

TEST(Solve, SmallVolatilityTracksClosedForm) {
    ModelParams p{0.06, 0.04, 0.01, 50.0};
    NumericalParams num;
    num.m = 2000;
    auto field = solve(p, num, AveragingMethod::arithmetic(), {false, false});
    for (std::size_t j = 0; j < field.rho.size(); ++j) {
        double ref = oracles::sigma_zero_boundary(p.r, p.q, p.T, field.grid.tau[j]);
        EXPECT_LT(std::abs(field.rho[j] - ref), 1e-1) << j;
    }
}

TEST(Solve, GeometricLiesAboveArithmetic) {
    ModelParams p;
    NumericalParams num;
    num.m = 2000;
    auto a = solve(p, num, AveragingMethod::arithmetic(), {false, false});
    auto g = solve(p, num, AveragingMethod::geometric(), {false, false});
    for (std::size_t j = 0; j < a.rho.size(); ++j) EXPECT_LT(a.rho[j], g.rho[j]) << j;
}

TEST(Solve, SmallLambdaTracksArithmetic) {
    ModelParams p;
    NumericalParams num;
    auto a = solve(p, num, AveragingMethod::arithmetic(), {false, false});
    auto w = solve(p, num, AveragingMethod::weighted(1e-3), {false, false});
    double gap = 0.0;
    for (std::size_t j = 0; j < a.rho.size(); ++j) gap = std::max(gap, std::abs(a.rho[j] - w.rho[j]));
    EXPECT_LT(gap, 1e-2);
}

TEST(Solve, RepeatedRunsAreBitIdentical) {
    ModelParams p;
    NumericalParams num = coarse();
    auto a = solve(p, num, AveragingMethod::weighted(2.0));
    auto b = solve(p, num, AveragingMethod::weighted(2.0));
    EXPECT_EQ(a.rho, b.rho);
    EXPECT_EQ(a.pi, b.pi);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Naming, LookupAndInnerRoundTrip) {
    EXPECT_EQ(parse_transport_lookup(to_string(TransportLookup::NearestNode)), TransportLookup::NearestNode);
    EXPECT_EQ(parse_transport_lookup(to_string(TransportLookup::Linear)), TransportLookup::Linear);
    EXPECT_EQ(parse_inner_iteration(to_string(InnerIteration::Plain)), InnerIteration::Plain);
    EXPECT_EQ(parse_inner_iteration(to_string(InnerIteration::Secant)), InnerIteration::Secant);
    EXPECT_THROW(parse_inner_iteration("newton"), DomainError);
}
