#include "asianfb/averaging.hpp"
#include "asianfb/errors.hpp"
#include "asianfb/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace asianfb;
using namespace asianfb::oracles;

TEST(SigmaZero, ClosedFormValues) {
    EXPECT_DOUBLE_EQ(sigma_zero_boundary(0.06, 0.04, 50.0, 50.0), 1.0);
    EXPECT_NEAR(sigma_zero_boundary(0.06, 0.04, 50.0, 0.0), 4.0 / 3.0, 1e-15);
    for (double tau : {0.0, 10.0, 49.0}) EXPECT_DOUBLE_EQ(sigma_zero_boundary(0.03, 0.05, 50.0, tau), 1.0);
}

TEST(Bisect, FindsRootAndRejectsBadBracket) {
    EXPECT_NEAR(bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0), std::sqrt(2.0), 1e-14);
    EXPECT_THROW(bisect([](double x) { return x * x + 1.0; }, 0.0, 2.0), RootFindingError);
    double lo = 1.0, hi = 1.5;
    ASSERT_TRUE(bracket_positive([](double x) { return x - 40.0; }, lo, hi));
    EXPECT_LE(lo, 40.0);
    EXPECT_GE(hi, 40.0);
}

TEST(NormalSource, SeededReplayAndMoments) {
    NormalSource a(42), b(42), c(43);
    double sum = 0.0, sq = 0.0;
    bool differs = false;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double x = a.normal();
        EXPECT_EQ(x, b.normal());
        differs = differs || x != c.normal();
        sum += x;
        sq += x * x;
    }
    EXPECT_TRUE(differs);
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sq / n, 1.0, 0.01);
}

TEST(NormalSource, UniformStaysInsideOpenInterval) {
    NormalSource s(0);
    for (int i = 0; i < 100000; ++i) {
        double u = s.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(PathAverages, DeterministicGrowthClosedForm) {
    const double S0 = 100.0, r = 0.05, T = 10.0;
    auto path = simulate_path_averages(S0, r, 0.0, 0.0, T, 200000, 1);
    double exact = S0 * std::expm1(r * T) / (r * T);
    EXPECT_NEAR(path.arithmetic.back(), exact, 1e-6 * exact);
    EXPECT_EQ(path.arithmetic.front(), S0);
}

TEST(PathAverages, ConstantPath) {
    auto path = simulate_path_averages(80.0, 0.04, 0.04, 0.0, 5.0, 500, 3, 2.0);
    for (std::size_t i = 0; i < path.times.size(); ++i) {
        EXPECT_NEAR(path.arithmetic[i], 80.0, 1e-10);
        EXPECT_NEAR(path.weighted[i], 80.0, 1e-10);
        EXPECT_NEAR(path.geometric[i], 80.0, 1e-10);
    }
}

TEST(PathAverages, LargeWeightRateFollowsSpot) {
    auto path = simulate_path_averages(100.0, 0.05, 0.01, 0.2, 2.0, 100000, 11, 1e3);
    for (std::size_t i = path.times.size() / 10; i < path.times.size(); i += 997)
        EXPECT_LT(std::abs(path.weighted[i] / path.spot[i] - 1.0), 5e-2) << path.times[i];
}

TEST(PathAverages, DriftRelationAlongDeterministicPath) {
    const double r = 0.07, q = 0.02, lambda = 0.6;
    auto path = simulate_path_averages(100.0, r, q, 0.0, 10.0, 20000, 5, lambda);
    const AveragingMethod methods[] = {AveragingMethod::arithmetic(), AveragingMethod::weighted(lambda),
                                       AveragingMethod::geometric()};
    const std::vector<double>* series[] = {&path.arithmetic, &path.weighted, &path.geometric};
    for (int m = 0; m < 3; ++m) {
        const auto& A = *series[m];
        for (std::size_t i = 2000; i + 1 < A.size(); i += 1500) {
            double dt = path.times[i + 1] - path.times[i - 1];
            double dA = (A[i + 1] - A[i - 1]) / dt;
            double model = A[i] * drift_f(methods[m], path.spot[i] / A[i], path.times[i]);
            EXPECT_NEAR(dA, model, 1e-3 * std::abs(model)) << methods[m].label() << " i=" << i;
        }
    }
}

TEST(ExtractBoundary, RecoversContactOfASmoothGap) {
    // W = x - 1 + c (rho - x)^2 for x < rho, with rho between nodes
    const double rho = 1.4137, c = 0.8;
    std::vector<double> x, w;
    for (int i = 0; i <= 400; ++i) {
        x.push_back(i * 0.01);
        double exercise = x.back() - 1.0;
        double gap = x.back() < rho ? c * (rho - x.back()) * (rho - x.back()) : 0.0;
        w.push_back(std::max(exercise + gap, std::max(exercise, 0.0)));
    }
    EXPECT_NEAR(extract_boundary(x, w, 1e-12), rho, 1e-6);
}

TEST(Psor, SmallVolatilityMatchesClosedForm) {
    ModelParams p{0.06, 0.04, 0.01, 50.0};
    LcpGridSpec spec;
    spec.x_max = 3.0;
    spec.nx = 301;
    spec.mt = 500;
    auto curve = psor_boundary(p, AveragingMethod::arithmetic(), spec);
    for (std::size_t j = 0; j < curve.tau.size(); ++j)
        EXPECT_LT(std::abs(curve.rho[j] - sigma_zero_boundary(p.r, p.q, p.T, curve.tau[j])), 1e-1) << j;
}

TEST(Psor, EqualRatesStayNearOne) {
    ModelParams p{0.05, 0.05, 0.01, 50.0};
    LcpGridSpec spec;
    spec.x_max = 3.0;
    spec.nx = 301;
    spec.mt = 500;
    auto curve = psor_boundary(p, AveragingMethod::arithmetic(), spec);
    for (double rho : curve.rho) EXPECT_LT(std::abs(rho - 1.0), 5e-2);
}

TEST(Psor, ComplementarityHolds) {
    ModelParams p;
    LcpGridSpec spec;
    spec.x_max = 4.0;
    spec.nx = 201;
    spec.mt = 400;
    auto result = psor_solve(p, AveragingMethod::geometric(), spec);
    EXPECT_GE(result.stats.worst_obstacle_violation, -spec.tol);
    EXPECT_LE(result.stats.worst_free_residual, 1e3 * spec.tol); // diagonal reaches ~2e2 at x_max
    EXPECT_EQ(result.curve.rho.size(), 401u);
    EXPECT_DOUBLE_EQ(result.value.back(), spec.x_max - 1.0);
}

TEST(Psor, GridValidation) {
    LcpGridSpec spec;
    spec.omega = 2.0;
    EXPECT_THROW(spec.validate(), DomainError);
    spec = {};
    spec.x_max = 0.5;
    EXPECT_THROW(spec.validate(), DomainError);
}
