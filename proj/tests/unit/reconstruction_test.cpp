#include "asianfb/errors.hpp"
#include "asianfb/reconstruction.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace asianfb;

namespace {

const SolutionField& field() {
    static const SolutionField f = [] {
        NumericalParams num;
        num.m = 1000;
        return solve(ModelParams{}, num, AveragingMethod::arithmetic());
    }();
    return f;
}

} // namespace

TEST(ReconstructW, PayoffAtExpiry) {
    const auto& f = field();
    for (double x = 0.05; x < 2.0; x += 0.0137)
        EXPECT_NEAR(reconstruct_W(f, 0, x), std::max(x - 1.0, 0.0), f.grid.h) << x;
}

TEST(ReconstructW, BoundaryValueAndContinuity) {
    const auto& f = field();
    for (std::size_t j : {std::size_t{0}, std::size_t{1}, std::size_t{500}, std::size_t{1000}}) {
        double rho = f.rho[j];
        EXPECT_DOUBLE_EQ(reconstruct_W(f, j, rho), rho - 1.0);
        double eps = f.grid.h * rho;
        EXPECT_NEAR(reconstruct_W(f, j, rho - eps), rho - 1.0, 2.0 * f.grid.h);
    }
}

TEST(ReconstructW, DominatesExerciseValue) {
    const auto& f = field();
    const std::size_t j = 600;
    for (double x = 0.1; x < f.rho[j]; x += 0.05)
        EXPECT_GE(reconstruct_W(f, j, x), std::max(x - 1.0, 0.0) - f.grid.h);
}

TEST(Price, TerminalPayoffAndExerciseBoundary) {
    const auto& f = field();
    EXPECT_NEAR(price({120.0, 100.0, f.params.T}, f), 20.0, 100.0 * f.grid.h);
    EXPECT_DOUBLE_EQ(price({140.0, 100.0, f.params.T}, f), 40.0);
    const std::size_t j = 400;
    double t = f.params.T - f.grid.tau[j];
    double S = 100.0 * f.rho[j];
    EXPECT_NEAR(price({S, 100.0, t}, f), S - 100.0, 1e-9);
    EXPECT_DOUBLE_EQ(price({0.0, 100.0, 3.0}, f), 0.0);
}

TEST(Price, MatchesReconstructionAtMaturityHorizon) {
    const auto& f = field();
    EXPECT_DOUBLE_EQ(price({120.0, 100.0, 0.0}, f), 100.0 * reconstruct_W(f, f.grid.steps(), 1.2));
}

TEST(Price, Homogeneity) {
    const auto& f = field();
    for (double c : {0.5, 2.0, 10.0}) {
        for (double S : {40.0, 95.0, 130.0}) {
            double base = price({S, 100.0, 12.3}, f);
            double scaled = price({c * S, c * 100.0, 12.3}, f);
            EXPECT_NEAR(scaled, c * base, 4e-15 * std::max(1.0, std::abs(c * base)));
        }
    }
}

TEST(Price, TimeSnapsToNearestLevel) {
    const auto& f = field();
    EXPECT_EQ(nearest_time_index(f.grid, 0.0), 0u);
    EXPECT_EQ(nearest_time_index(f.grid, f.grid.k * 3.4), 3u);
    EXPECT_EQ(nearest_time_index(f.grid, f.params.T * 2), f.grid.steps());
}

TEST(Price, RejectsBadQueries) {
    const auto& f = field();
    EXPECT_THROW(price({-1.0, 100.0, 1.0}, f), DomainError);
    EXPECT_THROW(price({1.0, 0.0, 1.0}, f), DomainError);
    EXPECT_THROW(price({1.0, 1.0, 51.0}, f), DomainError);
    EXPECT_THROW(reconstruct_W(f, 0, 0.0), DomainError);
}
