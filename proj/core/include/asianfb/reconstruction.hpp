#pragma once

#include "asianfb/fbsolver.hpp"

namespace asianfb {

/// Spot S, running average A and calendar time t in [0, T].
struct PriceQuery {
    double S = 0.0;
    double A = 1.0;
    double t = 0.0;
};

/// W(x, tau_j) from Pi^j and rho_j:
///   x >= rho_j:     W = x - 1
///   0 < x < rho_j:  W = (x / rho_j) (rho_j - 1 + int_0^{ln(rho_j/x)} e^xi Pi(xi) dxi)
/// The integral runs over full grid cells plus one linearly interpolated partial cell.
double reconstruct_W(const SolutionField& field, std::size_t j, double x);

/// Index of the grid time nearest to tau.
std::size_t nearest_time_index(const Grid& grid, double tau);

/// V(S, A, t) = A W(S/A, T - t), with T - t snapped to the nearest tau_j.
double price(const PriceQuery& query, const SolutionField& field);

} // namespace asianfb
