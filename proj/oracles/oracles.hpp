#pragma once

#include "bubblegap/types.hpp"

// Reference evaluations that share no code path with the production
// Ewald evaluator. Used by the tests and by the validate command.
namespace bubblegap::oracles {

// sum_m e^{i beta_m.z}/(k^2 - |beta_m|^2), summing one index in closed form
// (the periodic 1D Green's function) and the other directly.
Complex spectral_row_sum(double k, const BlochVector& alpha, const Vec2& z);

// Gamma^{alpha,k}(z) - Gamma^k(z) at z = 0 from symmetric averages of the
// row sum at four small offsets, Richardson-extrapolated in the offset.
Complex spectral_remainder_origin(double k, const BlochVector& alpha);

// sum_n e^{i alpha.n} Gamma^k(z - n) w(|z - n|/L) with a C-infinity window
// equal to 1 on [0, flat*L], flat to all orders at the origin, and 0 beyond L
// (k > 0, Boost Hankel functions). Converges quickly only for k well away
// from every |alpha + 2 pi m|.
Complex tapered_direct_sum(double k, const BlochVector& alpha, const Vec2& z, double L = 100.0,
                           double flat = 0.0);

// 2 sum_m beta_m/|beta_m|^4 over |beta_i| <= 2 pi shells, Richardson
// extrapolated in the window size.
Vec2 grad_alpha_direct_sum(const BlochVector& alpha, int shells = 400);

// Boost.Math values of J_n, Y_n and the Hankel function.
double boost_bessel_j(int n, double x);
double boost_bessel_y(int n, double x);
Complex boost_hankel1(int n, double x);

}  // namespace bubblegap::oracles
