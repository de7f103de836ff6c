#pragma once

#include "bubblegap/greens.hpp"
#include "bubblegap/types.hpp"

namespace bubblegap {

enum class RemainderMethod {
    LatticeSum,  // local expansion of the remainder plus the addition theorem
    Quadrature,  // double trapezoid rule on the circle
};

struct Tolerances {
    double root = 1e-12;           // Muller step and residual tolerance
    int max_iterations = 60;
    double imag_part = 1e-8;       // larger |Im omega| marks a spurious root
    double singular_value = 1e-8;  // sigma_min / ||A|| acceptance threshold
};

struct CrystalConfig {
    double rho_b = 1.0;
    double kappa_b = 1.0;
    double rho_w = 5000.0;
    double kappa_w = 5000.0;
    double R = 0.05;
    double epsilon = 0.0;
    int N = 5;
    int Q = 100;
    int circle_points = 64;
    RemainderMethod remainder = RemainderMethod::LatticeSum;
    EwaldOptions ewald;
    Tolerances tol;
    // Upper gap bound cap, as a multiple of the band edge.
    double gap_cap_factor = 4.0;

    double delta() const { return rho_b / rho_w; }
    double R_d() const { return R + epsilon; }
    // Throws ConfigError on invalid parameters.
    void validate() const;
};

}  // namespace bubblegap
