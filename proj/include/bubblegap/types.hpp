#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace bubblegap {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Vec2 = std::array<double, 2>;
using CVec2 = std::array<Complex, 2>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kEulerGamma = std::numbers::egamma;

inline double reduce_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi;
    return r;
}

// Quasi-momentum in [0, 2pi)^2.
struct BlochVector {
    double alpha1 = 0.0;
    double alpha2 = 0.0;

    BlochVector() = default;
    BlochVector(double a1, double a2) : alpha1(reduce_angle(a1)), alpha2(reduce_angle(a2)) {}

    BlochVector negated() const { return BlochVector(-alpha1, -alpha2); }
    // True when alpha is a reciprocal lattice vector, i.e. alpha = 0 mod 2pi.
    bool is_zero(double tol = 1e-14) const {
        auto near0 = [tol](double a) { return a < tol || kTwoPi - a < tol; };
        return near0(alpha1) && near0(alpha2);
    }
};

}  // namespace bubblegap
