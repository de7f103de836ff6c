#include <doctest.h>

#include <vector>

#include "bubblegap/errors.hpp"
#include "bubblegap/greens.hpp"
#include "oracles.hpp"

using namespace bubblegap;

namespace {

const std::vector<Vec2> kPoints{{0.1, 0.2},   {0.3, -0.25}, {-0.4, 0.1}, {0.05, 0.45}, {-0.2, -0.35},
                                {0.45, 0.45}, {0.6, 0.1},   {-0.7, 0.3}, {0.25, 0.8}, {0.13, -0.07}};
const std::vector<BlochVector> kAlphas{{kPi, kPi}, {2.0, 3.0}, {kPi, 2.0}, {2.5, 4.0}, {3.5, 2.8}};

Vec2 shift(const Vec2& z, double dx, double dy) { return {z[0] + dx, z[1] + dy}; }
double norm(const Vec2& v) { return std::hypot(v[0], v[1]); }

EwaldOptions with_split(double e) {
    EwaldOptions o;
    o.split = e;
    return o;
}

}  // namespace

TEST_CASE("quasi-periodicity in both directions") {
    const BlochVector a(1.3, 2.1);
    const LatticeGreensEvaluator g(0.05, a);
    const Vec2 z{0.1, 0.2};
    const Complex v = g.gamma_quasi(z);
    CHECK(std::abs(g.gamma_quasi(shift(z, 1, 0)) - std::exp(Complex(0, a.alpha1)) * v) < 1e-10);
    CHECK(std::abs(g.gamma_quasi(shift(z, 0, 1)) - std::exp(Complex(0, a.alpha2)) * v) < 1e-10);
    CHECK(std::abs(g.gamma_quasi(shift(z, -1, -1)) - std::exp(Complex(0, -a.alpha1 - a.alpha2)) * v) < 1e-10);
}

TEST_CASE("Ewald split invariance") {
    for (double k : {0.0, 0.05, 1.0}) {
        for (const auto& a : kAlphas) {
            const LatticeGreensEvaluator g1(k, a), g2(k, a, with_split(2 * std::sqrt(kPi))),
                g3(k, a, with_split(0.5 * std::sqrt(kPi)));
            for (const auto& z : kPoints) {
                const Complex v = g1.gamma_quasi(z);
                CHECK(std::abs(v - g2.gamma_quasi(z)) < 1e-10);
                CHECK(std::abs(v - g3.gamma_quasi(z)) < 1e-10);
            }
        }
    }
}

TEST_CASE("agreement with the spectral row-sum oracle") {
    for (double k : {0.0, 0.05, 2.0}) {
        for (const auto& a : kAlphas) {
            const LatticeGreensEvaluator g(k, a);
            for (const auto& z : kPoints) CHECK(std::abs(g.gamma_quasi(z) - oracles::spectral_row_sum(k, a, z)) < 1e-8);
        }
    }
}

TEST_CASE("agreement with the tapered direct sum") {
    const double k = 0.05;
    for (const auto& a : kAlphas) {
        const LatticeGreensEvaluator g(k, a);
        for (const auto& z : kPoints) CHECK(std::abs(g.gamma_quasi(z) - oracles::tapered_direct_sum(k, a, z)) < 1e-8);
    }
}

TEST_CASE("reciprocity") {
    const BlochVector a(2.0, 3.0);
    const LatticeGreensEvaluator g(0.05, a), gm(0.05, a.negated());
    for (const auto& z : kPoints) CHECK(std::abs(g.gamma_quasi({-z[0], -z[1]}) - gm.gamma_quasi(z)) < 1e-12);
}

TEST_CASE("remainder is the lattice function minus the free kernel") {
    for (double k : {0.0, 0.05}) {
        const LatticeGreensEvaluator g(k, BlochVector(kPi, kPi));
        const Vec2 z{0.13, -0.07};
        CHECK(std::abs(g.gamma_remainder(z) - (g.gamma_quasi(z) - g.free_green(z))) < 1e-10);
        const Complex r0 = g.gamma_remainder(Vec2{0, 0});
        CHECK(std::isfinite(r0.real()));
        CHECK(std::isfinite(r0.imag()));
        // Continuity at the origin.
        CHECK(std::abs(g.gamma_remainder(Vec2{1e-5, 0}) - r0) < 1e-7);
    }
}

TEST_CASE("remainder at the origin against the spectral oracle") {
    for (double k : {0.0, 0.05}) {
        for (const auto& a : kAlphas) {
            const LatticeGreensEvaluator g(k, a);
            CHECK(std::abs(g.gamma_remainder(Vec2{0, 0}) - oracles::spectral_remainder_origin(k, a)) < 1e-7);
        }
    }
}

TEST_CASE("remainder gradient against central differences") {
    const double h = 1e-6;
    for (double k : {0.0, 0.05}) {
        const LatticeGreensEvaluator g(k, BlochVector(2.0, 3.0));
        for (const Vec2& z : {Vec2{0.0, 0.0}, Vec2{0.1, -0.2}, Vec2{0.3, 0.25}}) {
            const CVec2 grad = g.gamma_remainder_gradient(z);
            const Complex dx = (g.gamma_remainder(shift(z, h, 0)) - g.gamma_remainder(shift(z, -h, 0))) / (2 * h);
            const Complex dy = (g.gamma_remainder(shift(z, 0, h)) - g.gamma_remainder(shift(z, 0, -h))) / (2 * h);
            CHECK(std::abs(grad[0] - dx) < 1e-7);
            CHECK(std::abs(grad[1] - dy) < 1e-7);
        }
    }
}

TEST_CASE("local expansion reproduces the remainder") {
    for (double k : {0.0, 0.05}) {
        const LatticeGreensEvaluator g(k, BlochVector(2.5, 4.0));
        const auto ex = remainder_expansion(g, 12);
        for (const Vec2& z : {Vec2{0.1, 0.05}, Vec2{-0.15, 0.2}}) {
            const double r = norm(z), t = std::atan2(z[1], z[0]);
            Complex sum = 0.0;
            for (int l = -ex.order; l <= ex.order; ++l) {
                const Complex radial = k == 0.0 ? Complex(std::pow(r, std::abs(l))) : Complex(std::cyl_bessel_j(std::abs(l), k * r) * ((l < 0 && (l % 2)) ? -1.0 : 1.0));
                sum += ex.coefficient(l) * radial * std::exp(Complex(0, l * t));
            }
            CHECK(std::abs(sum - g.gamma_remainder(z)) < 1e-10);
        }
    }
}

TEST_CASE("alpha gradient of the static lattice function") {
    CHECK(norm(grad_alpha_gamma0(BlochVector(kPi, kPi))) < 1e-9);
    CHECK(std::abs(grad_alpha_gamma0(BlochVector(kPi / 2, kPi))[0]) > 1e-4);
    const Vec2 g = grad_alpha_gamma0(BlochVector(1.1, 2.3));
    const Vec2 gm = grad_alpha_gamma0(BlochVector(kTwoPi - 1.1, kTwoPi - 2.3));
    CHECK(norm({g[0] + gm[0], g[1] + gm[1]}) < 1e-12);
    for (const auto& a : kAlphas) {
        const Vec2 ref = oracles::grad_alpha_direct_sum(a), v = grad_alpha_gamma0(a);
        CHECK(norm({v[0] - ref[0], v[1] - ref[1]}) < 1e-8);
    }
    // Central differences of the origin remainder in alpha.
    const BlochVector a(1.1, 2.3);
    const double h = 1e-5;
    auto r0 = [](double a1, double a2) {
        return LatticeGreensEvaluator(0.0, BlochVector(a1, a2)).gamma_remainder(Vec2{0, 0}).real();
    };
    const double fd1 = (r0(a.alpha1 + h, a.alpha2) - r0(a.alpha1 - h, a.alpha2)) / (2 * h);
    const double fd2 = (r0(a.alpha1, a.alpha2 + h) - r0(a.alpha1, a.alpha2 - h)) / (2 * h);
    CHECK(std::abs(g[0] - fd1) < 1e-6);
    CHECK(std::abs(g[1] - fd2) < 1e-6);
}

TEST_CASE("zeros of the alpha1 gradient component lie at 0 and pi") {
    for (double a2 : {kPi / 2, kPi, 3 * kPi / 2}) {
        const int n = 721;
        double prev = 0.0;
        for (int i = 1; i < n - 1; ++i) {
            const double a1 = kTwoPi * i / (n - 1);
            const double v = grad_alpha_gamma0(BlochVector(a1, a2))[0];
            if (i > 1 && (prev > 0) != (v > 0)) {
                const double mid = a1 - 0.5 * kTwoPi / (n - 1);
                CHECK(std::abs(mid - kPi) < kTwoPi / (n - 1));
            }
            prev = v;
        }
    }
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(LatticeGreensEvaluator(0.0, BlochVector(0.0, 0.0)), SingularityError);
    CHECK_THROWS_AS(grad_alpha_gamma0(BlochVector(0.0, 0.0)), SingularityError);
    // Empty-lattice pole: k = |alpha|.
    CHECK_THROWS_AS(LatticeGreensEvaluator(1.0, BlochVector(1.0, 0.0)), SingularityError);
}
