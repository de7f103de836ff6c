#include "oracles.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include "bubblegap/errors.hpp"

namespace bubblegap::oracles {
namespace {

constexpr Complex kI(0.0, 1.0);

// sum_m e^{i(a + 2 pi m) y}/(g^2 + (a + 2 pi m)^2) for y in [0, 1).
Complex periodic_line_green(Complex g, double a, double y) {
    const Complex em = std::exp(-g - kI * a);
    const Complex ep = std::exp(-g + kI * a);
    return (std::exp(-g * y) / (1.0 - em) + std::exp(-g * (1.0 - y) + kI * a) / (1.0 - ep)) / (2.0 * g);
}

// Rows indexed by the outer coordinate (u, a_outer); the inner coordinate
// (y, a_inner) is summed in closed form.
Complex row_sum(double k, double a_outer, double a_inner, double u, double y) {
    const double p = std::floor(y);
    const double y0 = y - p;
    const double ymin = std::min(y0, 1.0 - y0);
    Complex total = 0.0;
    for (int m = 0;; ++m) {
        Complex pair = 0.0;
        double bmin = 1e300;
        for (int s : {1, -1}) {
            if (m == 0 && s == -1) continue;
            const double b = a_outer + kTwoPi * s * m;
            bmin = std::min(bmin, std::abs(b));
            const Complex g = std::sqrt(Complex(b * b - k * k));
            if (std::abs(g) < 1e-12) throw SingularityError("row sum: degenerate row");
            pair -= std::exp(kI * (b * u)) * periodic_line_green(g, a_inner, y0);
        }
        total += pair;
        if (m > 2 && std::exp(-bmin * ymin) / bmin < 1e-18) break;
        if (m > 2000000) throw NonConvergence("row sum did not converge", total, 0.0);
    }
    return total * std::exp(kI * (a_inner * p));
}

double frac_distance(double v) {
    const double f = v - std::floor(v);
    return std::min(f, 1.0 - f);
}

bool rows_regular(double k, double a) {
    for (int m = -3; m <= 3; ++m) {
        const double b = a + kTwoPi * m;
        if (std::abs(b * b - k * k) < 1e-10) return false;
    }
    return true;
}

Complex free_green(double k, double r) {
    if (k == 0.0) return std::log(r) / kTwoPi;
    return -0.25 * kI * boost_hankel1(0, k * r);
}

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

}  // namespace

Complex spectral_row_sum(double k, const BlochVector& alpha, const Vec2& z) {
    const double d1 = frac_distance(z[0]), d2 = frac_distance(z[1]);
    const bool ok1 = rows_regular(k, alpha.alpha1), ok2 = rows_regular(k, alpha.alpha2);
    // Prefer summing in closed form along the coordinate farthest from the
    // lattice lines; rows in the other direction then decay fastest.
    bool inner_is_second = d2 >= d1;
    if (inner_is_second && !ok1) inner_is_second = false;
    if (!inner_is_second && !ok2) inner_is_second = true;
    if (inner_is_second) return row_sum(k, alpha.alpha1, alpha.alpha2, z[0], z[1]);
    return row_sum(k, alpha.alpha2, alpha.alpha1, z[1], z[0]);
}

Complex spectral_remainder_origin(double k, const BlochVector& alpha) {
    const double h = 0.05;
    Complex avg = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double t = kTwoPi * j / 8.0;
        avg += spectral_row_sum(k, alpha, {h * std::cos(t), h * std::sin(t)}) - free_green(k, h);
    }
    avg /= 8.0;
    return k == 0.0 ? avg : avg / boost_bessel_j(0, k * h);
}

Complex tapered_direct_sum(double k, const BlochVector& alpha, const Vec2& z, double L, double flat) {
    if (!(k > 0.0)) throw DomainError("tapered direct sum requires k > 0");
    const int S = static_cast<int>(std::ceil(L)) + 2;
    Complex total = 0.0;
    for (int n1 = -S; n1 <= S; ++n1) {
        for (int n2 = -S; n2 <= S; ++n2) {
            const double r = std::hypot(z[0] - n1, z[1] - n2);
            if (r >= L) continue;
            if (r == 0.0) throw SingularityError("tapered direct sum at a lattice point");
            const double w = r <= flat * L ? 1.0 : smooth_step((L - r) / (L - flat * L));
            total += w * std::exp(kI * (alpha.alpha1 * n1 + alpha.alpha2 * n2)) * free_green(k, r);
        }
    }
    return total;
}

Vec2 grad_alpha_direct_sum(const BlochVector& alpha, int shells) {
    auto window = [&](int S) {
        Vec2 g{0.0, 0.0};
        for (int m1 = -S; m1 <= S; ++m1) {
            for (int m2 = -S; m2 <= S; ++m2) {
                const double b1 = alpha.alpha1 + kTwoPi * m1, b2 = alpha.alpha2 + kTwoPi * m2;
                const double s = b1 * b1 + b2 * b2;
                if (s == 0.0) throw SingularityError("alpha gradient at alpha = (0,0)");
                g[0] += 2.0 * b1 / (s * s);
                g[1] += 2.0 * b2 / (s * s);
            }
        }
        return g;
    };
    const Vec2 a = window(shells), b = window(2 * shells);
    return {(4.0 * b[0] - a[0]) / 3.0, (4.0 * b[1] - a[1]) / 3.0};
}

double boost_bessel_j(int n, double x) { return boost::math::cyl_bessel_j(n, x); }
double boost_bessel_y(int n, double x) { return boost::math::cyl_neumann(n, x); }
Complex boost_hankel1(int n, double x) { return {boost_bessel_j(n, x), boost_bessel_y(n, x)}; }

}  // namespace bubblegap::oracles
