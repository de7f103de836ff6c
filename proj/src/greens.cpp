#include "bubblegap/greens.hpp"

#include <boost/math/special_functions/expint.hpp>

#include "bubblegap/errors.hpp"
#include "bubblegap/specfun.hpp"

namespace bubblegap {
namespace {

constexpr double kOriginRadius = 1e-8;
constexpr Complex kI(0.0, 1.0);

double expint1(double x) { return boost::math::expint(1, x); }

// Fills e[j] = E_j(x) for j = 0..jmax (E_0 = e^{-x}/x).
void expint_table(double x, int jmax, std::vector<double>& e) {
    e.resize(static_cast<std::size_t>(jmax) + 1);
    const double ex = std::exp(-x);
    e[0] = ex / x;
    if (jmax >= 1) e[1] = expint1(x);
    for (int j = 1; j < jmax; ++j) e[j + 1] = (ex - x * e[j]) / j;
}

}  // namespace

LatticeGreensEvaluator::LatticeGreensEvaluator(Complex k, BlochVector alpha, EwaldOptions options)
    : k_(k), alpha_(alpha), options_(options) {
    if (!(options_.split > 0.0) || !(options_.tolerance > 0.0)) {
        throw DomainError("Ewald split parameter and tolerance must be positive");
    }
    if (is_static() && alpha_.is_zero()) {
        throw SingularityError("static quasi-periodic Green's function does not exist at alpha = (0,0)");
    }
    const double E = options_.split;
    const double E2 = E * E;
    const Complex k2 = k_ * k_;
    const double log_tol = std::log(1.0 / options_.tolerance);

    // (k/2E)^{2j}/j!, truncated once below roundoff.
    const Complex q = k2 / (4.0 * E2);
    Complex w = 1.0;
    j_weights_.push_back(w);
    for (int j = 1; j < 200 && !is_static(); ++j) {
        w *= q / double(j);
        if (std::abs(w) / j < 1e-18 || std::abs(w) > 1e300) break;
        j_weights_.push_back(w);
    }

    // Spatial cutoff: e^{-x}/x * e^{|k|^2/(4E^2)} < tol with x = E^2 r^2.
    const double growth = std::abs(k2) / (4.0 * E2);
    double x = log_tol + growth;
    for (int it = 0; it < 20; ++it) x = std::max(1.0, log_tol + growth - std::log(x));
    const double rmax = std::sqrt(x) / E;
    spatial_shells_ = std::min(options_.max_spatial_shells, static_cast<int>(std::ceil(rmax)) + 1);
    x_cut_ = std::min(700.0, x + 1.0);

    // Spectral cutoff: e^{-(|beta|^2 - Re k^2)/(4E^2)} < tol.
    const double bmax = std::sqrt(std::max(0.0, k2.real()) + 4.0 * E2 * log_tol);
    const int ms = std::min(options_.max_spectral_shells, static_cast<int>(std::ceil(bmax / kTwoPi)) + 1);
    for (int m1 = -ms; m1 <= ms; ++m1) {
        for (int m2 = -ms; m2 <= ms; ++m2) {
            const Vec2 beta{alpha_.alpha1 + kTwoPi * m1, alpha_.alpha2 + kTwoPi * m2};
            const double b2 = beta[0] * beta[0] + beta[1] * beta[1];
            const Complex d = k2 - b2;
            if (std::abs(d) < 1e-13 * (1.0 + b2)) {
                throw SingularityError("wavenumber lies on an empty-lattice line |alpha + 2 pi m| = k");
            }
            spectral_terms_.push_back({beta, std::exp(d / (4.0 * E2)) / d});
        }
    }

    Complex tail = 0.0;
    for (std::size_t j = 1; j < j_weights_.size(); ++j) tail += j_weights_[j] / double(j);
    const Complex eta = is_static() ? Complex(0.0) : specfun::eta(k_);
    origin_limit_ = spectral({0.0, 0.0}) + spatial({0.0, 0.0}, true) +
                    (kEulerGamma + 2.0 * std::log(E)) / (4.0 * kPi) - eta - tail / (4.0 * kPi);
}

Complex LatticeGreensEvaluator::spectral(const Vec2& z) const {
    Complex s = 0.0;
    for (const auto& t : spectral_terms_) {
        const double ph = t.beta[0] * z[0] + t.beta[1] * z[1];
        s += t.coeff * Complex(std::cos(ph), std::sin(ph));
    }
    return s;
}

CVec2 LatticeGreensEvaluator::spectral_gradient(const Vec2& z) const {
    CVec2 g{0.0, 0.0};
    for (const auto& t : spectral_terms_) {
        const double ph = t.beta[0] * z[0] + t.beta[1] * z[1];
        const Complex v = kI * t.coeff * Complex(std::cos(ph), std::sin(ph));
        g[0] += v * t.beta[0];
        g[1] += v * t.beta[1];
    }
    return g;
}

Complex LatticeGreensEvaluator::spatial(const Vec2& z, bool skip_origin) const {
    const double E2 = options_.split * options_.split;
    const int c1 = static_cast<int>(std::lround(z[0]));
    const int c2 = static_cast<int>(std::lround(z[1]));
    const int jmax = static_cast<int>(j_weights_.size());
    std::vector<double> e;
    Complex s = 0.0;
    for (int n1 = c1 - spatial_shells_; n1 <= c1 + spatial_shells_; ++n1) {
        for (int n2 = c2 - spatial_shells_; n2 <= c2 + spatial_shells_; ++n2) {
            if (skip_origin && n1 == 0 && n2 == 0) continue;
            const double d1 = z[0] - n1, d2 = z[1] - n2;
            const double x = E2 * (d1 * d1 + d2 * d2);
            if (x > x_cut_) continue;
            if (x == 0.0) throw SingularityError("Green's function evaluated at a lattice point");
            expint_table(x, jmax, e);
            Complex acc = 0.0;
            for (int j = 0; j < jmax; ++j) acc += j_weights_[j] * e[j + 1];
            const double ph = alpha_.alpha1 * n1 + alpha_.alpha2 * n2;
            s += Complex(std::cos(ph), std::sin(ph)) * acc;
        }
    }
    return -s / (4.0 * kPi);
}

CVec2 LatticeGreensEvaluator::spatial_gradient(const Vec2& z, bool skip_origin) const {
    const double E2 = options_.split * options_.split;
    const int c1 = static_cast<int>(std::lround(z[0]));
    const int c2 = static_cast<int>(std::lround(z[1]));
    const int jmax = static_cast<int>(j_weights_.size());
    std::vector<double> e;
    CVec2 g{0.0, 0.0};
    for (int n1 = c1 - spatial_shells_; n1 <= c1 + spatial_shells_; ++n1) {
        for (int n2 = c2 - spatial_shells_; n2 <= c2 + spatial_shells_; ++n2) {
            if (skip_origin && n1 == 0 && n2 == 0) continue;
            const double d1 = z[0] - n1, d2 = z[1] - n2;
            const double x = E2 * (d1 * d1 + d2 * d2);
            if (x > x_cut_) continue;
            if (x == 0.0) throw SingularityError("Green's function evaluated at a lattice point");
            expint_table(x, jmax, e);
            Complex acc = 0.0;
            for (int j = 0; j < jmax; ++j) acc += j_weights_[j] * e[j];
            const double ph = alpha_.alpha1 * n1 + alpha_.alpha2 * n2;
            const Complex v = Complex(std::cos(ph), std::sin(ph)) * acc;
            g[0] += v * d1;
            g[1] += v * d2;
        }
    }
    const double f = E2 / kTwoPi;
    return {g[0] * f, g[1] * f};
}

Complex LatticeGreensEvaluator::free_green(const Vec2& z) const {
    const double r = std::hypot(z[0], z[1]);
    if (r == 0.0) throw SingularityError("free Green's function is singular at 0");
    if (is_static()) return std::log(r) / kTwoPi;
    return -0.25 * kI * specfun::hankel1(0, k_ * r);
}

Complex LatticeGreensEvaluator::gamma_quasi(const Vec2& z) const {
    return spectral(z) + spatial(z, false);
}

Complex LatticeGreensEvaluator::gamma_remainder(const Vec2& z) const {
    const double r = std::hypot(z[0], z[1]);
    if (r < kOriginRadius) return origin_limit_;
    return spectral(z) + spatial(z, false) - free_green(z);
}

CVec2 LatticeGreensEvaluator::gamma_remainder_gradient(const Vec2& z) const {
    const double r = std::hypot(z[0], z[1]);
    const CVec2 gs = spectral_gradient(z);
    if (r < kOriginRadius) {
        const CVec2 gp = spatial_gradient(z, true);
        return {gs[0] + gp[0], gs[1] + gp[1]};
    }
    const CVec2 gp = spatial_gradient(z, false);
    // Radial derivative of the free Green's function.
    Complex dr;
    if (is_static()) {
        dr = 1.0 / (kTwoPi * r);
    } else {
        dr = 0.25 * kI * k_ * specfun::hankel1(1, k_ * r);
    }
    return {gs[0] + gp[0] - dr * z[0] / r, gs[1] + gp[1] - dr * z[1] / r};
}

Vec2 LatticeGreensEvaluator::remainder_origin_alpha_gradient() const {
    if (!is_static()) throw DomainError("alpha gradient is implemented for the static case only");
    const double E2 = options_.split * options_.split;
    Vec2 g{0.0, 0.0};
    for (const auto& t : spectral_terms_) {
        const double s = t.beta[0] * t.beta[0] + t.beta[1] * t.beta[1];
        const double f = 2.0 * std::exp(-s / (4.0 * E2)) * (1.0 / (4.0 * E2 * s) + 1.0 / (s * s));
        g[0] += f * t.beta[0];
        g[1] += f * t.beta[1];
    }
    const int S = spatial_shells_;
    for (int n1 = -S; n1 <= S; ++n1) {
        for (int n2 = -S; n2 <= S; ++n2) {
            if (n1 == 0 && n2 == 0) continue;
            const double x = E2 * (n1 * n1 + n2 * n2);
            if (x > x_cut_) continue;
            const double f = std::sin(alpha_.alpha1 * n1 + alpha_.alpha2 * n2) * expint1(x) / (4.0 * kPi);
            g[0] += f * n1;
            g[1] += f * n2;
        }
    }
    return g;
}

RemainderExpansion remainder_expansion(const LatticeGreensEvaluator& evaluator, int order) {
    if (order < 0 || order > specfun::kMaxOrder) throw DomainError("remainder expansion order out of range");
    const int P = order <= 24 ? 64 : 128;
    const double rho = 0.5;
    std::vector<Complex> samples(P);
    for (int p = 0; p < P; ++p) {
        const double t = kTwoPi * p / P;
        samples[p] = evaluator.gamma_remainder({rho * std::cos(t), rho * std::sin(t)});
    }
    RemainderExpansion out;
    out.k = evaluator.wavenumber();
    out.order = order;
    out.coeffs.resize(static_cast<std::size_t>(2 * order + 1));
    for (int l = -order; l <= order; ++l) {
        Complex c = 0.0;
        for (int p = 0; p < P; ++p) {
            const double t = -kTwoPi * double(l) * p / P;
            c += samples[p] * Complex(std::cos(t), std::sin(t));
        }
        c /= double(P);
        const Complex basis = evaluator.is_static() ? Complex(std::pow(rho, std::abs(l)))
                                                    : specfun::bessel_j(l, evaluator.wavenumber() * rho);
        if (basis == Complex(0.0) || !std::isfinite(std::abs(c / basis))) {
            throw DomainError("remainder expansion: degenerate sampling circle");
        }
        out.coeffs[static_cast<std::size_t>(l + order)] = c / basis;
    }
    return out;
}

Vec2 grad_alpha_gamma0(const BlochVector& alpha, const EwaldOptions& options) {
    return LatticeGreensEvaluator(0.0, alpha, options).remainder_origin_alpha_gradient();
}

}  // namespace bubblegap
