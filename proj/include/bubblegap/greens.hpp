#pragma once

#include <vector>

#include "bubblegap/types.hpp"

namespace bubblegap {

struct EwaldOptions {
    double split = std::sqrt(kPi);
    double tolerance = 1e-12;
    // Hard caps on the number of lattice shells per side; a badly chosen
    // split parameter yields a wrong answer rather than an endless sum.
    int max_spatial_shells = 20;
    int max_spectral_shells = 20;
};

// Gamma^{alpha,k}(z) = sum_n e^{i alpha.n} Gamma^k(z - n) on the unit square
// lattice, Gamma^k = -(i/4) H_0(k|z|) for k != 0 and ln|z|/(2 pi) for k = 0,
// evaluated by Ewald summation. Immutable after construction.
class LatticeGreensEvaluator {
public:
    LatticeGreensEvaluator(Complex k, BlochVector alpha, EwaldOptions options = {});

    Complex wavenumber() const { return k_; }
    const BlochVector& alpha() const { return alpha_; }
    double split() const { return options_.split; }
    bool is_static() const { return k_ == Complex(0.0); }

    Complex gamma_quasi(const Vec2& z) const;
    Complex free_green(const Vec2& z) const;
    // Gamma^{alpha,k} - Gamma^k, smooth for |z| < 1.
    Complex gamma_remainder(const Vec2& z) const;
    CVec2 gamma_remainder_gradient(const Vec2& z) const;
    // d/dalpha of the remainder at the origin (static case only).
    Vec2 remainder_origin_alpha_gradient() const;

private:
    struct SpectralTerm {
        Vec2 beta;
        Complex coeff;
    };
    Complex spectral(const Vec2& z) const;
    CVec2 spectral_gradient(const Vec2& z) const;
    // Spatial sum over lattice points; the n = 0 term is dropped when
    // skip_origin is set.
    Complex spatial(const Vec2& z, bool skip_origin) const;
    CVec2 spatial_gradient(const Vec2& z, bool skip_origin) const;
    Complex origin_term_minus_free(double r) const;

    Complex k_;
    BlochVector alpha_;
    EwaldOptions options_;
    std::vector<Complex> j_weights_;  // (k/2E)^{2j}/j!
    std::vector<SpectralTerm> spectral_terms_;
    int spatial_shells_ = 0;
    double x_cut_ = 700.0;
    Complex origin_limit_;  // remainder value at z = 0
};

// Regular expansion of the remainder about the origin:
//   Gamma^{alpha,k}(z) - Gamma^k(z) = sum_l c_l B_l(z),
// with B_l(z) = J_l(k|z|) e^{i l arg z} for k != 0 and |z|^{|l|} e^{i l arg z}
// for k = 0. Coefficients are obtained from samples on a circle.
struct RemainderExpansion {
    Complex k;
    int order = 0;
    std::vector<Complex> coeffs;  // index l + order
    Complex coefficient(int l) const { return coeffs[static_cast<std::size_t>(l + order)]; }
};

RemainderExpansion remainder_expansion(const LatticeGreensEvaluator& evaluator, int order);

// Exact gradient of the static lattice function Gamma^{alpha,0}(0) in alpha,
// grad = 2 sum_m beta_m/|beta_m|^4 with beta_m = alpha + 2 pi m.
Vec2 grad_alpha_gamma0(const BlochVector& alpha, const EwaldOptions& options = {});

}  // namespace bubblegap
