#include "bubblegap/solver.hpp"

#include <algorithm>
#include <limits>

#include "bubblegap/asymptotics.hpp"
#include "bubblegap/errors.hpp"
#include "bubblegap/parallel.hpp"

namespace bubblegap {
namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double singular_value_ratio(const CMatrix& A) {
    Eigen::JacobiSVD<CMatrix> svd(A);
    const auto& s = svd.singularValues();
    if (s(0) == 0.0) return 0.0;
    return s(s.size() - 1) / s(0);
}

Complex determinant(const CMatrix& A) { return Eigen::PartialPivLU<CMatrix>(A).determinant(); }

// det of A after per-call row scaling; the phase is that of det A.
Complex scaled_determinant(const CMatrix& A) {
    Eigen::VectorXd rows(A.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        const double m = A.row(i).cwiseAbs().maxCoeff();
        rows(i) = m > 0.0 ? 1.0 / m : 1.0;
    }
    return determinant(rows.asDiagonal() * A);
}

bool phase_flip(Complex a, Complex b) { return (b * std::conj(a)).real() < 0.0; }

std::function<CMatrix(Complex)> a_alpha_matrix(const CrystalConfig& config, const BlochVector& alpha) {
    return [config, alpha](Complex w) { return assemble_A_alpha(w, config, alpha).dense(); };
}

// Muller on the balanced determinant from three seeds; the candidate is
// returned only if it is real, positive and passes the singular value test.
std::optional<BandPoint> refine_band_root(const CrystalConfig& config, const BlochVector& alpha,
                                          const std::array<Complex, 3>& seeds, double lo, double hi) {
    const BalancedDeterminant f(a_alpha_matrix(config, alpha), seeds[1]);
    MullerResult r;
    try {
        r = muller_find_root(f, seeds, config.tol.root, config.tol.max_iterations);
    } catch (const NonConvergence&) {
        return std::nullopt;
    } catch (const SingularityError&) {
        return std::nullopt;
    }
    const double w = r.root.real();
    if (!(std::abs(r.root.imag()) < config.tol.imag_part) || !(w > lo) || !(w < hi)) return std::nullopt;
    const double res = f.residual(w);
    if (!(res < config.tol.singular_value)) return std::nullopt;
    return BandPoint{w, res};
}

}  // namespace

MullerResult muller_find_root(const std::function<Complex(Complex)>& f, const std::array<Complex, 3>& seeds,
                              double tol, int max_iter) {
    if (!(tol > 0.0)) throw DomainError("Muller tolerance must be positive");
    Complex x0 = seeds[0], x1 = seeds[1], x2 = seeds[2];
    if (x0 == x1 || x1 == x2 || x0 == x2) throw DomainError("Muller seeds must be distinct");
    Complex f0 = f(x0), f1 = f(x1), f2 = f(x2);
    if (!finite(f0) || !finite(f1) || !finite(f2)) throw DomainError("Muller: objective not finite at the seeds");
    Complex best = x2;
    double best_res = std::abs(f2);
    for (const auto& [x, fx] : {std::pair{x0, f0}, std::pair{x1, f1}}) {
        if (std::abs(fx) < best_res) {
            best = x;
            best_res = std::abs(fx);
        }
    }
    if (f2 == Complex(0.0)) return {x2, 0, 0.0};
    for (int it = 1; it <= max_iter; ++it) {
        const Complex h1 = x1 - x0, h2 = x2 - x1;
        const Complex d1 = (f1 - f0) / h1, d2 = (f2 - f1) / h2;
        const Complex a = (d2 - d1) / (h2 + h1);
        const Complex b = a * h2 + d2;
        const Complex disc = std::sqrt(b * b - 4.0 * f2 * a);
        const Complex den = std::abs(b + disc) >= std::abs(b - disc) ? b + disc : b - disc;
        Complex dx = den == Complex(0.0) ? Complex(1e-3 * (1.0 + std::abs(x2))) : -2.0 * f2 / den;
        Complex x3 = x2 + dx;
        Complex f3 = f(x3);
        for (int back = 0; back < 30 && !finite(f3); ++back) {
            dx *= 0.5;
            x3 = x2 + dx;
            f3 = f(x3);
        }
        if (!finite(f3)) break;
        if (std::abs(f3) < best_res) {
            best = x3;
            best_res = std::abs(f3);
        }
        if (f3 == Complex(0.0) || std::abs(dx) < tol * std::max(1.0, std::abs(x3))) return {x3, it, std::abs(f3)};
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        x2 = x3;
        f2 = f3;
    }
    throw NonConvergence("Muller iteration did not converge", best, best_res);
}

BalancedDeterminant::BalancedDeterminant(std::function<CMatrix(Complex)> matrix, Complex reference)
    : matrix_(std::move(matrix)) {
    const CMatrix A = matrix_(reference);
    rows_.resize(A.rows());
    cols_.resize(A.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        const double m = A.row(i).cwiseAbs().maxCoeff();
        rows_(i) = m > 0.0 ? 1.0 / m : 1.0;
    }
    const CMatrix B = rows_.asDiagonal() * A;
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        const double m = B.col(j).cwiseAbs().maxCoeff();
        cols_(j) = m > 0.0 ? 1.0 / m : 1.0;
    }
}

Complex BalancedDeterminant::operator()(Complex omega) const {
    return determinant(rows_.asDiagonal() * matrix_(omega) * cols_.asDiagonal());
}

double BalancedDeterminant::residual(double omega) const {
    return singular_value_ratio(rows_.asDiagonal() * matrix_(omega) * cols_.asDiagonal());
}

BandPoint band_omega1(const BlochVector& alpha, const CrystalConfig& config) {
    if (alpha.is_zero()) return {0.0, 0.0};
    const double seed = omega1_asymptotic(alpha, config);
    const double inf = std::numeric_limits<double>::infinity();
    if (auto p = refine_band_root(config, alpha, {seed * 0.99, seed, seed * 1.01}, 0.0, inf)) return *p;

    // Fallback: local minima of the smallest singular value on a coarse scan.
    const int n = 40;
    std::vector<double> grid(n), sv(n, inf);
    for (int i = 0; i < n; ++i) {
        grid[i] = seed * (0.25 + 3.75 * i / (n - 1));
        try {
            sv[i] = singular_value_ratio(assemble_A_alpha(grid[i], config, alpha).dense());
        } catch (const SingularityError&) {
        }
    }
    for (int i = 0; i < n; ++i) {
        const bool left = i == 0 || sv[i] <= sv[i - 1];
        const bool right = i == n - 1 || sv[i] <= sv[i + 1];
        if (!(left && right)) continue;
        const double h = 0.5 * (grid[1] - grid[0]);
        if (auto p = refine_band_root(config, alpha, {grid[i] - h, grid[i], grid[i] + h}, 0.0, inf)) return *p;
    }
    throw NonConvergence("first band frequency not found at alpha = (" + std::to_string(alpha.alpha1) + ", " +
                             std::to_string(alpha.alpha2) + ")",
                         seed, inf);
}

std::optional<BandPoint> band_omega2(const BlochVector& alpha, const CrystalConfig& config, double from,
                                     double cap) {
    const int n = 48;
    std::vector<double> grid(n);
    std::vector<std::optional<Complex>> det(n);
    for (int i = 0; i < n; ++i) {
        grid[i] = from + (cap - from) * i / (n - 1);
        try {
            det[i] = scaled_determinant(assemble_A_alpha(grid[i], config, alpha).dense());
        } catch (const SingularityError&) {
        }
    }
    for (int i = 0; i + 1 < n; ++i) {
        if (!det[i] || !det[i + 1] || !phase_flip(*det[i], *det[i + 1])) continue;
        const double a = grid[i], b = grid[i + 1], h = b - a;
        if (auto p = refine_band_root(config, alpha, {a, 0.5 * (a + b), b}, std::max(from, a - h), b + h)) {
            return p;
        }
    }
    return std::nullopt;
}

double band_edge_omega_star(double alpha1, const CrystalConfig& config) {
    const double w = band_omega1(BlochVector(alpha1, kPi), config).omega;
    for (double t : {-0.3, 0.3}) {
        const double wt = band_omega1(BlochVector(alpha1, kPi + t), config).omega;
        if (wt > w * (1.0 + 1e-9)) {
            throw InconsistencyError("first band does not peak at alpha2 = pi for alpha1 = " + std::to_string(alpha1));
        }
    }
    return w;
}

GapBounds gap_bounds(double alpha1, const CrystalConfig& config) {
    GapBounds g;
    g.lower = band_edge_omega_star(alpha1, config);
    const double cap = config.gap_cap_factor * g.lower;
    g.upper = cap;
    const double from = g.lower * (1.0 + 1e-3);
    for (double a2 : {0.0, kPi / 4, kPi / 2, 3 * kPi / 4, kPi}) {
        if (auto r = band_omega2(BlochVector(alpha1, a2), config, from, g.upper)) g.upper = std::min(g.upper, r->omega);
    }
    g.capped = g.upper == cap;
    return g;
}

DefectResult defect_omega(double alpha1, const CrystalConfig& config, const DefectOptions& options) {
    if (config.epsilon == 0.0) throw DomainError("defect frequency requires a nonzero perturbation");
    DefectResult out;
    out.gap = options.gap ? *options.gap : gap_bounds(alpha1, config);
    const double edge = out.gap.lower;
    const double lo = edge * (1.0 + 1e-4), hi = out.gap.upper;
    if (!(hi > lo)) {
        out.note = "no gap above the first band";
        return out;
    }
    auto mmat = [&](Complex w) { return assemble_M(w, config, alpha1).dense(); };
    auto detm = [&](Complex w) { return determinant(mmat(w)); };
    auto accept = [&](const MullerResult& r, double a, double b) -> bool {
        const double w = r.root.real();
        if (!(std::abs(r.root.imag()) < config.tol.imag_part) || !(w > a) || !(w < b)) return false;
        const double res = singular_value_ratio(mmat(w));
        if (!(res < config.tol.singular_value)) return false;
        out.omega = w;
        out.residual = res;
        return true;
    };
    // Roots outside [a, b] are rejected so a scan bracket cannot return a
    // different, higher root.
    auto try_seeds = [&](const std::array<Complex, 3>& s, double a, double b) {
        try {
            return accept(muller_find_root(detm, s, config.tol.root, config.tol.max_iterations), a, b);
        } catch (const NonConvergence&) {
        } catch (const SingularityError&) {
        }
        return false;
    };

    if (options.seed && *options.seed > lo && *options.seed < hi) {
        const double s = *options.seed;
        const double h = std::min(1e-3 * s, 0.5 * (s - edge));
        if (try_seeds({s - h, s, s + h}, lo, hi)) return out;
    }

    // Geometric scan in omega - omega* for phase flips of det M.
    out.scanned = true;
    const int n = std::max(4, options.scan_points);
    const double d0 = lo - edge, d1 = hi - edge;
    std::vector<double> grid(n);
    std::vector<Complex> det(n);
    for (int i = 0; i < n; ++i) {
        grid[i] = edge + d0 * std::pow(d1 / d0, double(i) / (n - 1));
        if (i == n - 1) grid[i] = hi * (1.0 - 1e-9);
        det[i] = detm(grid[i]);
    }
    int flips_after = 0;
    for (int i = 0; i + 1 < n; ++i) {
        if (!phase_flip(det[i], det[i + 1])) continue;
        if (out.omega) {
            ++flips_after;
            continue;
        }
        const double a = grid[i], b = grid[i + 1];
        const double pad = 1e-6 * b;
        if (!try_seeds({a, std::sqrt(a * b), b}, a - pad, b + pad)) {
            // Bisection on the phase flip, then one more Muller attempt.
            double x = a, y = b;
            Complex fx = det[i];
            for (int k = 0; k < 40; ++k) {
                const double m = 0.5 * (x + y);
                const Complex fm = detm(m);
                if (phase_flip(fx, fm)) {
                    y = m;
                } else {
                    x = m;
                    fx = fm;
                }
            }
            const double m = 0.5 * (x + y), h = std::max(y - x, 1e-9 * m);
            try_seeds({m - h, m, m + h}, a - pad, b + pad);
        }
    }
    out.extra_sign_changes = flips_after;
    if (!out.omega) out.note = "no root of det M in the gap";
    return out;
}

std::string to_string(BandMethod method) {
    switch (method) {
        case BandMethod::Operator:
            return "operator";
        case BandMethod::DiluteAsymptotic:
            return "dilute-asymptotic";
        case BandMethod::SmallPerturbation:
            return "small-perturbation";
    }
    return "unknown";
}

double BandCurve::min_omega() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : samples)
        if (s.ok) m = std::min(m, s.omega);
    return m;
}

double BandCurve::max_omega() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& s : samples)
        if (s.ok) m = std::max(m, s.omega);
    return m;
}

double BandCurve::argmin_alpha1() const {
    double m = std::numeric_limits<double>::infinity(), a = 0.0;
    for (const auto& s : samples) {
        if (s.ok && s.omega < m) {
            m = s.omega;
            a = s.alpha1;
        }
    }
    return a;
}

std::vector<double> uniform_alpha1_grid(int points) {
    if (points < 2) throw ConfigError("alpha1 grid needs at least 2 points");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) g[i] = kTwoPi * i / (points - 1);
    return g;
}

DefectBand defect_band(const CrystalConfig& config, const std::vector<double>& alpha1_grid) {
    const std::size_t n = alpha1_grid.size();
    DefectBand band;
    band.curve.method = BandMethod::Operator;
    band.curve.samples.resize(n);
    band.points.resize(n);
    band.dilute.resize(n);
    std::vector<double> maxima(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        const double a1 = alpha1_grid[i];
        BandSample& s = band.curve.samples[i];
        s.alpha1 = a1;
        try {
            const auto table = band_integral_table(a1, config);
            maxima[i] = table->band_max();
            DefectOptions opt;
            opt.gap = gap_bounds(a1, config);
            if (config.R_d() < config.R) {
                try {
                    band.dilute[i] = dilute_defect_omega(*table, config).omega;
                    opt.seed = band.dilute[i];
                } catch (const Error&) {
                }
            }
            band.points[i] = defect_omega(a1, config, opt);
            const DefectResult& r = band.points[i];
            s.ok = r.omega.has_value();
            s.omega = r.omega.value_or(std::numeric_limits<double>::quiet_NaN());
            s.residual = r.residual;
            s.note = r.note;
        } catch (const Error& e) {
            s.ok = false;
            s.omega = std::numeric_limits<double>::quiet_NaN();
            s.note = e.what();
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        band.curve.partial = band.curve.partial || !band.curve.samples[i].ok;
        band.band_maximum = std::max(band.band_maximum, maxima[i]);
    }
    return band;
}

CurvatureFit curvature_c_delta(double alpha1, const CrystalConfig& config, const std::vector<double>& offsets) {
    std::vector<double> t{0.0};
    for (double o : offsets)
        if (o != 0.0) t.push_back(o);
    const std::size_t n = t.size();
    if (n < 3) throw DomainError("curvature fit needs at least two nonzero offsets");
    std::vector<double> y(n);
    parallel_for(n, [&](std::size_t i) { y[i] = band_omega1(BlochVector(alpha1, kPi + t[i]), config).omega; });
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd b(n);
    for (std::size_t i = 0; i < n; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = -0.5 * t[i] * t[i];
        b(i) = y[i];
    }
    const Eigen::Vector2d x = A.colPivHouseholderQr().solve(b);
    CurvatureFit fit;
    fit.omega_star = x(0);
    fit.c = x(1);
    fit.rms_residual = std::sqrt((A * x - b).squaredNorm() / double(n));
    if (!(fit.c > 0.0)) throw InconsistencyError("band curvature c_delta is not positive");
    return fit;
}

OperatorCriticalEpsilon operator_critical_epsilon(const CrystalConfig& config) {
    OperatorCriticalEpsilon out;
    out.omega_star_global = band_omega1(BlochVector(kPi, kPi), config).omega;
    CrystalConfig base = config;
    base.epsilon = 0.0;
    const GapBounds gap = gap_bounds(0.0, base);
    const auto table = band_integral_table(0.0, base);
    if (!(out.omega_star_global < gap.upper)) throw NotFound("band maximum lies above the gap at alpha1 = 0");

    auto defect_at = [&](double eps) -> std::optional<double> {
        CrystalConfig c = config;
        c.epsilon = eps;
        DefectOptions opt;
        opt.gap = gap;
        try {
            opt.seed = dilute_defect_omega(*table, c).omega;
        } catch (const Error&) {
        }
        ++out.evaluations;
        return defect_omega(0.0, c, opt).omega;
    };
    const double R = config.R;
    // No root in the gap for a tiny perturbation means it hugs the edge.
    auto g = [&](double eps) {
        const auto w = defect_at(eps);
        return w ? *w - out.omega_star_global : -(out.omega_star_global - gap.lower);
    };
    double a = -0.05 * R, b = -0.5 * R;
    double ga = g(a), gb = g(b);
    for (int k = 0; k < 4 && ga >= 0.0; ++k) {
        a *= 0.5;
        ga = g(a);
    }
    for (int k = 0; k < 4 && gb <= 0.0; ++k) {
        b = -R + 0.5 * (b + R);
        gb = g(b);
    }
    if (!(ga < 0.0 && gb > 0.0)) throw NotFound("could not bracket the operator critical perturbation");
    // Illinois variant of regula falsi.
    int side = 0;
    double c = a, gc = ga;
    for (int it = 0; it < 60; ++it) {
        c = (a * gb - b * ga) / (gb - ga);
        gc = g(c);
        if (std::abs(gc) < 1e-11 || std::abs(b - a) < 1e-12 * R) break;
        if ((gc < 0.0) == (ga < 0.0)) {
            a = c;
            ga = gc;
            if (side == -1) gb *= 0.5;
            side = -1;
        } else {
            b = c;
            gb = gc;
            if (side == 1) ga *= 0.5;
            side = 1;
        }
    }
    out.epsilon = c;
    out.omega = gc + out.omega_star_global;
    out.residual = std::abs(gc);
    return out;
}

}  // namespace bubblegap
