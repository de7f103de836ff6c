// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "bubblegap/asymptotics.hpp"
#include "bubblegap/errors.hpp"
#include "bubblegap/greens.hpp"
#include "bubblegap/operators.hpp"
#include "bubblegap/solver.hpp"
#include "bubblegap/specfun.hpp"
#include "oracles.hpp"

using namespace bubblegap;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

CrystalConfig crystal(double rho_w, double R, double eps_rel) {
    CrystalConfig c;
    c.rho_w = c.kappa_w = rho_w;
    c.R = R;
    c.epsilon = eps_rel * R;
    c.validate();
    return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Shared by the dilute band checks.
const DefectBand& fig2_band() {
    static const DefectBand band = defect_band(crystal(5000, 0.05, -0.2), uniform_alpha1_grid(41));
    return band;
}
double fig2_seconds = 0.0;

Outcome first_band_scaling() {
    const auto t0 = std::chrono::steady_clock::now();
    const BlochVector a(kPi, kPi);
    double err[2];
    const double rho[2] = {5000, 20000};
    for (int i = 0; i < 2; ++i) {
        const CrystalConfig c = crystal(rho[i], 0.05, 0.0);
        const double det = band_omega1(a, c).omega, asym = omega1_asymptotic(a, c);
        err[i] = std::abs(det - asym) / asym;
    }
    const double ratio = err[0] / err[1], t = seconds_since(t0);
    const bool pass = err[0] <= 0.05 && err[1] <= 0.05 && ratio >= 2.5 && ratio <= 6.0 && t < 60.0;
    return {pass, fmt("rel. deviation %.3e (delta=1/5000), %.3e (delta=1/20000), ratio %.3f, %.1f s", err[0],
                      err[1], ratio, t)};
}

Outcome fig2_reproduction() {
    const auto t0 = std::chrono::steady_clock::now();
    const DefectBand& band = fig2_band();
    fig2_seconds = seconds_since(t0);
    int missing = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < band.points.size(); ++i) {
        const auto& p = band.points[i];
        if (!p.omega || !(*p.omega > p.gap.lower) || !(*p.omega < p.gap.upper)) {
            ++missing;
            continue;
        }
        if (!band.dilute[i]) {
            worst = std::numeric_limits<double>::infinity();
            continue;
        }
        worst = std::max(worst, std::abs(*p.omega - *band.dilute[i]) / *band.dilute[i]);
    }
    const double lo = band.curve.min_omega();
    const bool inside = missing == 0 && lo > band.band_maximum;
    const bool pass = missing == 0 && worst <= 0.05 && inside && fig2_seconds < 600.0;
    return {pass, fmt("%d/41 roots missing from the gap, max operator/dilute deviation %.3e, min defect %.9f vs "
                      "first band max %.9f, %.1f s",
                      missing, worst, lo, band.band_maximum, fig2_seconds)};
}

Outcome non_flatness() {
    const DefectBand& band = fig2_band();
    const auto& s = band.curve.samples;
    const std::size_t n = s.size();
    for (const auto& x : s)
        if (!x.ok) return {false, "defect band incomplete"};
    const double h = s[1].alpha1 - s[0].alpha1, floor = 1e-6 * band.band_maximum;
    auto near_extremum = [&](double a) {
        for (double c : {0.0, kPi, kTwoPi})
            if (std::abs(a - c) <= 1.5 * h) return true;
        return false;
    };
    std::vector<double> d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (s[i + 1].omega - s[i - 1].omega) / (2 * h);
    int flat = 0, stray = 0;
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (near_extremum(s[i].alpha1)) continue;
        smallest = std::min(smallest, std::abs(d[i]));
        if (!(std::abs(d[i]) > floor)) ++flat;
    }
    for (std::size_t i = 1; i + 2 < n; ++i) {
        if ((d[i] > 0) == (d[i + 1] > 0)) continue;
        if (!near_extremum(0.5 * (s[i].alpha1 + s[i + 1].alpha1))) ++stray;
    }
    return {flat == 0 && stray == 0,
            fmt("%d flat interior points (min |d omega/d alpha1| = %.3e, floor %.3e), %d sign changes away from 0 "
                "and pi",
                flat, smallest, floor, stray)};
}

Outcome critical_size() {
    const auto t0 = std::chrono::steady_clock::now();
    const double radii[3] = {0.02, 0.05, 0.08};
    double disc[3];
    bool range = true;
    std::string vals;
    for (int i = 0; i < 3; ++i) {
        const CrystalConfig c = crystal(10000, radii[i], 0.0);
        double ea = 0.0, eo = 0.0;
        try {
            ea = critical_epsilon(c).epsilon / radii[i];
            eo = operator_critical_epsilon(c).epsilon / radii[i];
        } catch (const Error& e) {
            return {false, fmt("R = %.2f: %s", radii[i], e.what())};
        }
        range = range && std::abs(ea) >= 0.10 && std::abs(ea) <= 0.30 && std::abs(eo) >= 0.10 && std::abs(eo) <= 0.30;
        disc[i] = std::abs(ea - eo) * radii[i];
        vals += fmt("R=%.2f: %.4f/%.4f (disc %.2e); ", radii[i], ea, eo, disc[i]);
    }
    const bool trend = disc[0] < disc[1] && disc[1] < disc[2];
    const double t = seconds_since(t0);
    return {range && trend && t < 900.0, vals + fmt("eps0/R asymptotic/operator, %.1f s", t)};
}

Outcome non_dilute() {
    std::string detail;
    bool pass = true;
    for (double rel : {0.45, -0.6}) {
        const CrystalConfig c = crystal(5000, 0.4, rel);
        const DefectBand band = defect_band(c, uniform_alpha1_grid(41));
        int bad = 0;
        for (const auto& p : band.points)
            if (!p.omega || !(*p.omega > p.gap.lower) || !(*p.omega < p.gap.upper)) ++bad;
        pass = pass && bad == 0;
        detail += fmt("eps=%+.2fR: %d/41 outside the gap, band [%.6f, %.6f]; ", rel, bad, band.curve.min_omega(),
                      band.curve.max_omega());
    }
    return {pass, detail};
}

Outcome greens_equivalence() {
    const std::vector<Vec2> points{{0.1, 0.2},   {0.3, -0.25}, {-0.4, 0.1}, {0.05, 0.45}, {-0.2, -0.35},
                                   {0.45, 0.45}, {0.6, 0.1},   {-0.7, 0.3}, {0.25, 0.8}, {0.13, -0.07}};
    const std::vector<BlochVector> alphas{{kPi, kPi}, {2.0, 3.0}, {kPi, 2.0}, {2.5, 4.0}, {3.5, 2.8}};
    const double k = 0.05;
    double spec = 0.0, direct = 0.0, inv = 0.0;
    for (const auto& a : alphas) {
        EwaldOptions half, twice;
        half.split = 0.5 * std::sqrt(kPi);
        twice.split = 2.0 * std::sqrt(kPi);
        const LatticeGreensEvaluator g(k, a), gh(k, a, half), gt(k, a, twice);
        for (const auto& z : points) {
            const Complex e = g.gamma_quasi(z);
            spec = std::max(spec, std::abs(e - oracles::spectral_row_sum(k, a, z)));
            direct = std::max(direct, std::abs(e - oracles::tapered_direct_sum(k, a, z)));
            inv = std::max({inv, std::abs(e - gh.gamma_quasi(z)), std::abs(e - gt.gamma_quasi(z))});
        }
    }
    const bool pass = spec < 1e-8 && direct < 1e-8 && inv < 1e-10;
    return {pass, fmt("max |Ewald - spectral| %.2e, |Ewald - direct| %.2e, split invariance %.2e", spec, direct, inv)};
}

Outcome gradient_zeros() {
    const int n = 721;
    int stray = 0, found = 0;
    double worst = 0.0;
    for (double a2 : {kPi / 2, kPi, 3 * kPi / 2}) {
        auto f = [a2](double a1) { return grad_alpha_gamma0(BlochVector(a1, a2))[0]; };
        std::vector<double> grid(n), v(n);
        for (int i = 0; i < n; ++i) {
            grid[i] = kTwoPi * i / (n - 1);
            v[i] = i == 0 || i == n - 1 ? f(1e-9 * (i == 0 ? 1 : -1) + grid[i]) : f(grid[i]);
        }
        for (int i = 0; i + 1 < n; ++i) {
            if ((v[i] > 0) == (v[i + 1] > 0) && v[i] != 0.0) continue;
            double a = grid[i], b = grid[i + 1], fa = v[i];
            for (int it = 0; it < 60; ++it) {
                const double m = 0.5 * (a + b), fm = f(m);
                ((fa > 0) == (fm > 0) ? a : b) = m;
                if ((fa > 0) == (fm > 0)) fa = fm;
            }
            const double z = 0.5 * (a + b);
            ++found;
            worst = std::max(worst, std::abs(f(z)));
            if (std::abs(z - kPi) > 1e-6 && z > 1e-6 && z < kTwoPi - 1e-6) ++stray;
        }
        worst = std::max(worst, std::abs(f(0.0)));
    }
    const bool pass = stray == 0 && worst < 1e-9 && found >= 3;
    return {pass, fmt("%d interior zeros located, %d away from {0, pi}, max |component| at zeros %.2e", found, stray,
                      worst)};
}

Outcome structural() {
    std::vector<std::string> failed;
    auto need = [&](bool ok, const char* name) {
        if (!ok) failed.push_back(name);
    };
    CrystalConfig c = crystal(5000, 0.05, -0.2);
    const int n = basis_size(c.N);
    const double edge = band_edge_omega_star(kPi, c);
    const BlockOperator M = assemble_M(1.3 * edge, c, kPi);
    need(M.b11 == CMatrix::Identity(n, n) && M.b21 == CMatrix::Zero(n, n), "first block column");
    CrystalConfig c0 = c;
    c0.epsilon = 0.0;
    need(assemble_M(1.3 * edge, c0, kPi).dense() == CMatrix::Identity(2 * n, 2 * n), "M at eps = 0");
    bool no_root = false;
    try {
        c0.epsilon = 0.0;
        dilute_defect_omega(kPi, c0);
    } catch (const NotFound&) {
        no_root = true;
    }
    CrystalConfig cp = c;
    cp.epsilon = 0.1 * c.R;
    try {
        dilute_defect_omega(kPi, cp);
        no_root = false;
    } catch (const NotFound&) {
    }
    need(no_root, "dilute no-root for R_d >= R");
    need(band_omega1(BlochVector(0.0, 0.0), c).omega == 0.0, "omega1 at alpha = 0");

    double wr = 0.0, rec = 0.0;
    for (int k = -specfun::kMaxOrder + 1; k < specfun::kMaxOrder; ++k) {
        if (std::abs(k) > 12) continue;
        for (double x = 0.05; x <= 5.0; x += 0.05) {
            const double w = specfun::bessel_j(k, x) * specfun::bessel_y_prime(k, x) -
                             specfun::bessel_j_prime(k, x) * specfun::bessel_y(k, x);
            wr = std::max(wr, std::abs(w - 2.0 / (kPi * x)) * kPi * x / 2.0);
        }
    }
    for (int k = 1; k <= 2 * specfun::kMaxTruncation; ++k) {
        for (double x : {0.05, 0.5, 2.0}) {
            const double l = specfun::bessel_j(k - 1, x) + specfun::bessel_j(k + 1, x),
                         r = 2.0 * k / x * specfun::bessel_j(k, x);
            rec = std::max(rec, std::abs(l - r) / std::max(std::abs(l), 1e-300));
        }
    }
    need(wr < 1e-9, "Wronskian");
    need(rec < 1e-9, "recurrence");

    const auto base = defect_omega(kPi, c);
    CrystalConfig cn = c;
    cn.N = c.N + 2;
    const auto more_n = defect_omega(kPi, cn);
    CrystalConfig cq = c;
    cq.Q = 2 * c.Q;
    const auto more_q = defect_omega(kPi, cq);
    double dn = std::numeric_limits<double>::infinity(), dq = dn;
    if (base.omega && more_n.omega) dn = std::abs(*base.omega - *more_n.omega) / *base.omega;
    if (base.omega && more_q.omega) dq = std::abs(*base.omega - *more_q.omega) / *base.omega;
    need(dn < 1e-8, "truncation N -> N+2");
    need(dq < 1e-6, "quadrature Q -> 2Q");

    std::string names;
    for (const auto& f : failed) names += (names.empty() ? "" : ", ") + f;
    return {failed.empty(), fmt("Wronskian %.2e, recurrence %.2e, defect shift N+2 %.2e, 2Q %.2e%s%s", wr, rec, dn, dq,
                                failed.empty() ? "" : "; failed: ", names.c_str())};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"first band scaling in delta", first_band_scaling},
        {"dilute defect band in the gap", fig2_reproduction},
        {"defect band is not flat", non_flatness},
        {"critical defect size", critical_size},
        {"non-dilute defect bands", non_dilute},
        {"Green's function cross-method agreement", greens_equivalence},
        {"zeros of the alpha1 gradient", gradient_zeros},
        {"structural and limit checks", structural},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures ? 1 : 0;
}
