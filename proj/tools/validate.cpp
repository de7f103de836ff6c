#include <functional>
#include <limits>
#include <optional>

#include "bubblegap/errors.hpp"
#include "bubblegap/greens.hpp"
#include "bubblegap/operators.hpp"
#include "bubblegap/solver.hpp"
#include "bubblegap/specfun.hpp"
#include "commands.hpp"
#include "oracles.hpp"

namespace bubblegap::cli {
namespace {

const std::vector<Vec2>& test_points() {
    static const std::vector<Vec2> pts{{0.13, -0.07}, {0.1, 0.2},    {-0.31, 0.22}, {0.42, 0.05},  {-0.18, -0.39},
                                       {0.27, 0.33},  {-0.45, 0.12}, {0.05, -0.26}, {0.36, -0.41}, {-0.22, 0.47}};
    return pts;
}

// Bloch vectors kept away from the empty-lattice circles of small k so the
// tapered direct sum converges.
const std::vector<BlochVector>& test_alphas() {
    static const std::vector<BlochVector> a{{kPi, kPi}, {2.0, 3.0}, {kPi, 2.0}, {2.5, 4.0}, {3.5, 2.8}};
    return a;
}

constexpr double kTestWavenumber = 0.05;

CheckResult make_check(const std::string& name, double threshold, const std::function<double()>& measure) {
    CheckResult c{name, 0.0, threshold, false, ""};
    try {
        c.value = measure();
        c.passed = c.value <= threshold;
    } catch (const std::exception& e) {
        c.value = std::numeric_limits<double>::quiet_NaN();
        c.detail = e.what();
    }
    if (!std::isfinite(c.value)) c.passed = false;
    return c;
}

}  // namespace

Table greens_discrepancy_table(const CrystalConfig& config) {
    Table t;
    t.columns = {"k", "alpha1", "alpha2", "z1", "z2", "ewald_re", "ewald_im", "diff_spectral", "diff_direct",
                 "max_discrepancy"};
    for (double k : {0.0, kTestWavenumber}) {
        for (const auto& a : test_alphas()) {
            const LatticeGreensEvaluator g(k, a, config.ewald);
            for (const auto& z : test_points()) {
                const Complex e = g.gamma_quasi(z);
                const double ds = std::abs(e - oracles::spectral_row_sum(k, a, z));
                const double dd = k > 0.0 ? std::abs(e - oracles::tapered_direct_sum(k, a, z)) : 0.0;
                std::vector<nlohmann::json> row{k, a.alpha1, a.alpha2, z[0], z[1], e.real(), e.imag(), ds};
                row.push_back(k > 0.0 ? nlohmann::json(dd) : nlohmann::json(nullptr));
                const double worst = std::max(ds, dd);
                row.push_back(std::isfinite(worst) ? nlohmann::json(worst) : nlohmann::json(nullptr));
                t.rows.push_back(std::move(row));
            }
        }
    }
    return t;
}

std::vector<CheckResult> run_validation_checks(const CrystalConfig& config) {
    std::vector<CheckResult> out;
    const int nmax = 2 * config.N + 2;

    out.push_back(make_check("wronskian", 1e-9, [&] {
        double worst = 0.0;
        for (int n = -nmax; n <= nmax; ++n) {
            for (double x : {0.01, 0.1, 0.5, 1.0, 2.5, 5.0}) {
                const double w = specfun::bessel_j(n, x) * specfun::bessel_y_prime(n, x) -
                                 specfun::bessel_j_prime(n, x) * specfun::bessel_y(n, x);
                const double ref = 2.0 / (kPi * x);
                worst = std::max(worst, std::abs(w - ref) / ref);
            }
        }
        return worst;
    }));

    out.push_back(make_check("recurrence", 1e-10, [&] {
        double worst = 0.0;
        for (int n = 1; n <= 2 * config.N; ++n) {
            for (double x : {0.05, 0.5, 2.0}) {
                const double lhs = specfun::bessel_j(n - 1, x) + specfun::bessel_j(n + 1, x);
                const double rhs = 2.0 * n / x * specfun::bessel_j(n, x);
                worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
            }
        }
        return worst;
    }));

    out.push_back(make_check("ewald_invariance", 1e-10, [&] {
        double worst = 0.0;
        EwaldOptions doubled = config.ewald;
        doubled.split *= 2.0;
        for (double k : {0.0, kTestWavenumber}) {
            for (const auto& a : test_alphas()) {
                const LatticeGreensEvaluator g1(k, a, config.ewald), g2(k, a, doubled);
                for (const auto& z : test_points()) worst = std::max(worst, std::abs(g1.gamma_quasi(z) - g2.gamma_quasi(z)));
            }
        }
        return worst;
    }));

    out.push_back(make_check("ewald_vs_spectral", 1e-8, [&] {
        double worst = 0.0;
        for (double k : {0.0, kTestWavenumber}) {
            for (const auto& a : test_alphas()) {
                const LatticeGreensEvaluator g(k, a, config.ewald);
                for (const auto& z : test_points()) {
                    worst = std::max(worst, std::abs(g.gamma_quasi(z) - oracles::spectral_row_sum(k, a, z)));
                }
            }
        }
        return worst;
    }));

    out.push_back(make_check("ewald_vs_direct", 1e-8, [&] {
        double worst = 0.0;
        for (const auto& a : test_alphas()) {
            const LatticeGreensEvaluator g(kTestWavenumber, a, config.ewald);
            for (const auto& z : test_points()) {
                worst = std::max(worst, std::abs(g.gamma_quasi(z) - oracles::tapered_direct_sum(kTestWavenumber, a, z)));
            }
        }
        return worst;
    }));

    out.push_back(make_check("remainder_origin", 1e-7, [&] {
        const BlochVector a(kPi, kPi);
        const LatticeGreensEvaluator g(0.0, a, config.ewald);
        return std::abs(g.gamma_remainder({0.0, 0.0}) - oracles::spectral_remainder_origin(0.0, a));
    }));

    out.push_back(make_check("quasi_periodicity", 1e-10, [&] {
        double worst = 0.0;
        const BlochVector a(1.3, 2.1);
        const LatticeGreensEvaluator g(kTestWavenumber, a, config.ewald);
        for (const auto& z : test_points()) {
            const Complex v = g.gamma_quasi(z);
            const Complex e1 = std::exp(Complex(0.0, a.alpha1)), e2 = std::exp(Complex(0.0, a.alpha2));
            worst = std::max(worst, std::abs(g.gamma_quasi({z[0] + 1.0, z[1]}) - e1 * v));
            worst = std::max(worst, std::abs(g.gamma_quasi({z[0], z[1] + 1.0}) - e2 * v));
        }
        return worst;
    }));

    out.push_back(make_check("lattice_sum_vs_quadrature", 1e-10, [&] {
        double worst = 0.0;
        for (double k : {0.0, kTestWavenumber}) {
            const LatticeGreensEvaluator g(k, BlochVector(2.0, 3.0), config.ewald);
            const auto a = quasi_layer_matrices(g, config.R, config.N, {RemainderMethod::LatticeSum, 64});
            const auto b = quasi_layer_matrices(g, config.R, config.N, {RemainderMethod::Quadrature, config.circle_points});
            worst = std::max(worst, (a.single_layer - b.single_layer).cwiseAbs().maxCoeff());
            worst = std::max(worst, (a.neumann_poincare - b.neumann_poincare).cwiseAbs().maxCoeff());
        }
        return worst;
    }));

    // Structural checks on M at a frequency above the first band.
    CrystalConfig perturbed = config;
    if (perturbed.epsilon == 0.0) perturbed.epsilon = -0.2 * perturbed.R;
    std::optional<double> omega;
    std::string omega_error;
    try {
        omega = 1.05 * band_omega1(BlochVector(kPi, kPi), perturbed).omega;
    } catch (const std::exception& e) {
        omega_error = e.what();
    }
    auto need_omega = [&]() -> double {
        if (!omega) throw Error("no reference frequency: " + omega_error);
        return *omega;
    };

    out.push_back(make_check("M_first_column", 0.0, [&] {
        const BlockOperator M = assemble_M(need_omega(), perturbed, kPi);
        const int n = basis_size(perturbed.N);
        return (M.b11 - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() + M.b21.cwiseAbs().maxCoeff();
    }));

    out.push_back(make_check("M_eps_zero_identity", 0.0, [&] {
        CrystalConfig flat = perturbed;
        flat.epsilon = 0.0;
        const BlockOperator M = assemble_M(need_omega(), flat, kPi);
        const int n = basis_size(flat.N);
        return (M.dense() - CMatrix::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff();
    }));

    out.push_back(make_check("grad_alpha_zeros", 1e-9, [&] {
        const Vec2 at_pi = grad_alpha_gamma0(BlochVector(kPi, kPi), config.ewald);
        const Vec2 off = grad_alpha_gamma0(BlochVector(kPi / 2, kPi), config.ewald);
        // Zero at alpha1 = pi, clearly nonzero at alpha1 = pi/2.
        if (!(std::abs(off[0]) > 1e-4)) return 1.0;
        return std::abs(at_pi[0]);
    }));

    return out;
}

}  // namespace bubblegap::cli
