#include "bubblegap/operators.hpp"

#include <string>
#include <vector>

#include "bubblegap/errors.hpp"
#include "bubblegap/parallel.hpp"
#include "bubblegap/specfun.hpp"

namespace bubblegap {
namespace {

constexpr Complex kI(0.0, 1.0);

void check_wavenumber(Complex k) {
    if (k == Complex(0.0) || (k.imag() == 0.0 && k.real() < 0.0)) {
        throw DomainError("wavenumber must be nonzero with positive real part; use the static path for k = 0");
    }
}

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

QuasiLayerMatrices remainder_by_lattice_sum(const LatticeGreensEvaluator& greens, double R, int N) {
    const int n = basis_size(N);
    const RemainderExpansion ex = remainder_expansion(greens, 2 * N);
    QuasiLayerMatrices out{CMatrix::Zero(n, n), CMatrix::Zero(n, n)};
    const double w = kTwoPi * R;
    if (!greens.is_static()) {
        const Complex k = greens.wavenumber();
        std::vector<Complex> j(n), jp(n);
        for (int m = -N; m <= N; ++m) {
            j[m + N] = specfun::bessel_j(m, k * R);
            jp[m + N] = specfun::bessel_j_prime(m, k * R);
        }
        for (int m = -N; m <= N; ++m) {
            for (int q = -N; q <= N; ++q) {
                const Complex s = w * ex.coefficient(m - q) * j[q + N];
                out.single_layer(m + N, q + N) = s * j[m + N];
                out.neumann_poincare(m + N, q + N) = s * k * jp[m + N];
            }
        }
        return out;
    }
    // Harmonic case: (X - Y)^l and its conjugate expanded binomially,
    // X = R e^{i theta_x}, Y = R e^{i theta_y}.
    for (int m = -N; m <= N; ++m) {
        for (int q = -N; q <= N; ++q) {
            const int l = m - q;
            const int am = std::abs(m);
            if (l >= 0 ? (m < 0 || q > 0) : (m > 0 || q < 0)) continue;
            const double c = binomial(std::abs(l), am) * std::pow(-R, std::abs(q));
            const Complex t = w * ex.coefficient(l) * c;
            out.single_layer(m + N, q + N) = t * std::pow(R, am);
            out.neumann_poincare(m + N, q + N) = am == 0 ? Complex(0.0) : t * double(am) * std::pow(R, am - 1);
        }
    }
    return out;
}

QuasiLayerMatrices remainder_by_quadrature(const LatticeGreensEvaluator& greens, double R, int N, int M) {
    const int n = basis_size(N);
    std::vector<double> c(M), s(M);
    for (int i = 0; i < M; ++i) {
        c[i] = std::cos(kTwoPi * i / M);
        s[i] = std::sin(kTwoPi * i / M);
    }
    CMatrix G(M, M), D(M, M);
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            const Vec2 z{R * (c[i] - c[j]), R * (s[i] - s[j])};
            G(i, j) = greens.gamma_remainder(z);
            const CVec2 g = greens.gamma_remainder_gradient(z);
            D(i, j) = c[i] * g[0] + s[i] * g[1];
        }
    }
    CMatrix left(n, M), right(M, n);
    for (int m = -N; m <= N; ++m) {
        for (int i = 0; i < M; ++i) {
            const double t = kTwoPi * m * i / M;
            left(m + N, i) = Complex(std::cos(t), -std::sin(t)) / double(M);
            right(i, m + N) = Complex(std::cos(t), std::sin(t)) * (kTwoPi * R / M);
        }
    }
    return {left * G * right, left * D * right};
}

}  // namespace

CMatrix BlockOperator::dense() const {
    const Eigen::Index n = b11.rows();
    CMatrix d(2 * n, 2 * n);
    d << b11, b12, b21, b22;
    return d;
}

BlockOperator BlockOperator::from_dense(const CMatrix& m) {
    const Eigen::Index n = m.rows() / 2;
    return {m.topLeftCorner(n, n), m.topRightCorner(n, n), m.bottomLeftCorner(n, n), m.bottomRightCorner(n, n)};
}

CMatrix single_layer_free_matrix(Complex k, double R, int N) {
    check_wavenumber(k);
    const int n = basis_size(N);
    CMatrix out = CMatrix::Zero(n, n);
    for (int m = -N; m <= N; ++m) {
        out(m + N, m + N) = -kI * (kPi * R / 2.0) * specfun::bessel_j(m, k * R) * specfun::hankel1(m, k * R);
    }
    return out;
}

Eigen::MatrixXd static_single_layer_free_matrix(double R, int N) {
    const int n = basis_size(N);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (int m = -N; m <= N; ++m) out(m + N, m + N) = m == 0 ? R * std::log(R) : -R / (2.0 * std::abs(m));
    return out;
}

CMatrix neumann_poincare_free_matrix(Complex k, double R, int N) {
    check_wavenumber(k);
    const int n = basis_size(N);
    CMatrix out = CMatrix::Zero(n, n);
    const Complex x = k * R;
    for (int m = -N; m <= N; ++m) {
        const Complex v = specfun::bessel_j(m, x) * specfun::hankel1_prime(m, x) +
                          specfun::bessel_j_prime(m, x) * specfun::hankel1(m, x);
        out(m + N, m + N) = -kI * (kPi * R * k / 4.0) * v;
    }
    return out;
}

Eigen::MatrixXd static_neumann_poincare_free_matrix(double /*R*/, int N) {
    const int n = basis_size(N);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    out(N, N) = 0.5;
    return out;
}

QuasiLayerMatrices remainder_layer_matrices(const LatticeGreensEvaluator& greens, double R, int N,
                                            const AssemblyOptions& options) {
    if (!(R > 0.0 && R < 0.5)) throw DomainError("radius must lie in (0, 1/2)");
    if (options.method == RemainderMethod::LatticeSum) return remainder_by_lattice_sum(greens, R, N);
    return remainder_by_quadrature(greens, R, N, options.circle_points);
}

QuasiLayerMatrices quasi_layer_matrices(const LatticeGreensEvaluator& greens, double R, int N,
                                        const AssemblyOptions& options) {
    QuasiLayerMatrices out = remainder_layer_matrices(greens, R, N, options);
    if (greens.is_static()) {
        out.single_layer += static_single_layer_free_matrix(R, N).cast<Complex>();
        out.neumann_poincare += static_neumann_poincare_free_matrix(R, N).cast<Complex>();
    } else {
        out.single_layer += single_layer_free_matrix(greens.wavenumber(), R, N);
        out.neumann_poincare += neumann_poincare_free_matrix(greens.wavenumber(), R, N);
    }
    return out;
}

CMatrix quasi_single_layer_matrix(const LatticeGreensEvaluator& greens, double R, int N,
                                  const AssemblyOptions& options) {
    return quasi_layer_matrices(greens, R, N, options).single_layer;
}

CMatrix quasi_neumann_poincare_matrix(const LatticeGreensEvaluator& greens, double R, int N,
                                      const AssemblyOptions& options) {
    return quasi_layer_matrices(greens, R, N, options).neumann_poincare;
}

Complex quasi_single_layer_potential(const LatticeGreensEvaluator& greens, double R, const CVector& density,
                                     const Vec2& x, int circle_points) {
    const int N = (static_cast<int>(density.size()) - 1) / 2;
    const double r = std::hypot(x[0], x[1]);
    const double th = std::atan2(x[1], x[0]);
    const double rl = std::min(r, R), rg = std::max(r, R);
    Complex u = 0.0;
    for (int n = -N; n <= N; ++n) {
        Complex f;
        if (greens.is_static()) {
            f = n == 0 ? Complex(R * std::log(rg)) : Complex(-R / (2.0 * std::abs(n)) * std::pow(rl / rg, std::abs(n)));
        } else {
            const Complex k = greens.wavenumber();
            f = -kI * (kPi * R / 2.0) * specfun::bessel_j(n, k * rl) * specfun::hankel1(n, k * rg);
        }
        u += density(n + N) * f * Complex(std::cos(n * th), std::sin(n * th));
    }
    const int M = circle_points;
    for (int j = 0; j < M; ++j) {
        const double t = kTwoPi * j / M;
        Complex phi = 0.0;
        for (int n = -N; n <= N; ++n) phi += density(n + N) * Complex(std::cos(n * t), std::sin(n * t));
        u += greens.gamma_remainder({x[0] - R * std::cos(t), x[1] - R * std::sin(t)}) * phi * (kTwoPi * R / M);
    }
    return u;
}

AssemblyOptions assembly_options(const CrystalConfig& config) {
    return {config.remainder, config.circle_points};
}

BlockOperator assemble_A_alpha(Complex omega, const CrystalConfig& config, const BlochVector& alpha) {
    check_wavenumber(omega);
    const int N = config.N;
    const int n = basis_size(N);
    const LatticeGreensEvaluator greens(omega, alpha, config.ewald);
    const QuasiLayerMatrices q = quasi_layer_matrices(greens, config.R, N, assembly_options(config));
    const CMatrix I = CMatrix::Identity(n, n);
    BlockOperator A;
    A.b11 = single_layer_free_matrix(omega, config.R, N);
    A.b12 = -q.single_layer;
    A.b21 = -0.5 * I + neumann_poincare_free_matrix(omega, config.R, N);
    A.b22 = -config.delta() * (0.5 * I + q.neumann_poincare);
    return A;
}

BlockOperator assemble_A_D(Complex omega, const CrystalConfig& config, double radius) {
    check_wavenumber(omega);
    const int n = basis_size(config.N);
    const CMatrix I = CMatrix::Identity(n, n);
    const CMatrix S = single_layer_free_matrix(omega, radius, config.N);
    const CMatrix K = neumann_poincare_free_matrix(omega, radius, config.N);
    return {S, -S, -0.5 * I + K, -config.delta() * (0.5 * I + K)};
}

BlockOperator assemble_perturbation(Complex omega, const CrystalConfig& config) {
    check_wavenumber(omega);
    const int N = config.N;
    const int n = basis_size(N);
    const double R = config.R, Rd = config.R_d();
    BlockOperator out{CMatrix::Zero(n, n), CMatrix::Zero(n, n), CMatrix::Zero(n, n), CMatrix::Zero(n, n)};
    if (config.epsilon == 0.0) return out;
    const Complex x = omega * R, xd = omega * Rd;
    for (int m = -N; m <= N; ++m) {
        const Complex j = specfun::bessel_j(m, x), jd = specfun::bessel_j(m, xd);
        const Complex jpd = specfun::bessel_j_prime(m, xd);
        if (std::abs(jd) == 0.0 || std::abs(jpd) == 0.0) {
            throw SingularityError("degenerate frequency: Bessel zero at the perturbed radius for order " +
                                   std::to_string(m));
        }
        const Complex h = specfun::hankel1(m, x), hd = specfun::hankel1(m, xd);
        const Complex hp = specfun::hankel1_prime(m, x), hpd = specfun::hankel1_prime(m, xd);
        const Complex jp = specfun::bessel_j_prime(m, x);
        out.b12(m + N, m + N) = -kI * (kPi * R / 2.0) * (j / jd) * (h * jd - j * hd);
        out.b22(m + N, m + N) = -kI * (kPi * R / 2.0) * j * config.delta() * omega * (hp - jp * hpd / jpd);
    }
    return out;
}

BlockOperator perturbation_P1(Complex omega, const CrystalConfig& config) {
    const int N = config.N;
    const int n = basis_size(N);
    const double R = config.R, Rd = config.R_d();
    BlockOperator out{CMatrix::Zero(n, n), CMatrix::Zero(n, n), CMatrix::Zero(n, n), CMatrix::Zero(n, n)};
    for (int m = -N; m <= N; ++m) {
        out.b11(m + N, m + N) = (R / Rd) * specfun::hankel1(m, omega * R) / specfun::hankel1(m, omega * Rd);
        out.b22(m + N, m + N) = (R / Rd) * specfun::bessel_j(m, omega * R) / specfun::bessel_j(m, omega * Rd);
    }
    return out;
}

BlockOperator perturbation_P2(Complex omega, const CrystalConfig& config) {
    const int N = config.N;
    const int n = basis_size(N);
    const double R = config.R, Rd = config.R_d();
    BlockOperator out{CMatrix::Zero(n, n), CMatrix::Zero(n, n), CMatrix::Zero(n, n), CMatrix::Zero(n, n)};
    for (int m = -N; m <= N; ++m) {
        out.b11(m + N, m + N) = specfun::bessel_j(m, omega * Rd) / specfun::bessel_j(m, omega * R);
        out.b22(m + N, m + N) = specfun::bessel_j_prime(m, omega * Rd) / specfun::bessel_j_prime(m, omega * R);
    }
    return out;
}

BlockOperator assemble_M(Complex omega, const CrystalConfig& config, double alpha1,
                         std::optional<double> band_edge) {
    if (band_edge && !(omega.real() > *band_edge)) {
        throw SingularityError("frequency lies inside the first band; the alpha2 integrand has a pole");
    }
    const int n = basis_size(config.N);
    const BlockOperator pert = assemble_perturbation(omega, config);
    BlockOperator M{CMatrix::Identity(n, n), CMatrix::Zero(n, n), CMatrix::Zero(n, n), CMatrix::Identity(n, n)};
    if (config.epsilon == 0.0) return M;

    CMatrix rhs(2 * n, n);
    rhs << pert.b12, pert.b22;
    const int Q = config.Q;
    std::vector<CMatrix> parts(static_cast<std::size_t>(Q));
    parallel_for(static_cast<std::size_t>(Q), [&](std::size_t q) {
        const double alpha2 = kTwoPi * double(q) / Q;
        const CMatrix A = assemble_A_alpha(omega, config, BlochVector(alpha1, alpha2)).dense();
        Eigen::PartialPivLU<CMatrix> lu(A);
        if (!(lu.rcond() > 1e-15)) {
            throw SingularityError("operator A^alpha is numerically singular at alpha2 = " + std::to_string(alpha2));
        }
        parts[q] = lu.solve(rhs);
    });
    CMatrix avg = CMatrix::Zero(2 * n, n);
    for (const auto& p : parts) avg += p;
    avg /= double(Q);
    M.b12 = avg.topRows(n);
    M.b22 += avg.bottomRows(n);
    return M;
}

}  // namespace bubblegap
