#include "bubblegap/specfun.hpp"

#include <string>

#include "bubblegap/errors.hpp"

namespace bubblegap::specfun {
namespace {

constexpr int kMaxTerms = 400;
constexpr double kSeriesEps = 1e-17;

void check_order(int n, int limit) {
    if (n > limit || n < -limit) {
        throw DomainError("Bessel order " + std::to_string(n) + " outside supported range |n| <= " +
                          std::to_string(limit));
    }
}

double parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// psi(m+1) = -gamma + H_m.
double digamma_int(int m) {
    double h = -kEulerGamma;
    for (int j = 1; j <= m; ++j) h += 1.0 / j;
    return h;
}

template <class T>
void check_finite(const T& v, const char* what) {
    if (!std::isfinite(std::abs(v))) throw DomainError(std::string(what) + ": non-finite result");
}

// J_n(z) for n >= 0.
template <class T>
T series_j(int n, T z) {
    const T half = z / 2.0;
    const T q = -half * half;
    T term = T(1.0 / factorial(n));
    for (int i = 0; i < n; ++i) term *= half;
    T sum = term;
    for (int k = 0; k < kMaxTerms; ++k) {
        term *= q / (double((k + 1) * (n + k + 1)));
        sum += term;
        if (std::abs(term) <= kSeriesEps * std::abs(sum)) return sum;
    }
    if (std::abs(term) <= 1e-14 * std::abs(sum)) return sum;
    throw DomainError("Bessel series did not converge; argument too large");
}

// Y_n(z) for n >= 0, z != 0, from the logarithmic series.
template <class T>
T series_y(int n, T z) {
    const T half = z / 2.0;
    const T q = half * half;
    T head = T(0.0);
    if (n > 0) {
        T pw = T(1.0);
        for (int k = 0; k < n; ++k) {
            head += pw * (factorial(n - k - 1) / factorial(k));
            pw *= q;
        }
        T inv = T(1.0);
        for (int i = 0; i < n; ++i) inv /= half;
        head *= inv;
    }
    T term = T(1.0 / factorial(n));
    for (int i = 0; i < n; ++i) term *= half;
    double psi_a = digamma_int(0);
    double psi_b = digamma_int(n);
    T tail = term * (psi_a + psi_b);
    bool done = false;
    for (int k = 0; k < kMaxTerms; ++k) {
        term *= -q / (double((k + 1) * (n + k + 1)));
        psi_a += 1.0 / (k + 1);
        psi_b += 1.0 / (n + k + 1);
        T add = term * (psi_a + psi_b);
        tail += add;
        if (std::abs(add) <= kSeriesEps * std::abs(tail)) {
            done = true;
            break;
        }
    }
    if (!done) throw DomainError("Bessel Y series did not converge; argument too large");
    using std::log;
    return (-head + 2.0 * log(half) * series_j(n, z) - tail) / kPi;
}

template <class T>
T j_impl(int n, T z, int limit) {
    check_order(n, limit);
    if (z == T(0.0)) return T(n == 0 ? 1.0 : 0.0);
    const int m = n < 0 ? -n : n;
    T v = series_j(m, z);
    check_finite(v, "bessel_j");
    return n < 0 ? T(parity(m)) * v : v;
}

template <class T>
T y_impl(int n, T z, int limit) {
    check_order(n, limit);
    if (z == T(0.0)) throw SingularityError("Bessel Y / Hankel function is singular at 0");
    const int m = n < 0 ? -n : n;
    T v = series_y(m, z);
    check_finite(v, "bessel_y");
    return n < 0 ? T(parity(m)) * v : v;
}

template <class T>
T j_prime_impl(int n, T z) {
    check_order(n, kMaxOrder);
    return (j_impl(n - 1, z, kMaxOrder + 1) - j_impl(n + 1, z, kMaxOrder + 1)) / 2.0;
}

template <class T>
T y_prime_impl(int n, T z) {
    check_order(n, kMaxOrder);
    return (y_impl(n - 1, z, kMaxOrder + 1) - y_impl(n + 1, z, kMaxOrder + 1)) / 2.0;
}

}  // namespace

double bessel_j(int n, double x) {
    if (x < 0.0) throw DomainError("bessel_j: argument must be >= 0");
    return j_impl(n, x, kMaxOrder);
}
double bessel_j_prime(int n, double x) {
    if (x < 0.0) throw DomainError("bessel_j_prime: argument must be >= 0");
    return j_prime_impl(n, x);
}
double bessel_y(int n, double x) {
    if (x < 0.0) throw DomainError("bessel_y: argument must be > 0");
    return y_impl(n, x, kMaxOrder);
}
double bessel_y_prime(int n, double x) {
    if (x < 0.0) throw DomainError("bessel_y_prime: argument must be > 0");
    return y_prime_impl(n, x);
}
Complex hankel1(int n, double x) { return {bessel_j(n, x), bessel_y(n, x)}; }
Complex hankel1_prime(int n, double x) { return {bessel_j_prime(n, x), bessel_y_prime(n, x)}; }

Complex bessel_j(int n, Complex z) { return j_impl(n, z, kMaxOrder); }
Complex bessel_j_prime(int n, Complex z) { return j_prime_impl(n, z); }
Complex bessel_y(int n, Complex z) { return y_impl(n, z, kMaxOrder); }
Complex bessel_y_prime(int n, Complex z) { return y_prime_impl(n, z); }
Complex hankel1(int n, Complex z) {
    return bessel_j(n, z) + Complex(0.0, 1.0) * bessel_y(n, z);
}
Complex hankel1_prime(int n, Complex z) {
    return bessel_j_prime(n, z) + Complex(0.0, 1.0) * bessel_y_prime(n, z);
}

Complex eta(double k) {
    if (!(k > 0.0)) throw DomainError("eta: wavenumber must be positive");
    return {(std::log(k) + kEulerGamma - std::log(2.0)) / kTwoPi, -0.25};
}

Complex eta(Complex k) {
    if (k == Complex(0.0)) throw DomainError("eta: wavenumber must be nonzero");
    return (std::log(k) + kEulerGamma - std::log(2.0)) / kTwoPi - Complex(0.0, 0.25);
}

}  // namespace bubblegap::specfun
