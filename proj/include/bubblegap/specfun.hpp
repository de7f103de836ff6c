#pragma once

#include "bubblegap/types.hpp"

// Integer-order cylinder functions by ascending series. Accurate for the
// small arguments of the subwavelength regime (|x| up to roughly 10).
// The complex overloads are the analytic continuation used by the root
// finders, which iterate off the real axis.
namespace bubblegap::specfun {

inline constexpr int kMaxTruncation = 16;
inline constexpr int kMaxOrder = 2 * kMaxTruncation + 2;

double bessel_j(int n, double x);
double bessel_j_prime(int n, double x);
double bessel_y(int n, double x);
double bessel_y_prime(int n, double x);
Complex hankel1(int n, double x);
Complex hankel1_prime(int n, double x);

Complex bessel_j(int n, Complex z);
Complex bessel_j_prime(int n, Complex z);
Complex bessel_y(int n, Complex z);
Complex bessel_y_prime(int n, Complex z);
Complex hankel1(int n, Complex z);
Complex hankel1_prime(int n, Complex z);

// eta_k = (ln k + gamma - ln 2)/(2 pi) - i/4, the constant in
// -(i/4) H_0(k r) = ln(r)/(2 pi) + eta_k + O(r^2 ln r).
Complex eta(double k);
Complex eta(Complex k);

}  // namespace bubblegap::specfun
