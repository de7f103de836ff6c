#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bubblegap/config.hpp"
#include "bubblegap/operators.hpp"
#include "bubblegap/types.hpp"

namespace bubblegap {

struct MullerResult {
    Complex root;
    int iterations = 0;
    double residual = 0.0;  // |f(root)|
};

// Muller's method. Converged when the step falls below tol*max(1,|z|) or
// f vanishes exactly; throws NonConvergence after max_iter steps.
MullerResult muller_find_root(const std::function<Complex(Complex)>& f, const std::array<Complex, 3>& seeds,
                              double tol = 1e-12, int max_iter = 60);

// Objective for characteristic values: determinant of the operator after
// row and column scaling frozen at a reference frequency.
class BalancedDeterminant {
public:
    BalancedDeterminant(std::function<CMatrix(Complex)> matrix, Complex reference);
    Complex operator()(Complex omega) const;
    // sigma_min / sigma_max of the scaled matrix at a real frequency.
    double residual(double omega) const;

private:
    std::function<CMatrix(Complex)> matrix_;
    Eigen::VectorXd rows_, cols_;
};

struct BandPoint {
    double omega = 0.0;
    double residual = 0.0;
};

// Smallest positive characteristic value of A^alpha. Zero at alpha = (0,0).
BandPoint band_omega1(const BlochVector& alpha, const CrystalConfig& config);

// Lowest characteristic value of A^alpha in (from, cap); nullopt if none.
std::optional<BandPoint> band_omega2(const BlochVector& alpha, const CrystalConfig& config, double from,
                                     double cap);

// Band edge omega*(alpha1) = omega1 at (alpha1, pi), checked against
// alpha2 = pi -/+ 0.3.
double band_edge_omega_star(double alpha1, const CrystalConfig& config);

struct GapBounds {
    double lower = 0.0;  // omega*(alpha1)
    double upper = 0.0;  // min over sampled alpha2 of omega2, capped
    bool capped = false;
};

GapBounds gap_bounds(double alpha1, const CrystalConfig& config);

struct DefectResult {
    std::optional<double> omega;  // empty when no root lies in the gap
    double residual = 0.0;        // sigma_min / sigma_max of M
    GapBounds gap;
    bool scanned = false;
    int extra_sign_changes = 0;  // further phase flips above the returned root
    std::string note;
};

struct DefectOptions {
    std::optional<GapBounds> gap;  // reused when given
    std::optional<double> seed;    // e.g. the dilute root
    int scan_points = 32;
};

DefectResult defect_omega(double alpha1, const CrystalConfig& config, const DefectOptions& options = {});

enum class BandMethod { Operator, DiluteAsymptotic, SmallPerturbation };
std::string to_string(BandMethod method);

struct BandSample {
    double alpha1 = 0.0;
    double omega = 0.0;
    double residual = 0.0;
    bool ok = true;
    std::string note;
};

struct BandCurve {
    BandMethod method = BandMethod::Operator;
    std::vector<BandSample> samples;
    bool partial = false;
    double min_omega() const;
    double max_omega() const;
    double argmin_alpha1() const;
};

struct DefectBand {
    BandCurve curve;
    std::vector<DefectResult> points;
    std::vector<std::optional<double>> dilute;  // dilute root per alpha1, if any
    double band_maximum = 0.0;                  // max over sampled alpha of omega1
};

std::vector<double> uniform_alpha1_grid(int points);

// Defect band over the alpha1 grid, seeded by the dilute root when R_d < R.
DefectBand defect_band(const CrystalConfig& config, const std::vector<double>& alpha1_grid);

struct CurvatureFit {
    double c = 0.0;
    double omega_star = 0.0;  // fitted value at alpha2 = pi
    double rms_residual = 0.0;
};

// Least-squares fit of omega1(alpha1, pi + t) = a - c t^2 / 2 on the given
// offsets (pi itself is always included).
CurvatureFit curvature_c_delta(double alpha1, const CrystalConfig& config,
                               const std::vector<double>& offsets = {-0.2, -0.15, -0.1, -0.05, 0.05, 0.1, 0.15,
                                                                     0.2});

struct OperatorCriticalEpsilon {
    double epsilon = 0.0;
    double omega = 0.0;              // defect frequency at alpha1 = 0
    double omega_star_global = 0.0;  // omega1 at (pi, pi)
    double residual = 0.0;           // |omega - omega_star_global|
    int evaluations = 0;
};

// epsilon in (-R, 0) at which the defect frequency at alpha1 = 0 reaches the
// global maximum of the first band.
OperatorCriticalEpsilon operator_critical_epsilon(const CrystalConfig& config);

}  // namespace bubblegap
