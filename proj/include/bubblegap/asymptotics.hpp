#pragma once

#include <memory>
#include <vector>

#include "bubblegap/config.hpp"
#include "bubblegap/greens.hpp"
#include "bubblegap/types.hpp"

namespace bubblegap {

struct CapacitanceValue {
    BlochVector alpha;
    double value = 0.0;  // -<(S^{alpha,0})^{-1}[1], 1>
    int N = 0;
    CVector psi;           // Fourier coefficients of (S^{alpha,0})^{-1}[1]
    double psi_norm_sq = 0.0;  // 2 pi R sum |psi_n|^2
};

CapacitanceValue capacitance(const BlochVector& alpha, double R, int N, const LatticeGreensEvaluator& greens,
                             RemainderMethod method = RemainderMethod::LatticeSum);
CapacitanceValue capacitance(const BlochVector& alpha, const CrystalConfig& config);

// sqrt(delta Cap / (pi R^2)).
double omega1_asymptotic(const BlochVector& alpha, const CrystalConfig& config);

// Squared first-band frequencies at alpha2 = 2 pi q / Q, q = 0..Q-1.
class BandIntegralTable {
public:
    BandIntegralTable(double alpha1, std::vector<double> omega_sq);
    static std::shared_ptr<const BandIntegralTable> build(double alpha1, const CrystalConfig& config);

    double alpha1() const { return alpha1_; }
    const std::vector<double>& omega_sq() const { return omega_sq_; }
    // (1/Q) sum_q w_q / (omega^2 - w_q); complex for the root polisher.
    double I(double omega) const;
    Complex I(Complex omega) const;
    double omega0_sq() const;
    double band_max() const;  // sqrt of the largest sample

private:
    double alpha1_;
    std::vector<double> omega_sq_;
};

// Cached per (alpha1, crystal, numerics); epsilon does not enter.
std::shared_ptr<const BandIntegralTable> band_integral_table(double alpha1, const CrystalConfig& config);
double band_integral_I(double omega, double alpha1, const CrystalConfig& config);

struct DiluteRoot {
    double omega = 0.0;
    double residual = 0.0;  // |1 + (...) I(omega)|
};

// Left side of the dilute equation divided by I:
// omega^2 R^2/(2 delta) ln(R/R_d) + 1 - R^2/R_d^2 + 1/I(omega).
double dilute_function(double omega, const BandIntegralTable& table, const CrystalConfig& config);

DiluteRoot dilute_defect_omega(double alpha1, const CrystalConfig& config);
DiluteRoot dilute_defect_omega(const BandIntegralTable& table, const CrystalConfig& config);

struct CriticalEpsilon {
    double epsilon = 0.0;
    double R_d = 0.0;
    double residual = 0.0;
    double omega_star_global = 0.0;
    double inverse_I = 0.0;  // 1/I(omega*, 0)
};

CriticalEpsilon critical_epsilon(const CrystalConfig& config);

struct SmallPerturbation {
    double omega = 0.0;
    double correction = 0.0;  // omega - omega*
    double omega_star = 0.0;
    double c_delta = 0.0;
    double bracket = 0.0;  // R ||psi||^2 - 2 Cap at (alpha1, pi)
};

SmallPerturbation small_perturbation_defect_omega(double alpha1, const CrystalConfig& config);

}  // namespace bubblegap
