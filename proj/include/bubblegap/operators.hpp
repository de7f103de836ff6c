#pragma once

#include <optional>

#include "bubblegap/config.hpp"
#include "bubblegap/greens.hpp"
#include "bubblegap/types.hpp"

// Boundary integral operators on circles as matrices in the Fourier basis
// e^{i n theta}, |n| <= N. Entry (m, n) is the coefficient of e^{i m theta}
// in the image of e^{i n theta}; index = order + N.
namespace bubblegap {

inline int basis_size(int N) { return 2 * N + 1; }

// 2x2 block matrix acting on density pairs (phi, psi).
struct BlockOperator {
    CMatrix b11, b12, b21, b22;

    int truncation() const { return (static_cast<int>(b11.rows()) - 1) / 2; }
    CMatrix dense() const;
    static BlockOperator from_dense(const CMatrix& m);
};

CMatrix single_layer_free_matrix(Complex k, double R, int N);
Eigen::MatrixXd static_single_layer_free_matrix(double R, int N);
// K^{k,*} without the -1/2 shift.
CMatrix neumann_poincare_free_matrix(Complex k, double R, int N);
Eigen::MatrixXd static_neumann_poincare_free_matrix(double R, int N);

struct AssemblyOptions {
    RemainderMethod method = RemainderMethod::LatticeSum;
    int circle_points = 64;  // quadrature route only
};

struct QuasiLayerMatrices {
    CMatrix single_layer;      // S^{alpha,k}
    CMatrix neumann_poincare;  // (K^{-alpha,k})^*
};

// Free part plus the lattice remainder, assembled together.
QuasiLayerMatrices quasi_layer_matrices(const LatticeGreensEvaluator& greens, double R, int N,
                                        const AssemblyOptions& options = {});
// Only the remainder contribution.
QuasiLayerMatrices remainder_layer_matrices(const LatticeGreensEvaluator& greens, double R, int N,
                                            const AssemblyOptions& options = {});
CMatrix quasi_single_layer_matrix(const LatticeGreensEvaluator& greens, double R, int N,
                                  const AssemblyOptions& options = {});
CMatrix quasi_neumann_poincare_matrix(const LatticeGreensEvaluator& greens, double R, int N,
                                      const AssemblyOptions& options = {});

// S^{alpha,k}[phi](x) at an arbitrary point x of the unit cell, phi given by
// its Fourier coefficients. The remainder part uses circle quadrature.
Complex quasi_single_layer_potential(const LatticeGreensEvaluator& greens, double R, const CVector& density,
                                     const Vec2& x, int circle_points = 64);

AssemblyOptions assembly_options(const CrystalConfig& config);

// [S^w, -S^{alpha,w}; -1/2 + K^{w,*}, -delta (1/2 + (K^{-alpha,w})^*)] on radius R.
BlockOperator assemble_A_alpha(Complex omega, const CrystalConfig& config, const BlochVector& alpha);
// Free-space single bubble operator on a circle of the given radius.
BlockOperator assemble_A_D(Complex omega, const CrystalConfig& config, double radius);
// A_D^eps - A_D = [0, E1; 0, E2], closed form.
BlockOperator assemble_perturbation(Complex omega, const CrystalConfig& config);
// Diagonal change-of-radius maps with A_D^eps = P2^{-1} A_{D_d} P1.
BlockOperator perturbation_P1(Complex omega, const CrystalConfig& config);
BlockOperator perturbation_P2(Complex omega, const CrystalConfig& config);

// M = I + (1/Q sum_q A^{(alpha1, 2 pi q/Q)}(omega)^{-1}) (A_D^eps - A_D).
// With band_edge set, frequencies at or below it are rejected.
BlockOperator assemble_M(Complex omega, const CrystalConfig& config, double alpha1,
                         std::optional<double> band_edge = std::nullopt);

}  // namespace bubblegap
