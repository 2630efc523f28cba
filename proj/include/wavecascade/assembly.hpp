#pragma once

#include <array>
#include <span>
#include <vector>

#include "wavecascade/geometry.hpp"
#include "wavecascade/numcore.hpp"
#include "wavecascade/transverse.hpp"

namespace wavecascade {

/// Sampled coefficient matrices of the modal ODE on a uniform u-grid,
/// linearly interpolated between stations.
struct CoefficientTable {
    double k = 0.0;
    std::size_t N = 0;
    std::vector<double> u_grid;
    std::vector<CMatrix> A_tab, B2_tab;
    std::vector<CMatrix> J_tab, K_tab, L_tab, M_tab;
    std::vector<std::vector<Complex>> lambda_tab;  // basis eigenvalues per station
    std::vector<Complex> B_minus, B_plus;          // asymptotic diagonals
    double width_left = 0.0, width_right = 0.0;
    double blend_u0 = 0.0, blend_u1 = 0.0;

    double u1() const { return u_grid.front(); }
    double u2() const { return u_grid.back(); }

    void interp_AB(double u, CMatrix& A, CMatrix& B2) const;
    void interp_JKLM(double u, CMatrix& J, CMatrix& K, CMatrix& L, CMatrix& M) const;
    std::vector<Complex> lambda_at(double u) const;
};

/// A_mn = 2 alpha_mn lambda'_n;
/// B2_mn = alpha_mn lambda''_n + beta_mn lambda'_n^2 + delta_mn lambda_n^2 - k^2 mu_mn.
std::pair<CMatrix, CMatrix> assemble_AB(const TransverseBasis& basis,
                                        const CMatrix& mu_mn, double k);

/// Diagonal square root with positive-real (evanescent) or negative-imaginary
/// (propagating) entries.
std::vector<Complex> asymptotic_B(std::span<const Complex> B2_diag);

/// C(u) = D(u) = B_- + f(u)(B_+ - B_-), raised-cosine f on [w0, w1].
/// Returns diagonal entries of C and C'.
std::pair<std::vector<Complex>, std::vector<Complex>> blend_CD(
    double u, std::span<const Complex> B_minus, std::span<const Complex> B_plus,
    double w0, double w1);

/// J, K, L, M of the split first-order system (with D = C, D' = C').
std::array<CMatrix, 4> assemble_JKLM(const CMatrix& A, const CMatrix& B2,
                                     const CMatrix& C, const CMatrix& Cp);

struct TableOptions {
    double du = 0.01;
    // blend window; NaN means the central 20% of the block
    double blend_u0 = std::numeric_limits<double>::quiet_NaN();
    double blend_u1 = std::numeric_limits<double>::quiet_NaN();
    bool parallel = true;
};

/// Basis continuation + matrix assembly over the block's u-grid. The eigenvalue
/// continuation pass is always sequential; the per-station matrix assembly runs
/// under OpenMP unless opts.parallel is false.
CoefficientTable build_table(const ConformalBlock& block, double k, std::size_t N,
                             const TableOptions& opts = {});

/// Sequential reference implementation (same results, kept for testing).
CoefficientTable build_table_serial(const ConformalBlock& block, double k,
                                    std::size_t N, TableOptions opts = {});

}  // namespace wavecascade
