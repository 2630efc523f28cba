#include "wavecascade/assembly.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wavecascade {

namespace {
constexpr double PI = 3.14159265358979323846;

std::size_t locate(const std::vector<double>& grid, double u) {
    const double du = grid[1] - grid[0];
    auto i = static_cast<std::ptrdiff_t>((u - grid.front()) / du);
    i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(grid.size()) - 2);
    return static_cast<std::size_t>(i);
}

void lerp(const CMatrix& a, const CMatrix& b, double t, CMatrix& out) {
    const std::size_t n = a.rows() * a.cols();
    const Complex* pa = a.data();
    const Complex* pb = b.data();
    Complex* po = out.data();
    for (std::size_t i = 0; i < n; ++i) po[i] = (1.0 - t) * pa[i] + t * pb[i];
}

}  // namespace

void CoefficientTable::interp_AB(double u, CMatrix& A, CMatrix& B2) const {
    const std::size_t i = locate(u_grid, u);
    const double t = (u - u_grid[i]) / (u_grid[i + 1] - u_grid[i]);
    if (A.rows() != N) A = CMatrix(N, N);
    if (B2.rows() != N) B2 = CMatrix(N, N);
    lerp(A_tab[i], A_tab[i + 1], t, A);
    lerp(B2_tab[i], B2_tab[i + 1], t, B2);
}

void CoefficientTable::interp_JKLM(double u, CMatrix& J, CMatrix& K, CMatrix& L,
                                   CMatrix& M) const {
    const std::size_t i = locate(u_grid, u);
    const double t = (u - u_grid[i]) / (u_grid[i + 1] - u_grid[i]);
    if (J.rows() != N) J = CMatrix(N, N);
    if (K.rows() != N) K = CMatrix(N, N);
    if (L.rows() != N) L = CMatrix(N, N);
    if (M.rows() != N) M = CMatrix(N, N);
    lerp(J_tab[i], J_tab[i + 1], t, J);
    lerp(K_tab[i], K_tab[i + 1], t, K);
    lerp(L_tab[i], L_tab[i + 1], t, L);
    lerp(M_tab[i], M_tab[i + 1], t, M);
}

std::vector<Complex> CoefficientTable::lambda_at(double u) const {
    const std::size_t i = locate(u_grid, u);
    const double t = (u - u_grid[i]) / (u_grid[i + 1] - u_grid[i]);
    std::vector<Complex> out(N);
    for (std::size_t n = 0; n < N; ++n)
        out[n] = (1.0 - t) * lambda_tab[i][n] + t * lambda_tab[i + 1][n];
    return out;
}

std::pair<CMatrix, CMatrix> assemble_AB(const TransverseBasis& basis,
                                        const CMatrix& mu_mn, double k) {
    const std::size_t N = basis.lambda.size();
    const auto [alpha, beta] = expand_coeffs(basis);
    CMatrix A(N, N), B2(N, N);
    const double k2 = k * k;
    for (std::size_t m = 0; m < N; ++m) {
        for (std::size_t n = 0; n < N; ++n) {
            const Complex lp = basis.lambda_p[n];
            A(m, n) = 2.0 * alpha(m, n) * lp;
            B2(m, n) = alpha(m, n) * basis.lambda_pp[n] + beta(m, n) * lp * lp -
                       k2 * mu_mn(m, n);
            if (m == n) B2(m, n) += basis.lambda[n] * basis.lambda[n];
        }
    }
    return {A, B2};
}

std::vector<Complex> asymptotic_B(std::span<const Complex> B2_diag) {
    std::vector<Complex> B(B2_diag.size());
    for (std::size_t i = 0; i < B2_diag.size(); ++i) {
        const double b2 = B2_diag[i].real();
        B[i] = (b2 >= 0.0) ? Complex(std::sqrt(b2), 0.0)
                           : Complex(0.0, -std::sqrt(-b2));
    }
    return B;
}

std::pair<std::vector<Complex>, std::vector<Complex>> blend_CD(
    double u, std::span<const Complex> B_minus, std::span<const Complex> B_plus,
    double w0, double w1) {
    double f = 0.0, fp = 0.0;
    if (u >= w1) {
        f = 1.0;
    } else if (u > w0) {
        const double s = (u - w0) / (w1 - w0);
        f = 0.5 * (1.0 - std::cos(PI * s));
        fp = 0.5 * PI * std::sin(PI * s) / (w1 - w0);
    }
    std::vector<Complex> C(B_minus.size()), Cp(B_minus.size());
    for (std::size_t i = 0; i < B_minus.size(); ++i) {
        const Complex d = B_plus[i] - B_minus[i];
        C[i] = B_minus[i] + f * d;
        Cp[i] = fp * d;
    }
    return {C, Cp};
}

std::array<CMatrix, 4> assemble_JKLM(const CMatrix& A, const CMatrix& B2,
                                     const CMatrix& C, const CMatrix& Cp) {
    const std::size_t N = A.rows();
    CMatrix CD = C;
    CD += C;  // C + D with D = C
    const CMatrix AmC_C = (A - C) * C;
    const CMatrix ApC_C = (A + C) * C;
    CMatrix rhs(N, 4 * N);
    // columns [0,N): -C' - B^2 + (A-C)C   -> J
    // columns [N,2N): +C' - B^2 - (A-C)C  -> K
    // columns [2N,3N): +C' + B^2 - (A+C)C -> L
    // columns [3N,4N): -C' + B^2 + (A+C)C -> M
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            rhs(i, j) = -Cp(i, j) - B2(i, j) + AmC_C(i, j);
            rhs(i, N + j) = Cp(i, j) - B2(i, j) - AmC_C(i, j);
            rhs(i, 2 * N + j) = Cp(i, j) + B2(i, j) - ApC_C(i, j);
            rhs(i, 3 * N + j) = -Cp(i, j) + B2(i, j) + ApC_C(i, j);
        }
    }
    const CMatrix sol = mat_solve(CD, rhs);
    std::array<CMatrix, 4> out{CMatrix(N, N), CMatrix(N, N), CMatrix(N, N),
                               CMatrix(N, N)};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            out[0](i, j) = sol(i, j);
            out[1](i, j) = sol(i, N + j);
            out[2](i, j) = sol(i, 2 * N + j);
            out[3](i, j) = sol(i, 3 * N + j);
        }
    return out;
}

namespace {

struct StationData {
    Complex Y, Yp, Ypp;
};

CoefficientTable build_table_impl(const ConformalBlock& block, double k,
                                  std::size_t N, const TableOptions& opts,
                                  bool parallel) {
    CoefficientTable tab;
    tab.k = k;
    tab.N = N;
    const double span = block.u_right() - block.u_left();
    const auto nstep =
        std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(span / opts.du)));
    tab.u_grid.resize(nstep + 1);
    const double du = span / static_cast<double>(nstep);
    for (std::size_t i = 0; i <= nstep; ++i)
        tab.u_grid[i] = block.u_left() + du * static_cast<double>(i);
    tab.u_grid.back() = block.u_right();

    // pass 1: admittance samples + sequential eigenvalue continuation
    std::vector<StationData> sd(nstep + 1);
    tab.lambda_tab.resize(nstep + 1);
    {
        std::vector<Complex> seed;
        for (std::size_t i = 0; i <= nstep; ++i) {
            auto [Y, Yp, Ypp] = block.Y_derivs(tab.u_grid[i]);
            if (std::abs(Y) < 1e-13) { Y = 0.0; Yp = 0.0; Ypp = 0.0; }
            sd[i] = {Y, Yp, Ypp};
            tab.lambda_tab[i] =
                solve_lambda(Y, k, N, seed.empty() ? nullptr : &seed);
            seed = tab.lambda_tab[i];
        }
    }

    // pass 2: per-station assembly (data-parallel)
    tab.A_tab.resize(nstep + 1);
    tab.B2_tab.resize(nstep + 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (std::ptrdiff_t ip = 0; ip <= static_cast<std::ptrdiff_t>(nstep); ++ip) {
        const auto i = static_cast<std::size_t>(ip);
        TransverseBasis basis;
        basis.u = tab.u_grid[i];
        basis.lambda = tab.lambda_tab[i];
        basis.lambda_p.resize(N);
        basis.lambda_pp.resize(N);
        basis.norms.resize(N);
        for (std::size_t n = 0; n < N; ++n) {
            if (sd[i].Y == 0.0) {
                basis.lambda_p[n] = 0.0;
                basis.lambda_pp[n] = 0.0;
            } else {
                const auto [lp, lpp] = lambda_derivatives(basis.lambda[n], sd[i].Yp,
                                                          sd[i].Ypp, k);
                basis.lambda_p[n] = lp;
                basis.lambda_pp[n] = lpp;
            }
            basis.norms[n] = biorthogonal_norm(basis.lambda[n]);
        }
        const CMatrix mu = expand_mu(basis, block.map(), tab.u_grid[i]);
        auto [A, B2] = assemble_AB(basis, mu, k);
        tab.A_tab[i] = std::move(A);
        tab.B2_tab[i] = std::move(B2);
    }

    // snap the end stations to the asymptotic (infinitely straight) values
    tab.width_left = block.width_left();
    tab.width_right = block.width_right();
    for (int side = 0; side < 2; ++side) {
        const std::size_t i = (side == 0) ? 0 : nstep;
        const double gam = (side == 0) ? tab.width_left : tab.width_right;
        CMatrix A0(N, N), B20(N, N);
        for (std::size_t n = 0; n < N; ++n) {
            const double npi = static_cast<double>(n) * PI;
            B20(n, n) = npi * npi - (k * gam) * (k * gam);
        }
        tab.A_tab[i] = std::move(A0);
        tab.B2_tab[i] = std::move(B20);
    }
    {
        std::vector<Complex> dm(N), dp(N);
        for (std::size_t n = 0; n < N; ++n) {
            dm[n] = tab.B2_tab.front()(n, n);
            dp[n] = tab.B2_tab.back()(n, n);
        }
        tab.B_minus = asymptotic_B(dm);
        tab.B_plus = asymptotic_B(dp);
    }

    // blend window (default: central 20% of the block)
    tab.blend_u0 = std::isnan(opts.blend_u0)
                       ? block.u_left() + 0.4 * span : opts.blend_u0;
    tab.blend_u1 = std::isnan(opts.blend_u1)
                       ? block.u_left() + 0.6 * span : opts.blend_u1;

    tab.J_tab.resize(nstep + 1);
    tab.K_tab.resize(nstep + 1);
    tab.L_tab.resize(nstep + 1);
    tab.M_tab.resize(nstep + 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (std::ptrdiff_t ip = 0; ip <= static_cast<std::ptrdiff_t>(nstep); ++ip) {
        const auto i = static_cast<std::size_t>(ip);
        const auto [Cd, Cpd] = blend_CD(tab.u_grid[i], tab.B_minus, tab.B_plus,
                                        tab.blend_u0, tab.blend_u1);
        const CMatrix C = CMatrix::diagonal(Cd);
        const CMatrix Cp = CMatrix::diagonal(Cpd);
        auto jklm = assemble_JKLM(tab.A_tab[i], tab.B2_tab[i], C, Cp);
        tab.J_tab[i] = std::move(jklm[0]);
        tab.K_tab[i] = std::move(jklm[1]);
        tab.L_tab[i] = std::move(jklm[2]);
        tab.M_tab[i] = std::move(jklm[3]);
    }
    return tab;
}

}  // namespace

CoefficientTable build_table(const ConformalBlock& block, double k, std::size_t N,
                             const TableOptions& opts) {
    return build_table_impl(block, k, N, opts, opts.parallel);
}

CoefficientTable build_table_serial(const ConformalBlock& block, double k,
                                    std::size_t N, TableOptions opts) {
    opts.parallel = false;
    return build_table_impl(block, k, N, opts, false);
}

}  // namespace wavecascade
