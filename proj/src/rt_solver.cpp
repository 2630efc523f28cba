#include "wavecascade/rt_solver.hpp"

#include <memory>
#include <ostream>

#include "wavecascade/csv.hpp"

namespace wavecascade {

ScatteringMatrix ScatteringMatrix::identity(std::size_t N, double width) {
    ScatteringMatrix s;
    s.R_plus = CMatrix(N, N);
    s.R_minus = CMatrix(N, N);
    s.T_plus = CMatrix::identity(N);
    s.T_minus = CMatrix::identity(N);
    s.width_left = s.width_right = width;
    return s;
}

ScatteringMatrix ScatteringMatrix::reversed() const {
    ScatteringMatrix s;
    s.R_plus = R_minus;
    s.R_minus = R_plus;
    s.T_plus = T_minus;
    s.T_minus = T_plus;
    s.u1 = u2;
    s.u2 = u1;
    s.width_left = width_right;
    s.width_right = width_left;
    return s;
}

namespace {

struct RtWorkspace {
    CMatrix J, K, L, M, R, T, tmp, dR, dT;
    explicit RtWorkspace(std::size_t N)
        : J(N, N), K(N, N), L(N, N), M(N, N), R(N, N), T(N, N), tmp(N, N),
          dR(N, N), dT(N, N) {}
};

}  // namespace

ScatteringMatrix solve_rt(const CoefficientTable& tab, const RtOptions& opts) {
    const std::size_t N = tab.N;
    const std::size_t nn = N * N;
    const double u1 = tab.u1(), u2 = tab.u2();

    auto run = [&](bool plus_direction) {
        auto ws = std::make_shared<RtWorkspace>(N);
        OdeProblem prob;
        prob.size = 2 * nn;
        prob.rel_tol = opts.rel_tol;
        prob.abs_tol = opts.abs_tol;
        prob.initial.assign(2 * nn, 0.0);
        CMatrix::identity(N).flatten_to(prob.initial.data() + nn);
        if (plus_direction) {
            prob.u_start = u2;
            prob.u_end = u1;
        } else {
            prob.u_start = u1;
            prob.u_end = u2;
        }
        prob.rhs = [&tab, ws, plus_direction](double u, const Complex* y,
                                              Complex* dy) {
            ws->R.unflatten_from(y);
            ws->T.unflatten_from(y + ws->R.rows() * ws->R.rows());
            tab.interp_JKLM(u, ws->J, ws->K, ws->L, ws->M);
            if (plus_direction) {
                // dR = -R (J + K R) + L + M R ; dT = -T (J + K R)
                ws->tmp = ws->J;
                ws->tmp += ws->K * ws->R;
                ws->dR = ws->L;
                ws->dR += ws->M * ws->R;
                ws->dR -= ws->R * ws->tmp;
                ws->dT = ws->T * ws->tmp;
                ws->dT *= -1.0;
            } else {
                // dR = -R (M + L R) + K + J R ; dT = -T (M + L R)
                ws->tmp = ws->M;
                ws->tmp += ws->L * ws->R;
                ws->dR = ws->K;
                ws->dR += ws->J * ws->R;
                ws->dR -= ws->R * ws->tmp;
                ws->dT = ws->T * ws->tmp;
                ws->dT *= -1.0;
            }
            ws->dR.flatten_to(dy);
            ws->dT.flatten_to(dy + ws->R.rows() * ws->R.rows());
        };
        const OdeDenseSolution sol = integrate_dense(prob);
        CMatrix R(N, N), T(N, N);
        R.unflatten_from(sol.final_state().data());
        T.unflatten_from(sol.final_state().data() + nn);
        return std::make_pair(R, T);
    };

    ScatteringMatrix s;
    auto [Rp, Tp] = run(true);
    auto [Rm, Tm] = run(false);
    s.R_plus = std::move(Rp);
    s.T_plus = std::move(Tp);
    s.R_minus = std::move(Rm);
    s.T_minus = std::move(Tm);
    s.u1 = u1;
    s.u2 = u2;
    s.width_left = tab.width_left;
    s.width_right = tab.width_right;
    return s;
}

void write_smatrix_csv(const ScatteringMatrix& S, std::ostream& os) {
    os << "matrix,m,n,re,im\n";
    const auto dump = [&os](const char* name, const CMatrix& M) {
        for (std::size_t i = 0; i < M.rows(); ++i)
            for (std::size_t j = 0; j < M.cols(); ++j)
                os << name << ',' << i << ',' << j << ',' << csv_num(M(i, j).real())
                   << ',' << csv_num(M(i, j).imag()) << '\n';
    };
    dump("R+", S.R_plus);
    dump("R-", S.R_minus);
    dump("T+", S.T_plus);
    dump("T-", S.T_minus);
}

}  // namespace wavecascade
