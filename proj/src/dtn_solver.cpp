#include "wavecascade/dtn_solver.hpp"

#include <cmath>
#include <memory>
#include <ostream>

#include "wavecascade/csv.hpp"

namespace wavecascade {

CMatrix DtNSolution::lambdaR_at(double u) const {
    CMatrix m(N, N);
    m.unflatten_from(denseR.eval(u).data());
    return m;
}

CMatrix DtNSolution::lambdaL_at(double u) const {
    CMatrix m(N, N);
    m.unflatten_from(denseL.eval(u).data());
    return m;
}

namespace {

struct LamWorkspace {
    CMatrix A, B2, Lam, d;
    explicit LamWorkspace(std::size_t N) : A(N, N), B2(N, N), Lam(N, N), d(N, N) {}
};

OdeDenseSolution solve_lambda_ode(const CoefficientTable& tab, bool right,
                                  const DtnOptions& opts) {
    const std::size_t N = tab.N;
    auto ws = std::make_shared<LamWorkspace>(N);
    OdeProblem prob;
    prob.size = N * N;
    prob.rel_tol = opts.rel_tol;
    prob.abs_tol = opts.abs_tol;
    prob.max_step = (tab.u2() - tab.u1()) / 50.0;
    prob.initial.resize(N * N);
    if (right) {
        prob.u_start = tab.u2();
        prob.u_end = tab.u1();
        CMatrix::diagonal(tab.B_plus).flatten_to(prob.initial.data());
        prob.rhs = [&tab, ws](double u, const Complex* y, Complex* dy) {
            ws->Lam.unflatten_from(y);
            tab.interp_AB(u, ws->A, ws->B2);
            // (A + Lam) Lam - B^2
            ws->d = ws->A;
            ws->d += ws->Lam;
            ws->d = ws->d * ws->Lam;
            ws->d -= ws->B2;
            ws->d.flatten_to(dy);
        };
    } else {
        prob.u_start = tab.u1();
        prob.u_end = tab.u2();
        CMatrix::diagonal(tab.B_minus).flatten_to(prob.initial.data());
        prob.rhs = [&tab, ws](double u, const Complex* y, Complex* dy) {
            ws->Lam.unflatten_from(y);
            tab.interp_AB(u, ws->A, ws->B2);
            // (A - Lam) Lam + B^2
            ws->d = ws->A;
            ws->d -= ws->Lam;
            ws->d = ws->d * ws->Lam;
            ws->d += ws->B2;
            ws->d.flatten_to(dy);
        };
    }
    try {
        return integrate_dense(prob);
    } catch (const StepFailure&) {
        prob.max_step /= 10.0;  // stiff station: one retry with a tighter cap
        return integrate_dense(prob);
    }
}

}  // namespace

DtNSolution solve_dtn_operators(const CoefficientTable& tab, const DtnOptions& opts) {
    DtNSolution d;
    d.N = tab.N;
    d.u_grid = tab.u_grid;
    d.denseR = solve_lambda_ode(tab, true, opts);
    d.denseL = solve_lambda_ode(tab, false, opts);
    d.LambdaR_tab.reserve(d.u_grid.size());
    d.LambdaL_tab.reserve(d.u_grid.size());
    for (const double u : d.u_grid) {
        d.LambdaR_tab.push_back(d.lambdaR_at(u));
        d.LambdaL_tab.push_back(d.lambdaL_at(u));
    }
    return d;
}

CMatrix dtn_reflection_plus(const CoefficientTable& tab, const DtNSolution& dtn) {
    const std::size_t N = tab.N;
    const CMatrix LamR = dtn.LambdaR_tab.front();
    const CMatrix Bm = CMatrix::diagonal(tab.B_minus);
    return mat_solve(Bm + LamR, Bm - LamR);
}

std::vector<Complex> dtn_left_boundary_field(const CoefficientTable& tab,
                                             const DtNSolution& dtn,
                                             std::span<const Complex> q) {
    const std::size_t N = tab.N;
    const CMatrix LamL = dtn.LambdaL_tab.back();
    const CMatrix Bp = CMatrix::diagonal(tab.B_plus);
    CMatrix rhs(N, 1);
    for (std::size_t i = 0; i < N; ++i) rhs(i, 0) = 2.0 * tab.B_plus[i] * q[i];
    const CMatrix sol = mat_solve(LamL + Bp, rhs);
    std::vector<Complex> out(N);
    for (std::size_t i = 0; i < N; ++i) out[i] = sol(i, 0);
    return out;
}

namespace {

std::vector<std::vector<Complex>> propagate_impl(const CoefficientTable& tab,
                                                 const DtNSolution& dtn,
                                                 std::span<const Complex> phi0,
                                                 bool rightward,
                                                 const DtnOptions& opts) {
    const std::size_t N = tab.N;
    auto lam = std::make_shared<CMatrix>(N, N);
    OdeProblem prob;
    prob.size = N;
    prob.rel_tol = opts.rel_tol;
    prob.abs_tol = opts.abs_tol;
    prob.initial.assign(phi0.begin(), phi0.end());
    if (rightward) {
        prob.u_start = tab.u1();
        prob.u_end = tab.u2();
        prob.rhs = [&dtn, lam](double u, const Complex* y, Complex* dy) {
            lam->unflatten_from(dtn.denseR.eval(u).data());
            const std::size_t n = lam->rows();
            for (std::size_t i = 0; i < n; ++i) {
                Complex s = 0.0;
                for (std::size_t j = 0; j < n; ++j) s += (*lam)(i, j) * y[j];
                dy[i] = -s;
            }
        };
    } else {
        prob.u_start = tab.u2();
        prob.u_end = tab.u1();
        prob.rhs = [&dtn, lam](double u, const Complex* y, Complex* dy) {
            lam->unflatten_from(dtn.denseL.eval(u).data());
            const std::size_t n = lam->rows();
            for (std::size_t i = 0; i < n; ++i) {
                Complex s = 0.0;
                for (std::size_t j = 0; j < n; ++j) s += (*lam)(i, j) * y[j];
                dy[i] = s;
            }
        };
    }
    OdeTrajectory traj;
    try {
        traj = integrate(prob, tab.u_grid);
    } catch (const StepFailure&) {
        prob.max_step = (tab.u2() - tab.u1()) / 500.0;
        traj = integrate(prob, tab.u_grid);
    }
    return traj.states;
}

}  // namespace

std::vector<std::vector<Complex>> propagate_field(const CoefficientTable& tab,
                                                  const DtNSolution& dtn,
                                                  std::span<const Complex> phi_total_u1,
                                                  const DtnOptions& opts) {
    return propagate_impl(tab, dtn, phi_total_u1, true, opts);
}

std::vector<std::vector<Complex>> propagate_field_left(
    const CoefficientTable& tab, const DtNSolution& dtn,
    std::span<const Complex> phiL_u2, const DtnOptions& opts) {
    // sampling follows u_grid order regardless of integration direction
    return propagate_impl(tab, dtn, phiL_u2, false, opts);
}

FieldMap reconstruct_field(const std::vector<std::vector<Complex>>& phi_tab,
                           const CoefficientTable& tab, const ConformalMap& map,
                           std::span<const double> v_grid) {
    FieldMap fm;
    fm.reserve(phi_tab.size() * v_grid.size());
    for (std::size_t i = 0; i < tab.u_grid.size(); ++i) {
        const double u = tab.u_grid[i];
        const auto& lam = tab.lambda_tab[i];
        for (const double v : v_grid) {
            Complex phi = 0.0;
            for (std::size_t n = 0; n < tab.N; ++n)
                phi += phi_tab[i][n] * std::cos(v * lam[n]);
            fm.push_back({u, v, map.point(Complex(u, v)), phi});
        }
    }
    return fm;
}

void write_fieldmap_csv(const FieldMap& fm, std::ostream& os) {
    os << "u,v,x,y,re,im\n";
    for (const auto& s : fm)
        os << csv_num(s.u) << ',' << csv_num(s.v) << ',' << csv_num(s.z.real())
           << ',' << csv_num(s.z.imag()) << ',' << csv_num(s.phi.real()) << ','
           << csv_num(s.phi.imag()) << '\n';
}

}  // namespace wavecascade
