#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wavecascade/cascade.hpp"
#include "wavecascade/config.hpp"
#include "wavecascade/dtn_solver.hpp"
#include "wavecascade/rt_solver.hpp"
#include "wavecascade/runner.hpp"

using namespace wavecascade;

namespace {
constexpr double PI = 3.14159265358979323846;

ConformalBlock straight_block(double width, double strip_len) {
    StraightMap s;
    s.width = width;
    return ConformalBlock(ConformalMap(s), AdmittanceProfile{}, 0.0, strip_len);
}
}  // namespace

TEST_CASE("straight hard block: R = 0 and T is the analytic propagator") {
    // physical length 1 = strip length 1/width
    const double a = 0.2, k = 10.0, ell = 1.0;
    const std::size_t N = 6;
    const ConformalBlock blk = straight_block(a, ell / a);
    TableOptions opt;
    opt.du = 0.05;
    const ScatteringMatrix S = solve_rt(build_table(blk, k, N, opt), {1e-10, 1e-12});
    CHECK(S.R_plus.norm_inf() < 1e-8);
    CHECK(S.R_minus.norm_inf() < 1e-8);
    const auto U = propagator_U(a, k, ell, N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            const Complex expect = (i == j) ? U[i] : 0.0;
            CHECK(std::abs(S.T_plus(i, j) - expect) < 1e-8);
            CHECK(std::abs(S.T_minus(i, j) - expect) < 1e-8);
        }
}

TEST_CASE("split-and-recompose consistency at an interior straight station") {
    // straight hard block split at the middle must recompose to the whole
    const double a = 0.4, k = 9.0;
    const std::size_t N = 5;
    TableOptions opt;
    opt.du = 0.05;
    const ScatteringMatrix whole =
        solve_rt(build_table(straight_block(a, 5.0), k, N, opt));
    const ScatteringMatrix half =
        solve_rt(build_table(straight_block(a, 2.5), k, N, opt));
    const CascadeResult two = combine(half, {a, 0.0}, half, k);
    CMatrix d = two.S_total.T_plus;
    d -= whole.T_plus;
    CHECK(d.max_abs() < 1e-6);
    d = two.S_total.R_plus;
    d -= whole.R_plus;
    CHECK(d.max_abs() < 1e-6);
}

TEST_CASE("example block split-and-recompose across the admittance region") {
    // split the transition block at u = 3 (straight and hard there: beta = 0,
    // |F'| constant to ~1e-5); recompose with a zero-length connector
    const SolveConfig cfg = paper_example_config();
    const auto& b1 = std::get<BlockElement>(cfg.elements[0]);
    const double k = 5.0;
    const std::size_t N = 6;
    const ConformalBlock whole(b1.map, AdmittanceProfile(b1.admittance), -5.0, 5.0);
    const ConformalBlock left(b1.map, AdmittanceProfile(b1.admittance), -5.0, 3.0);
    const ConformalBlock right(b1.map, AdmittanceProfile(b1.admittance), 3.0, 5.0);
    TableOptions fine;
    fine.du = 0.0025;
    const RtOptions tight{1e-10, 1e-12};
    const ScatteringMatrix Sw = solve_rt(build_table(whole, k, N, fine), tight);
    const ScatteringMatrix Sl = solve_rt(build_table(left, k, N, fine), tight);
    const ScatteringMatrix Sr = solve_rt(build_table(right, k, N, fine), tight);
    const CascadeResult comp = combine(Sl, {Sl.width_right, 0.0}, Sr, k);
    CMatrix d = comp.S_total.T_plus;
    d -= Sw.T_plus;
    CHECK(d.max_abs() < 1e-5);
    d = comp.S_total.R_plus;
    d -= Sw.R_plus;
    CHECK(d.max_abs() < 1e-5);
}

TEST_CASE("tolerance stability of the riccati integration") {
    const Materialized m = materialize(paper_example_config());
    const CoefficientTable tab = build_table(m.blocks[0], 5.0, 6);
    const ScatteringMatrix s1 = solve_rt(tab, {1e-8, 1e-10});
    const ScatteringMatrix s2 = solve_rt(tab, {1e-10, 1e-12});
    CMatrix d = s1.T_plus;
    d -= s2.T_plus;
    CHECK(d.max_abs() < 1e-6);
}

TEST_CASE("DtN on a straight block: operators pinned at the asymptotic values") {
    const ConformalBlock blk = straight_block(0.2, 5.0);
    TableOptions opt;
    opt.du = 0.05;
    const CoefficientTable tab = build_table(blk, 10.0, 5, opt);
    const DtNSolution dtn = solve_dtn_operators(tab);
    const CMatrix Bp = CMatrix::diagonal(tab.B_plus);
    const CMatrix Bm = CMatrix::diagonal(tab.B_minus);
    for (std::size_t i = 0; i < tab.u_grid.size(); i += 17) {
        CMatrix dR = dtn.LambdaR_tab[i];
        dR -= Bp;
        CMatrix dL = dtn.LambdaL_tab[i];
        dL -= Bm;
        CHECK(dR.max_abs() < 1e-7);
        CHECK(dL.max_abs() < 1e-7);
    }
}

TEST_CASE("scalar DtN riccati against the constant-coefficient closed form") {
    // Lambda' = (a + Lambda) Lambda - b2 with constant a, b2:
    // roots of x^2 + a x - b2 separate the flow; closed form via the
    // cross-ratio exponential
    const Complex a(0.2, -0.4), b2(1.5, 0.7);
    const Complex disc = std::sqrt(a * a + 4.0 * b2);
    const Complex xp = 0.5 * (-a + disc), xm = 0.5 * (-a - disc);
    const Complex x0 = xp + 0.3;       // start near the + root
    const double u2 = 2.0, u1 = 0.0;   // integrate right-to-left as Lambda_R
    OdeProblem p;
    p.size = 1;
    p.initial = {x0};
    p.u_start = u2;
    p.u_end = u1;
    p.rhs = [a, b2](double, const Complex* y, Complex* dy) {
        dy[0] = (a + y[0]) * y[0] - b2;
    };
    const Complex got = integrate_dense(p).final_state()[0];
    const Complex r0 = (x0 - xp) / (x0 - xm);
    const Complex r1 = r0 * std::exp((xp - xm) * (u1 - u2));
    const Complex exact = (xp - xm * r1) / (1.0 - r1);
    CHECK(std::abs(got - exact) < 1e-8);
}

TEST_CASE("DtN operators stay finite across the example block at k = 15") {
    const Materialized m = materialize(paper_example_config());
    const CoefficientTable tab = build_table(m.blocks[0], 15.0, 8);
    const DtNSolution dtn = solve_dtn_operators(tab);
    for (const auto& L : dtn.LambdaR_tab) {
        CHECK(std::isfinite(L.max_abs()));
        CHECK(L.max_abs() < 1e4);
    }
}

TEST_CASE("field propagation through a straight block: phases and decay") {
    const double a = 0.2, k = 10.0;
    const std::size_t N = 4;
    const ConformalBlock blk = straight_block(a, 5.0);
    TableOptions opt;
    opt.du = 0.05;
    const CoefficientTable tab = build_table(blk, k, N, opt);
    const DtNSolution dtn = solve_dtn_operators(tab);
    SUBCASE("propagating mode keeps unit magnitude and advances phase") {
        std::vector<Complex> e0(N, 0.0);
        e0[0] = 1.0;
        const auto phi = propagate_field(tab, dtn, e0);
        const double alpha0 = k;  // mode 0
        for (std::size_t i = 0; i < tab.u_grid.size(); i += 25) {
            CHECK(std::abs(std::abs(phi[i][0]) - 1.0) < 1e-7);
            const Complex expect =
                std::exp(Complex(0.0, alpha0 * a * (tab.u_grid[i] - tab.u1())));
            CHECK(std::abs(phi[i][0] - expect) < 1e-6);
        }
    }
    SUBCASE("evanescent mode decays at its modal rate") {
        std::vector<Complex> e2(N, 0.0);
        e2[2] = 1.0;
        const auto phi = propagate_field(tab, dtn, e2);
        const double b2 = std::pow(2.0 * PI, 2) - k * k * a * a;
        const double b = std::sqrt(b2);
        const std::size_t i = tab.u_grid.size() / 2;
        const double expect = std::exp(-b * (tab.u_grid[i] - tab.u1()));
        CHECK(std::abs(phi[i][2] - expect) < 1e-6 + 1e-6 * expect);
    }
}

TEST_CASE("reconstructed field: constant in v for mode 0, boundary residuals") {
    const Materialized m = materialize(paper_example_config());
    const double k = 5.0;
    const std::size_t N = 4;
    TableOptions opt;
    opt.du = 0.02;
    const CoefficientTable tab = build_table(m.blocks[0], k, N, opt);
    const DtNSolution dtn = solve_dtn_operators(tab);
    const CMatrix Rp = dtn_reflection_plus(tab, dtn);
    std::vector<Complex> phi1(N, 0.0);
    phi1[0] = 1.0;
    const auto refl = Rp.apply(phi1);
    for (std::size_t n = 0; n < N; ++n) phi1[n] += refl[n];
    const auto phi = propagate_field(tab, dtn, phi1);

    SUBCASE("hard-wall single mode is flat across the section") {
        StraightMap s;
        s.width = 0.2;
        const ConformalBlock hard(ConformalMap(s), AdmittanceProfile{}, 0.0, 5.0);
        const CoefficientTable tab0 = build_table(hard, k, 3, opt);
        const DtNSolution dtn0 = solve_dtn_operators(tab0);
        std::vector<Complex> e0(3, 0.0);
        e0[0] = 1.0;
        const auto phi0 = propagate_field(tab0, dtn0, e0);
        const std::vector<double> vg{0.0, 0.25, 0.5, 0.75, 1.0};
        const FieldMap fm = reconstruct_field(phi0, tab0, hard.map(), vg);
        for (std::size_t i = 0; i + 5 <= fm.size(); i += 5)
            for (int j = 1; j < 5; ++j)
                CHECK(std::abs(fm[i + j].phi - fm[i].phi) < 1e-10);
    }

    SUBCASE("Neumann residual at v = 0 and admittance residual at v = 1") {
        const double h = 1e-4;
        double max_neumann = 0.0, max_adm = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < tab.u_grid.size(); i += 100) {
            const double u = tab.u_grid[i];
            const auto& lam = tab.lambda_tab[i];
            const auto eval = [&](double v) {
                Complex s = 0.0;
                for (std::size_t n = 0; n < N; ++n)
                    s += phi[i][n] * std::cos(v * lam[n]);
                return s;
            };
            const Complex at0 = eval(0.0), at1 = eval(1.0);
            scale = std::max(scale, std::abs(at0));
            // one-sided second-order derivatives
            const Complex d0 =
                (-3.0 * eval(0.0) + 4.0 * eval(h) - eval(2 * h)) / (2 * h);
            const Complex d1 =
                (3.0 * eval(1.0) - 4.0 * eval(1.0 - h) + eval(1.0 - 2 * h)) /
                (2 * h);
            max_neumann = std::max(max_neumann, std::abs(d0));
            const Complex bc = Complex(0.0, k) * m.blocks[0].Y(u) * at1;
            max_adm = std::max(max_adm,
                               std::abs(d1 - bc) / std::max(1.0, std::abs(bc)));
        }
        CHECK(max_neumann < 1e-6 * std::max(1.0, scale) + 1e-6);
        CHECK(max_adm < 1e-3);
    }
}
