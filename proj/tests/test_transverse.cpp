#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "wavecascade/config.hpp"
#include "wavecascade/runner.hpp"
#include "wavecascade/transverse.hpp"

using namespace wavecascade;

namespace {

constexpr double PI = 3.14159265358979323846;

// adaptive Simpson quadrature oracle for the transverse integrals
template <typename F>
Complex simpson(const F& f, double a, double b, int depth, Complex whole) {
    const double m = 0.5 * (a + b);
    const auto simp = [&f](double x0, double x1) {
        return (x1 - x0) / 6.0 * (f(x0) + 4.0 * f(0.5 * (x0 + x1)) + f(x1));
    };
    const Complex left = simp(a, m), right = simp(m, b);
    if (depth > 48 || std::abs(left + right - whole) < 1e-13)
        return left + right;
    return simpson(f, a, m, depth + 1, left) + simpson(f, m, b, depth + 1, right);
}

template <typename F>
Complex quad(const F& f, double a, double b) {
    const double m = 0.5 * (a + b);
    const Complex whole =
        (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
    return simpson(f, a, b, 0, whole);
}

}  // namespace

TEST_CASE("hard wall eigenvalues are exactly n pi") {
    const auto lam = solve_lambda(Complex(0.0), 10.0, 6);
    for (std::size_t n = 0; n < 6; ++n) {
        CHECK(lam[n].real() == static_cast<double>(n) * PI);
        CHECK(lam[n].imag() == 0.0);
    }
}

TEST_CASE("real root of lambda tan lambda = 1") {
    // k = 1, Y = i gives -ikY = 1; bisection oracle on (0, pi/2)
    double lo = 0.01, hi = PI / 2 - 0.01;
    const auto f = [](double x) { return x * std::tan(x) - 1.0; };
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
    }
    const double oracle = 0.5 * (lo + hi);
    CHECK(oracle == doctest::Approx(0.86033).epsilon(1e-4));
    const auto lam = solve_lambda(Complex(0.0, 1.0), 1.0, 3);
    CHECK(lam[0].real() == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(std::abs(lam[0].imag()) < 1e-12);
}

TEST_CASE("complex admittance root satisfies the eigenvalue equation") {
    const double k = 1.0;
    const Complex Y(0.5, 0.5);
    const auto lam = solve_lambda(Y, k, 5);
    for (std::size_t n = 0; n < 5; ++n) {
        const Complex resid =
            lam[n] * std::tan(lam[n]) + Complex(0.0, k) * Y;
        CHECK(std::abs(resid) < 1e-10 * std::max(1.0, std::norm(lam[n])));
    }
    // leading-order asymptote for the lowest family (next order is |kY|^2/3)
    CHECK(std::abs(lam[0] * lam[0] - Complex(0.0, -k) * Y) < 0.25);
}

TEST_CASE("lambda derivative trivials and closed form at lambda = pi") {
    const auto [lp0, lpp0] = lambda_derivatives(Complex(1.3, -0.2), 0.0, 0.0, 5.0);
    CHECK(lp0 == Complex(0.0));
    CHECK(lpp0 == Complex(0.0));
    // lambda = pi, Y' = 1, k = 1: lambda' = -i/(pi)
    const auto [lp, lpp] = lambda_derivatives(Complex(PI, 0.0), 1.0, 0.0, 1.0);
    CHECK(std::abs(lp - Complex(0.0, -1.0 / PI)) < 1e-14);
    (void)lpp;
}

TEST_CASE("lambda derivatives cross-checked along a synthetic Y path") {
    // Y(u) = (0.3+0.2i)(1 + sin u): solve at u and u +- h, compare with formulas
    const double k = 4.0;
    const Complex c(0.3, 0.2);
    const auto Yof = [&](double u) { return c * (1.0 + std::sin(u)); };
    const auto Ypof = [&](double u) { return c * std::cos(u); };
    const auto Yppof = [&](double u) { return -c * std::sin(u); };
    const double u = 0.7, h = 1e-5;
    auto lam0 = solve_lambda(Yof(u), k, 4);
    auto lamp = solve_lambda(Yof(u + h), k, 4, &lam0);
    auto lamm = solve_lambda(Yof(u - h), k, 4, &lam0);
    for (std::size_t n = 0; n < 4; ++n) {
        const auto [lp, lpp] = lambda_derivatives(lam0[n], Ypof(u), Yppof(u), k);
        const Complex fd1 = (lamp[n] - lamm[n]) / (2.0 * h);
        const Complex fd2 = (lamp[n] - 2.0 * lam0[n] + lamm[n]) / (h * h);
        CHECK(std::abs(fd1 - lp) < 1e-6 * std::max(1.0, std::abs(lp)));
        CHECK(std::abs(fd2 - lpp) < 1e-3 * std::max(1.0, std::abs(lpp)));
    }
}

TEST_CASE("degenerate Q is reported") {
    CHECK_THROWS_AS(lambda_derivatives(Complex(0.0), 1.0, 0.0, 1.0), DegenerateQ);
}

TEST_CASE("biorthogonal norms") {
    CHECK(biorthogonal_norm(Complex(0.0)) == Complex(1.0));
    CHECK(std::abs(biorthogonal_norm(Complex(PI, 0.0)) - 0.5) < 1e-15);
    const Complex lam(1.0, 1.0);
    const Complex oracle = quad(
        [lam](double v) {
            const Complex c = std::cos(lam * v);
            return c * c;
        },
        0.0, 1.0);
    CHECK(std::abs(biorthogonal_norm(lam) - oracle) < 1e-10);
}

TEST_CASE("integral helpers against quadrature, including tiny arguments") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int t = 0; t < 6; ++t) {
        const Complex c(d(rng), 0.3 * d(rng));
        const Complex o1 = quad([c](double v) { return v * std::sin(c * v); }, 0, 1);
        const Complex o2 =
            quad([c](double v) { return v * v * std::cos(c * v); }, 0, 1);
        CHECK(std::abs(int_v_sin(c) - o1) < 1e-11);
        CHECK(std::abs(int_v2_cos(c) - o2) < 1e-11);
    }
    // series region
    for (const Complex c : {Complex(1e-5, 2e-5), Complex(0.05, -0.03)}) {
        const Complex o1 = quad([c](double v) { return v * std::sin(c * v); }, 0, 1);
        const Complex o2 =
            quad([c](double v) { return v * v * std::cos(c * v); }, 0, 1);
        CHECK(std::abs(int_v_sin(c) - o1) < 1e-13);
        CHECK(std::abs(int_v2_cos(c) - o2) < 1e-13);
    }
    CHECK(int_v_sin(Complex(0.0)) == Complex(0.0));
    CHECK(std::abs(int_v2_cos(Complex(0.0)) - 1.0 / 3.0) < 1e-16);
}

TEST_CASE("hard-wall expansion coefficients: alpha_01 = 1/pi, beta_00 = 1/3") {
    TransverseBasis b = make_basis(0.0, Complex(0.0), 0.0, 0.0, 5.0, 4);
    const auto [alpha, beta] = expand_coeffs(b);
    CHECK(std::abs(alpha(0, 1) - 1.0 / PI) < 1e-12);
    CHECK(std::abs(beta(0, 0) - 1.0 / 3.0) < 1e-12);
}

TEST_CASE("truncated series reconstruction of v sin(v lambda_n)") {
    // the expansion coefficients decay like 1/m^2 (derivative kink of the even
    // extension at the wall), so the truncated series converges in the mean;
    // assert rms accuracy plus plain pointwise convergence in N
    const auto rms_err = [](std::size_t N, Complex Y, std::size_t n) {
        TransverseBasis b = make_basis(0.0, Y, 0.0, 0.0, 5.0, N);
        const auto [alpha, beta] = expand_coeffs(b);
        double acc = 0.0;
        int cnt = 0;
        double maxerr = 0.0;
        for (double v = 0.0; v <= 1.0; v += 0.01) {
            Complex recon = 0.0;
            for (std::size_t m = 0; m < N; ++m)
                recon += alpha(m, n) * std::cos(v * b.lambda[m]);
            const double e = std::abs(recon - v * std::sin(v * b.lambda[n]));
            acc += e * e;
            maxerr = std::max(maxerr, e);
            ++cnt;
        }
        return std::make_pair(std::sqrt(acc / cnt), maxerr);
    };
    for (std::size_t n = 0; n <= 5; ++n) {
        const auto [rms20h, max20h] = rms_err(20, Complex(0.0), n);
        CHECK(rms20h < 0.015);
        CHECK(max20h < 0.06);
        const auto [rms20c, max20c] = rms_err(20, Complex(0.4, 0.3), n);
        CHECK(rms20c < 0.015);
        const auto [rms40c, max40c] = rms_err(40, Complex(0.4, 0.3), n);
        CHECK(rms40c < 0.4 * rms20c);  // second-order-in-N mean convergence
        CHECK(max40c < max20c);
    }
}

TEST_CASE("biorthogonality for random complex admittances") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> d(0.05, 0.9);
    for (int trial = 0; trial < 20; ++trial) {
        // draws cover the physically used range |k Y| <~ 8
        const Complex Y(d(rng), d(rng) - 0.45);
        const double k = 1.0 + 7.0 * d(rng);
        const auto lam = solve_lambda(Y, k, 4);
        for (std::size_t mm = 0; mm < 4; ++mm)
            for (std::size_t nn = mm + 1; nn < 4; ++nn) {
                const Complex ip = quad(
                    [&](double v) {
                        return std::cos(lam[mm] * v) * std::cos(lam[nn] * v);
                    },
                    0.0, 1.0);
                CHECK(std::abs(ip) < 1e-9);
            }
    }
}

TEST_CASE("continuation consistency: fine grid vs coarse grid") {
    const Materialized m = materialize(paper_example_config());
    const auto& b1 = m.blocks[0];
    const double k = 15.0;
    const std::size_t N = 6;
    const auto track = [&](double du) {
        std::vector<std::vector<Complex>> lams;
        std::vector<Complex> seed;
        for (double u = -5.0; u <= 5.0 + 1e-9; u += du) {
            Complex Y = b1.Y(u);
            if (std::abs(Y) < 1e-13) Y = 0.0;
            auto lam = solve_lambda(Y, k, N, seed.empty() ? nullptr : &seed);
            seed = lam;
            lams.push_back(lam);
        }
        return lams;
    };
    const auto fine = track(0.01);
    const auto coarse = track(0.02);
    for (std::size_t i = 0; i < coarse.size(); ++i)
        for (std::size_t n = 0; n < N; ++n)
            CHECK(std::abs(coarse[i][n] - fine[2 * i][n]) < 1e-6);
}

TEST_CASE("mu expansion of a constant metric is c I") {
    StraightMap s;
    s.width = 0.7;
    const ConformalMap map(s);
    TransverseBasis b = make_basis(0.0, Complex(0.0), 0.0, 0.0, 5.0, 5);
    const CMatrix mu = expand_mu(b, map, 0.0);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            const Complex expect = (i == j) ? Complex(0.49, 0.0) : Complex(0.0);
            CHECK(std::abs(mu(i, j) - expect) < 1e-10);
        }
}

TEST_CASE("fft and quadrature mu paths agree on the example map") {
    const Materialized m = materialize(paper_example_config());
    const auto& map = m.blocks[0].map();
    TransverseBasis b = make_basis(0.0, Complex(0.0), 0.0, 0.0, 15.0, 8);
    const CMatrix mu_fft = expand_mu_fft(b, map, 0.0);
    const CMatrix mu_quad = expand_mu_quadrature(b, map, 0.0);
    CMatrix d = mu_fft;
    d -= mu_quad;
    CHECK(d.max_abs() < 1e-8);
}

TEST_CASE("hard-wall mu symmetry pattern: mu_mn norm_m = mu_nm norm_n") {
    const Materialized m = materialize(paper_example_config());
    TransverseBasis b = make_basis(0.3, Complex(0.0), 0.0, 0.0, 15.0, 6);
    const CMatrix mu = expand_mu(b, m.blocks[1].map(), 0.3);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            CHECK(std::abs(mu(i, j) * b.norms[i] - mu(j, i) * b.norms[j]) < 1e-10);
}

TEST_CASE("root collision is raised rather than silently reordered") {
    // force two seeds onto the same root
    std::vector<Complex> bad = {Complex(0.2, 0.0), Complex(0.21, 0.0),
                                Complex(2 * PI, 0.0)};
    CHECK_THROWS_AS(solve_lambda(Complex(0.0, 1.0), 1.0, 3, &bad), RootCollision);
}
