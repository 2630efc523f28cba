#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wavecascade/analysis.hpp"
#include "wavecascade/fd_oracle.hpp"

using namespace wavecascade;

namespace {
constexpr double PI = 3.14159265358979323846;

ConformalBlock straight_block(double width, double strip_len,
                              AdmittanceProfile prof = {}) {
    StraightMap s;
    s.width = width;
    return ConformalBlock(ConformalMap(s), std::move(prof), 0.0, strip_len);
}

double modal_power_n(Complex A, std::size_t n, double a, double k) {
    return modal_power(A, n, a, k);
}
}  // namespace

TEST_CASE("plane wave through a straight hard strip") {
    const ConformalBlock blk = straight_block(0.2, 5.0);
    const FDGrid grid{0.0, 5.0, 400, 24};
    const FDResult r = solve_reference(blk, 10.0, 0, grid);
    CHECK(std::abs(r.reflected[0]) < 1e-3);
    CHECK(std::abs(std::abs(r.transmitted[0]) - 1.0) < 1e-3);
    const Complex exact = std::exp(Complex(0.0, 10.0 * 0.2 * 5.0));
    CHECK(std::abs(r.transmitted[0] - exact) < 1e-3);
}

TEST_CASE("lossless reactive wall conserves power") {
    // beta = 0.5i over a finite patch on a straight strip
    const AdmittanceProfile prof({{1.0, 2.0, 3.0, 4.0, Complex(0.0, 0.5)}});
    const ConformalBlock blk = straight_block(0.2, 5.0, prof);
    const double k = 10.0;
    const FDResult r = solve_reference(blk, k, 0, {0.0, 5.0, 600, 32});
    double pin = modal_power_n(Complex(1.0, 0.0), 0, 0.2, k);
    double pout = 0.0;
    for (std::size_t n = 0; n < 6; ++n) {
        pout += modal_power_n(r.reflected[n], n, 0.2, k);
        pout += modal_power_n(r.transmitted[n], n, 0.2, k);
    }
    CHECK(pout / pin == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("grid self-convergence is second order") {
    const AdmittanceProfile prof({{1.0, 2.0, 3.0, 4.0, Complex(0.4, 0.3)}});
    const ConformalBlock blk = straight_block(0.3, 5.0, prof);
    const double k = 8.0;
    const FDResult r1 = solve_reference(blk, k, 0, {0.0, 5.0, 250, 20});
    const FDResult r2 = solve_reference(blk, k, 0, {0.0, 5.0, 500, 40});
    const FDResult r4 = solve_reference(blk, k, 0, {0.0, 5.0, 1000, 80});
    const double e1 = std::abs(r1.transmitted[0] - r4.transmitted[0]);
    const double e2 = std::abs(r2.transmitted[0] - r4.transmitted[0]);
    // halving h should cut the deviation by about 4 (allow 30 percent slack,
    // measured against the extrapolation-corrected ratio 4/(1-1/4) ~ 3)
    const double ratio = e1 / e2;
    CHECK(ratio > 2.1);
    CHECK(ratio < 8.0);
}

TEST_CASE("reciprocity of transmitted power on a lossless path") {
    // single mode, below the second cut-off; reactive patch only
    const AdmittanceProfile prof({{1.0, 2.0, 3.0, 4.0, Complex(0.0, 0.5)}});
    const ConformalBlock blk = straight_block(0.2, 5.0, prof);
    const double k = 10.0;
    const StripSegment fwd = segment_of_block(blk);
    const StripSegment bwd = reversed_segment(fwd);
    const FDResult rf = solve_reference_path({&fwd, 1}, k, 0, 600, 32);
    const FDResult rb = solve_reference_path({&bwd, 1}, k, 0, 600, 32);
    CHECK(std::abs(rf.transmitted[0]) ==
          doctest::Approx(std::abs(rb.transmitted[0])).epsilon(1e-3));
}

TEST_CASE("grid validation errors") {
    const ConformalBlock blk = straight_block(0.2, 5.0);
    CHECK_THROWS_AS(solve_reference(blk, 10.0, 0, {0.0, 5.0, 8, 24}),
                    GridTooCoarse);
    // unresolved wavelength: huge k on a coarse grid
    CHECK_THROWS_AS(solve_reference(blk, 300.0, 0, {0.0, 5.0, 40, 24}),
                    GridTooCoarse);
}

TEST_CASE("glued path equals a single segment for a uniform guide") {
    const ConformalBlock blk = straight_block(0.2, 6.0);
    const double k = 10.0;
    const StripSegment whole = segment_of_block(blk);
    const ConformalBlock half = straight_block(0.2, 3.0);
    const StripSegment h1 = segment_of_block(half);
    const std::vector<StripSegment> two{h1, h1};
    const FDResult ra = solve_reference_path({&whole, 1}, k, 0, 480, 24);
    const FDResult rb = solve_reference_path(two, k, 0, 480, 24);
    CHECK(std::abs(ra.transmitted[0] - rb.transmitted[0]) < 1e-10);
}
