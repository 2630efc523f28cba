#include "wavecascade/cascade.hpp"

#include <cmath>

namespace wavecascade {

namespace {
constexpr double PI = 3.14159265358979323846;
}

Complex axial_wavenumber(double a, double k, std::size_t n) {
    const double t = k * k - std::pow(static_cast<double>(n) * PI / a, 2);
    return (t >= 0.0) ? Complex(std::sqrt(t), 0.0) : Complex(0.0, std::sqrt(-t));
}

std::vector<Complex> propagator_U(double a, double k, double ell, std::size_t N) {
    std::vector<Complex> u(N);
    for (std::size_t n = 0; n < N; ++n)
        u[n] = std::exp(Complex(0.0, 1.0) * axial_wavenumber(a, k, n) * ell);
    return u;
}

namespace {

void check_width(double wa, double wb, const char* what) {
    if (std::abs(wa - wb) > 1e-3 * std::max(wa, wb))
        throw ConfigError(std::string("cascade: width mismatch at ") + what + ": " +
                          std::to_string(wa) + " vs " + std::to_string(wb));
}

// the plus-direction composition, Eq. of the building-block method
struct PlusResult {
    CMatrix C_plus, C_minus, T_tot, R_tot;
};

PlusResult combine_plus(const ScatteringMatrix& S1, const CMatrix& U,
                        const ScatteringMatrix& S3) {
    const std::size_t N = U.rows();
    const CMatrix I = CMatrix::identity(N);
    const CMatrix URU = U * S3.R_plus * U;
    PlusResult r;
    r.C_plus = mat_solve(I - S1.R_minus * URU, S1.T_plus);
    r.C_minus = URU * r.C_plus;
    r.T_tot = S3.T_plus * U * r.C_plus;
    r.R_tot = S1.R_plus + S1.T_minus * r.C_minus;
    return r;
}

}  // namespace

CascadeResult combine(const ScatteringMatrix& S1, const StraightGuide& guide,
                      const ScatteringMatrix& S3, double k) {
    if (guide.width <= 0.0 || guide.length < 0.0)
        throw ConfigError("cascade: invalid straight guide");
    check_width(S1.width_right, guide.width, "S1/guide");
    check_width(guide.width, S3.width_left, "guide/S3");
    const std::size_t N = S1.T_plus.rows();
    const CMatrix U =
        CMatrix::diagonal(propagator_U(guide.width, k, guide.length, N));

    const PlusResult fwd = combine_plus(S1, U, S3);
    const PlusResult bwd = combine_plus(S3.reversed(), U, S1.reversed());

    CascadeResult out;
    out.C_plus = fwd.C_plus;
    out.C_minus = fwd.C_minus;
    out.S_total.R_plus = fwd.R_tot;
    out.S_total.T_plus = fwd.T_tot;
    out.S_total.R_minus = bwd.R_tot;
    out.S_total.T_minus = bwd.T_tot;
    out.S_total.width_left = S1.width_left;
    out.S_total.width_right = S3.width_right;
    out.S_total.u1 = S1.u1;
    out.S_total.u2 = S3.u2;
    return out;
}

std::vector<Complex> connector_field(const CMatrix& C_plus, const CMatrix& C_minus,
                                     const StraightGuide& guide, double k, double u,
                                     std::span<const Complex> phi_in) {
    const std::size_t N = C_plus.rows();
    const auto Up = propagator_U(guide.width, k, u, N);
    const auto Um = propagator_U(guide.width, k, -u, N);
    const auto cp = C_plus.apply(phi_in);
    const auto cm = C_minus.apply(phi_in);
    std::vector<Complex> phi(N);
    for (std::size_t n = 0; n < N; ++n) phi[n] = Up[n] * cp[n] + Um[n] * cm[n];
    return phi;
}

ChainResult cascade_chain(std::span<const ScatteringMatrix> blocks,
                          std::span<const StraightGuide> guides, double k) {
    if (blocks.empty()) throw ConfigError("cascade_chain: no blocks");
    if (guides.size() + 1 != blocks.size())
        throw ConfigError("cascade_chain: need one guide between consecutive blocks");
    ChainResult out;
    if (blocks.size() == 1) {
        out.S_total = blocks[0];
        return out;
    }
    // left-fold partial cascades, then recover per-connector C's by re-combining
    // prefix and suffix totals around each guide
    std::vector<ScatteringMatrix> prefix(blocks.size());
    prefix[0] = blocks[0];
    for (std::size_t j = 1; j < blocks.size(); ++j)
        prefix[j] = combine(prefix[j - 1], guides[j - 1], blocks[j], k).S_total;
    std::vector<ScatteringMatrix> suffix(blocks.size());
    suffix[blocks.size() - 1] = blocks[blocks.size() - 1];
    for (std::size_t j = blocks.size() - 1; j-- > 0;)
        suffix[j] = combine(blocks[j], guides[j], suffix[j + 1], k).S_total;
    out.S_total = prefix[blocks.size() - 1];
    out.C_plus.reserve(guides.size());
    out.C_minus.reserve(guides.size());
    for (std::size_t j = 0; j < guides.size(); ++j) {
        const CascadeResult c = combine(prefix[j], guides[j], suffix[j + 1], k);
        out.C_plus.push_back(c.C_plus);
        out.C_minus.push_back(c.C_minus);
    }
    return out;
}

}  // namespace wavecascade
