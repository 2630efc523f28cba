#include "wavecascade/fd_oracle.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>

namespace wavecascade {

namespace {

constexpr double PI = 3.14159265358979323846;

using SpMat = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

struct Domain {
    std::span<const StripSegment> segs;
    std::vector<double> offsets;  // global start of each segment
    double total = 0.0;

    explicit Domain(std::span<const StripSegment> s) : segs(s) {
        offsets.reserve(s.size());
        for (const auto& seg : s) {
            offsets.push_back(total);
            total += seg.length;
        }
    }
    double mu(double u, double v) const {
        const auto [i, lu] = locate(u);
        return segs[i].mu(lu, v);
    }
    Complex Y(double u) const {
        const auto [i, lu] = locate(u);
        return segs[i].Y(lu);
    }

private:
    std::pair<std::size_t, double> locate(double u) const {
        for (std::size_t i = segs.size(); i-- > 0;) {
            if (u >= offsets[i] - 1e-12) {
                const double lu = std::clamp(u - offsets[i], 0.0, segs[i].length);
                return {i, lu};
            }
        }
        return {0, 0.0};
    }
};

}  // namespace

StripSegment segment_of_block(const ConformalBlock& block) {
    StripSegment s;
    s.length = block.u_right() - block.u_left();
    const double uL = block.u_left();
    s.mu = [&block, uL](double lu, double v) { return block.mu(uL + lu, v); };
    s.Y = [&block, uL](double lu) -> Complex {
        const Complex y = block.Y(uL + lu);
        return (std::abs(y) < 1e-13) ? Complex(0.0) : y;
    };
    return s;
}

StripSegment segment_of_guide(const StraightGuide& g) {
    StripSegment s;
    s.length = g.length / g.width;  // strip u-length for |F'| = width
    const double mu0 = g.width * g.width;
    s.mu = [mu0](double, double) { return mu0; };
    s.Y = [](double) { return Complex(0.0); };
    return s;
}

StripSegment reversed_segment(const StripSegment& s) {
    StripSegment r;
    r.length = s.length;
    const double L = s.length;
    const auto mu = s.mu;
    const auto Y = s.Y;
    r.mu = [mu, L](double lu, double v) { return mu(L - lu, v); };
    r.Y = [Y, L](double lu) { return Y(L - lu); };
    return r;
}

FDResult solve_reference_path(std::span<const StripSegment> segments, double k,
                              std::size_t incident_mode, std::size_t nu,
                              std::size_t nv) {
    if (nu < 16 || nv < 16)
        throw GridTooCoarse("fd_oracle: nu, nv must be at least 16");
    const Domain dom(segments);
    const double hu = dom.total / static_cast<double>(nu);
    const double hv = 1.0 / static_cast<double>(nv);

    // resolution invariant: max(h) * k * max sqrt(mu) < 0.5
    double mumax = 0.0;
    for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 8; ++j)
            mumax = std::max(mumax, dom.mu(dom.total * i / 40.0, j / 8.0));
    if (std::max(hu, hv) * k * std::sqrt(mumax) >= 0.5)
        throw GridTooCoarse("fd_oracle: grid does not resolve the wavelength");

    const std::size_t NU = nu + 1, NV = nv + 1;
    const std::size_t ndof = NU * NV;
    const auto idx = [NV](std::size_t i, std::size_t j) { return i * NV + j; };

    // axial wavenumbers in strip coordinates at the (straight, hard) ends
    const double gamL = std::sqrt(dom.mu(0.0, 0.5));
    const double gamR = std::sqrt(dom.mu(dom.total, 0.5));
    std::vector<Complex> abL(NV), abR(NV);
    for (std::size_t n = 0; n < NV; ++n) {
        const double np = static_cast<double>(n) * PI;
        const auto ab = [np, k](double gam) {
            const double t = (k * gam) * (k * gam) - np * np;
            return t >= 0.0 ? Complex(std::sqrt(t), 0.0)
                            : Complex(0.0, std::sqrt(-t));
        };
        abL[n] = ab(gamL);
        abR[n] = ab(gamR);
    }

    // trapezoid cosine projection/reconstruction on a column
    std::vector<double> P((NV) * (NV)), R((NV) * (NV));
    {
        std::vector<double> w(NV, hv);
        w.front() *= 0.5;
        w.back() *= 0.5;
        for (std::size_t n = 0; n < NV; ++n) {
            double dn = 0.0;
            for (std::size_t j = 0; j < NV; ++j) {
                const double c = std::cos(static_cast<double>(n) * PI * j * hv);
                R[j * NV + n] = c;
                dn += w[j] * c * c;
            }
            for (std::size_t j = 0; j < NV; ++j)
                P[n * NV + j] = w[j] * std::cos(static_cast<double>(n) * PI * j * hv) / dn;
        }
    }

    std::vector<Triplet> trip;
    trip.reserve(ndof * 6 + 4 * NV * NV);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ndof));

    const double ihu2 = 1.0 / (hu * hu);
    const double ihv2 = 1.0 / (hv * hv);
    const Complex iso(0.0, 1.0);

    for (std::size_t i = 0; i < NU; ++i) {
        const double u = hu * static_cast<double>(i);
        const Complex Yu = dom.Y(u);
        for (std::size_t j = 0; j < NV; ++j) {
            const auto r = static_cast<Eigen::Index>(idx(i, j));
            const double muv = dom.mu(u, hv * static_cast<double>(j));
            Complex diag = -2.0 * ihu2 - 2.0 * ihv2 + k * k * muv;
            if (j == 0) {
                trip.emplace_back(r, idx(i, 1), 2.0 * ihv2);
            } else if (j == nv) {
                trip.emplace_back(r, idx(i, nv - 1), 2.0 * ihv2);
                diag += 2.0 * hv * iso * k * Yu * ihv2;
            } else {
                trip.emplace_back(r, idx(i, j - 1), ihv2);
                trip.emplace_back(r, idx(i, j + 1), ihv2);
            }
            trip.emplace_back(r, r, diag);
            if (i > 0 && i < nu) {
                trip.emplace_back(r, idx(i - 1, j), ihu2);
                trip.emplace_back(r, idx(i + 1, j), ihu2);
            }
        }
    }

    // left modal radiation BC with incident mode:
    // ghost(-1) = col(1) + 2 hu [ R diag(i abL) P col(0) - 2 i abL a ]
    for (std::size_t j = 0; j < NV; ++j) {
        const auto r = static_cast<Eigen::Index>(idx(0, j));
        trip.emplace_back(r, idx(1, j), 2.0 * ihu2);
        for (std::size_t jj = 0; jj < NV; ++jj) {
            Complex m = 0.0;
            for (std::size_t n = 0; n < NV; ++n)
                m += R[j * NV + n] * (2.0 * hu * iso * abL[n]) * P[n * NV + jj];
            if (m != 0.0) trip.emplace_back(r, idx(0, jj), m * ihu2);
        }
        // source: -4 hu i abL[inc] * R[j, inc] folded to the RHS with its sign
        rhs[r] += 4.0 * hu * iso * abL[incident_mode] * R[j * NV + incident_mode] * ihu2;
    }
    // right modal radiation BC: ghost(nu+1) = col(nu-1) + 2 hu R diag(i abR) P col(nu)
    for (std::size_t j = 0; j < NV; ++j) {
        const auto r = static_cast<Eigen::Index>(idx(nu, j));
        trip.emplace_back(r, idx(nu - 1, j), 2.0 * ihu2);
        for (std::size_t jj = 0; jj < NV; ++jj) {
            Complex m = 0.0;
            for (std::size_t n = 0; n < NV; ++n)
                m += R[j * NV + n] * (2.0 * hu * iso * abR[n]) * P[n * NV + jj];
            if (m != 0.0) trip.emplace_back(r, idx(nu, jj), m * ihu2);
        }
    }

    SpMat A(static_cast<Eigen::Index>(ndof), static_cast<Eigen::Index>(ndof));
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    Eigen::SparseLU<SpMat> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
        throw SingularSystem("fd_oracle: sparse factorization failed (resonance?)");
    const Eigen::VectorXcd sol = lu.solve(rhs);

    FDResult res;
    res.nu = nu;
    res.nv = nv;
    res.field.assign(sol.data(), sol.data() + ndof);
    res.reflected.resize(NV);
    res.transmitted.resize(NV);
    for (std::size_t n = 0; n < NV; ++n) {
        Complex mL = 0.0, mR = 0.0;
        for (std::size_t j = 0; j < NV; ++j) {
            mL += P[n * NV + j] * res.at(0, j);
            mR += P[n * NV + j] * res.at(nu, j);
        }
        res.reflected[n] = mL - ((n == incident_mode) ? 1.0 : 0.0);
        res.transmitted[n] = mR;
    }
    return res;
}

FDResult solve_reference(const ConformalBlock& block, double k,
                         std::size_t incident_mode, const FDGrid& grid) {
    if (grid.nu < 16 || grid.nv < 16)
        throw GridTooCoarse("fd_oracle: nu, nv must be at least 16");
    const StripSegment seg = segment_of_block(block);
    return solve_reference_path(std::span(&seg, 1), k, incident_mode, grid.nu,
                                grid.nv);
}

}  // namespace wavecascade
