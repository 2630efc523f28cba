#include "wavecascade/transverse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace wavecascade {

namespace {
constexpr double PI = 3.14159265358979323846;
}

std::vector<Complex> solve_lambda(Complex Y, double k, std::size_t N,
                                  const std::vector<Complex>* seed) {
    std::vector<Complex> lam(N);
    if (Y == 0.0) {
        for (std::size_t n = 0; n < N; ++n) lam[n] = static_cast<double>(n) * PI;
        return lam;
    }
    const Complex tgt = Complex(0.0, -k) * Y;   // lambda^2 target for small lambda
    if (seed && seed->size() == N) {
        lam = *seed;
    } else if (std::abs(tgt) > 1.5) {
        // cold start far from the hard-wall family: continue in Y from zero,
        // refining the path when the families move too fast between steps
        int steps = static_cast<int>(std::ceil(std::abs(tgt) / 0.5));
        for (int attempt = 0;; ++attempt) {
            try {
                std::vector<Complex> cur =
                    solve_lambda(Y / static_cast<double>(steps), k, N, nullptr);
                for (int j = 2; j <= steps; ++j)
                    cur = solve_lambda(Y * (static_cast<double>(j) / steps), k, N,
                                       &cur);
                return cur;
            } catch (const SolverError&) {
                if (attempt >= 5) throw;
                steps *= 4;
            }
        }
    } else {
        for (std::size_t n = 0; n < N; ++n) lam[n] = static_cast<double>(n) * PI;
    }
    // the n = 0 family passes through 0 where Newton's derivative vanishes;
    // reseed it from the small-lambda asymptote whenever the seed is tiny
    if (std::abs(lam[0]) < 0.2) lam[0] = std::sqrt(tgt);
    for (std::size_t n = 1; n < N; ++n) {
        const double npi = static_cast<double>(n) * PI;
        if (std::abs(lam[n] - npi) < 1e-12) lam[n] = npi + tgt / npi;
    }

    const Complex ikY = Complex(0.0, k) * Y;
    for (std::size_t n = 0; n < N; ++n) {
        Complex x = lam[n];
        bool done = false;
        for (int it = 0; it < 50; ++it) {
            const Complex s = std::sin(x), c = std::cos(x);
            const Complex g = x * s + ikY * c;
            const Complex gp = s + x * c - ikY * s;
            if (std::abs(gp) < 1e-14) {
                x += 1e-7;
                continue;
            }
            const Complex dx = g / gp;
            x -= dx;
            if (std::abs(dx) <= 1e-14 * std::max(1.0, std::abs(x))) {
                done = true;
                break;
            }
        }
        const double resid = std::abs(x * std::tan(x) + ikY);
        if (!done && !(resid < 1e-10 * std::max(1.0, std::norm(x))))
            throw NoConvergence("solve_lambda: Newton stalled at family " +
                                std::to_string(n));
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()) ||
            resid > 1e-10 * std::max(1.0, std::norm(x)))
            throw NoConvergence("solve_lambda: residual " + std::to_string(resid) +
                                " at family " + std::to_string(n));
        lam[n] = x;
    }
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            if (std::abs(lam[i] - lam[j]) < 1e-8)
                throw RootCollision("solve_lambda: families " + std::to_string(i) +
                                    " and " + std::to_string(j) + " collided");
    return lam;
}

std::pair<Complex, Complex> lambda_derivatives(Complex lambda, Complex Yp,
                                               Complex Ypp, double k) {
    if (Yp == 0.0 && Ypp == 0.0) return {0.0, 0.0};
    const Complex t = std::tan(lambda);
    const Complex Q = t + lambda * (1.0 + t * t);
    if (std::abs(Q) < 1e-10)
        throw DegenerateQ("lambda_derivatives: |Q| = " + std::to_string(std::abs(Q)));
    const Complex mik = Complex(0.0, -k);
    const Complex lp = mik * Yp / Q;
    const Complex Qlam = (1.0 + t * t) * (2.0 + 2.0 * lambda * t);
    const Complex lpp = (mik * Ypp - lp * Qlam * lp) / Q;
    return {lp, lpp};
}

Complex biorthogonal_norm(Complex lambda) {
    if (std::abs(lambda) < 0.05) {
        const Complex l2 = lambda * lambda;
        // 1/2 + sin(2l)/(4l) = 1 - l^2/3 + 2 l^4/15 - 4 l^6/315 + ...
        return 1.0 - l2 / 3.0 + 2.0 * l2 * l2 / 15.0 - 4.0 * l2 * l2 * l2 / 315.0;
    }
    return 0.5 + std::sin(2.0 * lambda) / (4.0 * lambda);
}

Complex int_v_sin(Complex c) {
    if (std::abs(c) < 0.1) {
        // sum_j (-1)^j c^{2j+1} / ((2j+3)(2j+1)!)
        Complex acc = 0.0, term = c;
        double fact = 1.0;
        for (int j = 0; j < 10; ++j) {
            acc += term / ((2.0 * j + 3.0) * fact);
            term *= -c * c;
            fact *= (2.0 * j + 2.0) * (2.0 * j + 3.0);
        }
        return acc;
    }
    return std::sin(c) / (c * c) - std::cos(c) / c;
}

Complex int_v2_cos(Complex c) {
    if (std::abs(c) < 0.1) {
        // sum_j (-1)^j c^{2j} / ((2j+3)(2j)!)
        Complex acc = 0.0, term = 1.0;
        double fact = 1.0;
        for (int j = 0; j < 10; ++j) {
            acc += term / ((2.0 * j + 3.0) * fact);
            term *= -c * c;
            fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
        }
        return acc;
    }
    return 2.0 * std::cos(c) / (c * c) + (1.0 / c - 2.0 / (c * c * c)) * std::sin(c);
}

TransverseBasis make_basis(double u, Complex Y, Complex Yp, Complex Ypp, double k,
                           std::size_t N, const std::vector<Complex>* seed) {
    TransverseBasis b;
    b.u = u;
    b.lambda = solve_lambda(Y, k, N, seed);
    b.lambda_p.resize(N);
    b.lambda_pp.resize(N);
    b.norms.resize(N);
    for (std::size_t n = 0; n < N; ++n) {
        if (Y == 0.0) {
            b.lambda_p[n] = 0.0;
            b.lambda_pp[n] = 0.0;
        } else {
            const auto [lp, lpp] = lambda_derivatives(b.lambda[n], Yp, Ypp, k);
            b.lambda_p[n] = lp;
            b.lambda_pp[n] = lpp;
        }
        b.norms[n] = biorthogonal_norm(b.lambda[n]);
    }
    return b;
}

std::pair<CMatrix, CMatrix> expand_coeffs(const TransverseBasis& basis) {
    const std::size_t N = basis.lambda.size();
    CMatrix alpha(N, N), beta(N, N);
    for (std::size_t m = 0; m < N; ++m) {
        const Complex lm = basis.lambda[m];
        const Complex inv2n = 0.5 / basis.norms[m];
        for (std::size_t n = 0; n < N; ++n) {
            const Complex ln = basis.lambda[n];
            alpha(m, n) = (int_v_sin(ln + lm) + int_v_sin(ln - lm)) * inv2n;
            beta(m, n) = (int_v2_cos(ln + lm) + int_v2_cos(ln - lm)) * inv2n;
        }
    }
    return {alpha, beta};
}

namespace {

struct GaussRule {
    std::vector<double> x, w;  // on [0, 1]
};

GaussRule legendre_rule(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton from the Chebyshev-like initial guess
        double t = std::cos(PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / pp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        r.x[i] = 0.5 * (1.0 - t);  // reversed order is irrelevant
        r.w[i] = 1.0 / ((1.0 - t * t) * pp * pp);
    }
    return r;
}

const GaussRule& cached_rule(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, legendre_rule(n)).first;
    return it->second;
}

CMatrix mu_by_rule(const TransverseBasis& basis, const ConformalMap& map, double u,
                   const GaussRule& rule) {
    const std::size_t N = basis.lambda.size();
    const std::size_t Q = rule.x.size();
    std::vector<double> muv(Q);
    for (std::size_t q = 0; q < Q; ++q) muv[q] = map.metric_mu(u, rule.x[q]);
    // cos table [n][q]
    std::vector<Complex> ct(N * Q);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t q = 0; q < Q; ++q)
            ct[n * Q + q] = std::cos(basis.lambda[n] * rule.x[q]);
    CMatrix mu(N, N);
    for (std::size_t m = 0; m < N; ++m) {
        const Complex invn = 1.0 / basis.norms[m];
        for (std::size_t n = m; n < N; ++n) {
            Complex s = 0.0;
            for (std::size_t q = 0; q < Q; ++q)
                s += rule.w[q] * muv[q] * ct[m * Q + q] * ct[n * Q + q];
            mu(m, n) = s * invn;
            if (n != m) mu(n, m) = s / basis.norms[n];
        }
    }
    return mu;
}

bool is_hard_wall(const TransverseBasis& basis) {
    for (std::size_t n = 0; n < basis.lambda.size(); ++n) {
        if (std::abs(basis.lambda[n] - static_cast<double>(n) * PI) > 1e-12)
            return false;
    }
    return true;
}

void fft_radix2(std::vector<Complex>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * PI / static_cast<double>(len) * (inverse ? 1 : -1);
        const Complex wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w = 1.0;
            for (std::size_t j = 0; j < len / 2; ++j) {
                const Complex x = a[i + j];
                const Complex y = a[i + j + len / 2] * w;
                a[i + j] = x + y;
                a[i + j + len / 2] = x - y;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& v : a) v /= static_cast<double>(n);
}

}  // namespace

CMatrix expand_mu_quadrature(const TransverseBasis& basis, const ConformalMap& map,
                             double u) {
    const int N = static_cast<int>(basis.lambda.size());
    int n0 = std::max(64, 4 * N + 16);
    CMatrix prev = mu_by_rule(basis, map, u, cached_rule(n0));
    for (int round = 0; round < 5; ++round) {
        const int n1 = n0 + n0 / 2;
        CMatrix next = mu_by_rule(basis, map, u, cached_rule(n1));
        CMatrix diff = next;
        diff -= prev;
        if (diff.max_abs() < 1e-10) return next;
        prev = std::move(next);
        n0 = n1;
    }
    throw QuadratureFailure("expand_mu: quadrature failed to settle at u = " +
                            std::to_string(u));
}

CMatrix expand_mu_fft(const TransverseBasis& basis, const ConformalMap& map,
                      double u) {
    const std::size_t N = basis.lambda.size();
    // sample mu on M+1 points, M a power of two >= 4N and >= 256
    std::size_t M = 256;
    while (M < 4 * N) M <<= 1;
    std::vector<double> s(M + 1);
    for (std::size_t i = 0; i <= M; ++i)
        s[i] = map.metric_mu(u, static_cast<double>(i) / static_cast<double>(M));
    // even extension, complex FFT of length 2M -> cosine coefficients
    std::vector<Complex> ext(2 * M);
    for (std::size_t i = 0; i <= M; ++i) ext[i] = s[i];
    for (std::size_t i = 1; i < M; ++i) ext[2 * M - i] = s[i];
    fft_radix2(ext, false);
    // chat_j = int_0^1 mu cos(j pi v) dv. The trapezoid/DCT value carries an
    // O(h^2) Euler-Maclaurin defect from the non-periodic ends; correct it with
    // the analytic boundary slopes d mu/dv = -2 Im(F'' conj F').
    const auto mu_v = [&map, u](double v) {
        const MapDerivs d = map.derivatives(Complex(u, v));
        return -2.0 * (d.d2 * std::conj(d.d1)).imag();
    };
    const double mup0 = mu_v(0.0);
    const double mup1 = mu_v(1.0);
    const double h2_12 = 1.0 / (12.0 * static_cast<double>(M) * M);
    std::vector<double> chat(2 * N);
    for (std::size_t j = 0; j < 2 * N; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        chat[j] = ext[j].real() / (2.0 * static_cast<double>(M)) -
                  h2_12 * (sign * mup1 - mup0);
    }
    CMatrix mu(N, N);
    for (std::size_t m = 0; m < N; ++m) {
        const Complex invn = 1.0 / basis.norms[m];
        for (std::size_t n = 0; n < N; ++n) {
            const std::size_t p = m + n;
            const std::size_t q = (m > n) ? m - n : n - m;
            mu(m, n) = 0.5 * (chat[p] + chat[q]) * invn;
        }
    }
    return mu;
}

CMatrix expand_mu(const TransverseBasis& basis, const ConformalMap& map, double u) {
    if (is_hard_wall(basis)) return expand_mu_fft(basis, map, u);
    return expand_mu_quadrature(basis, map, u);
}

}  // namespace wavecascade
