#include "wavecascade/numcore.hpp"

#include <algorithm>
#include <cmath>

namespace wavecascade {

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
    for (auto& v : a_) v *= s;
    return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    CMatrix c(a.rows_, b.cols_);
    const std::size_t n = a.rows_, m = b.cols_, p = a.cols_;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < p; ++k) {
            const Complex aik = a.a_[i * p + k];
            if (aik == 0.0) continue;
            const Complex* brow = &b.a_[k * m];
            Complex* crow = &c.a_[i * m];
            for (std::size_t j = 0; j < m; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

std::vector<Complex> CMatrix::apply(std::span<const Complex> x) const {
    std::vector<Complex> y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        Complex s = 0.0;
        const Complex* row = &a_[i * cols_];
        for (std::size_t j = 0; j < cols_; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

double CMatrix::norm_inf() const {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += std::abs(a_[i * cols_ + j]);
        best = std::max(best, s);
    }
    return best;
}

double CMatrix::max_abs() const {
    double best = 0.0;
    for (const auto& v : a_) best = std::max(best, std::abs(v));
    return best;
}

void CMatrix::flatten_to(Complex* out) const {
    std::size_t k = 0;
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t i = 0; i < rows_; ++i) out[k++] = a_[i * cols_ + j];
}

void CMatrix::unflatten_from(const Complex* in) {
    std::size_t k = 0;
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t i = 0; i < rows_; ++i) a_[i * cols_ + j] = in[k++];
}

CMatrix mat_solve(const CMatrix& A, const CMatrix& B) {
    const std::size_t n = A.rows();
    if (n != A.cols() || B.rows() != n)
        throw SingularMatrix("mat_solve: shape mismatch");
    CMatrix lu = A;
    CMatrix x = B;
    const std::size_t m = B.cols();
    const double pivot_floor = 1e-13 * std::max(A.norm_inf(), 1e-300);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(lu(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(lu(r, col));
            if (v > best) { best = v; piv = r; }
        }
        if (best < pivot_floor)
            throw SingularMatrix("mat_solve: pivot " + std::to_string(best) +
                                 " below threshold");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(col, j), lu(piv, j));
            for (std::size_t j = 0; j < m; ++j) std::swap(x(col, j), x(piv, j));
        }
        const Complex d = lu(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const Complex f = lu(r, col) / d;
            if (f == 0.0) continue;
            lu(r, col) = f;
            for (std::size_t j = col + 1; j < n; ++j) lu(r, j) -= f * lu(col, j);
            for (std::size_t j = 0; j < m; ++j) x(r, j) -= f * x(col, j);
        }
    }
    // back substitution
    for (std::size_t col = n; col-- > 0;) {
        const Complex d = lu(col, col);
        for (std::size_t j = 0; j < m; ++j) x(col, j) /= d;
        for (std::size_t r = 0; r < col; ++r) {
            const Complex f = lu(r, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) x(r, j) -= f * x(col, j);
        }
    }
    return x;
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
// embedded 4th-order error weights (b - b*)
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;
// dense-output coefficients (Hairer's CONTD5)
constexpr double D1 = -12715105075.0 / 11282082432.0;
constexpr double D3 = 87487479700.0 / 32700410799.0;
constexpr double D4 = -10690763975.0 / 1880347072.0;
constexpr double D5 = 701980252875.0 / 199316789632.0;
constexpr double D6 = -1453857185.0 / 822651844.0;
constexpr double D7 = 69997945.0 / 29380423.0;

}  // namespace

OdeDenseSolution integrate_dense(const OdeProblem& prob) {
    if (prob.u_start == prob.u_end)
        throw StepFailure("integrate: span endpoints coincide");
    if (prob.rel_tol <= 0 || prob.abs_tol <= 0)
        throw StepFailure("integrate: tolerances must be positive");
    const std::size_t n = prob.size;
    const double dir = (prob.u_end > prob.u_start) ? 1.0 : -1.0;
    const double span = std::abs(prob.u_end - prob.u_start);
    const double hmax = (prob.max_step > 0) ? std::min(prob.max_step, span) : span;

    OdeDenseSolution sol;
    sol.n_ = n;
    sol.u0_ = prob.u_start;
    sol.u1_ = prob.u_end;

    std::vector<Complex> y = prob.initial;
    std::vector<Complex> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), y1(n);
    double u = prob.u_start;
    double h = dir * std::min(hmax, span / 16.0);
    prob.rhs(u, y.data(), k1.data());

    const std::size_t max_steps = 4'000'000;
    const double landing_eps = 1e-13 * std::max(1.0, span);
    for (std::size_t step = 0; step < max_steps; ++step) {
        const double remaining = prob.u_end - u;
        if (remaining * dir <= landing_eps) {
            u = prob.u_end;
            break;
        }
        if (std::abs(h) < 1e-12)
            throw StepFailure("integrate: step size underflow at u = " +
                              std::to_string(u));
        if (std::abs(h) > hmax) h = dir * hmax;
        if (std::abs(h) >= std::abs(remaining)) h = remaining;  // landing step

        for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * A21 * k1[i];
        prob.rhs(u + C2 * h, yt.data(), k2.data());
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        prob.rhs(u + C3 * h, yt.data(), k3.data());
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        prob.rhs(u + C4 * h, yt.data(), k4.data());
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        prob.rhs(u + C5 * h, yt.data(), k5.data());
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] +
                                A64 * k4[i] + A65 * k5[i]);
        prob.rhs(u + h, yt.data(), k6.data());
        for (std::size_t i = 0; i < n; ++i)
            y1[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] +
                                B5 * k5[i] + B6 * k6[i]);
        prob.rhs(u + h, y1.data(), k7.data());

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Complex e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] +
                                   E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            const double sc = prob.abs_tol +
                prob.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
            const double r = std::abs(e) / sc;
            err += r * r;
        }
        err = std::sqrt(err / static_cast<double>(n));

        if (err <= 1.0 || !std::isfinite(err)) {
            if (!std::isfinite(err))
                throw StepFailure("integrate: non-finite state at u = " +
                                  std::to_string(u));
            OdeDenseSolution::Step st;
            st.u = u;
            st.h = h;
            st.r1 = y;
            st.r2.resize(n);
            st.r3.resize(n);
            st.r4.resize(n);
            st.r5.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const Complex ydiff = y1[i] - y[i];
                const Complex bspl = h * k1[i] - ydiff;
                st.r2[i] = ydiff;
                st.r3[i] = bspl;
                st.r4[i] = ydiff - h * k7[i] - bspl;
                st.r5[i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] +
                                D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            sol.steps_.push_back(std::move(st));
            u += h;
            y.swap(y1);
            k1.swap(k7);
            const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2),
                                          0.2, 5.0);
            h *= fac;
        } else {
            const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
            h *= fac;
        }
    }
    if ((u - prob.u_end) * dir < 0.0)
        throw NoConvergence("integrate: max step count exceeded");
    sol.final_ = std::move(y);
    return sol;
}

void OdeDenseSolution::eval(double u, Complex* out) const {
    // locate the step containing u (steps are monotone in u)
    const bool fwd = u1_ > u0_;
    std::size_t lo = 0, hi = steps_.size();
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (fwd ? (steps_[mid].u <= u) : (steps_[mid].u >= u)) lo = mid;
        else hi = mid;
    }
    const Step& st = steps_[lo];
    double th = (u - st.u) / st.h;
    th = std::clamp(th, 0.0, 1.0);
    const double th1 = 1.0 - th;
    for (std::size_t i = 0; i < n_; ++i)
        out[i] = st.r1[i] + th * (st.r2[i] + th1 * (st.r3[i] +
                  th * (st.r4[i] + th1 * st.r5[i])));
}

std::vector<Complex> OdeDenseSolution::eval(double u) const {
    std::vector<Complex> out(n_);
    eval(u, out.data());
    return out;
}

OdeTrajectory integrate(const OdeProblem& prob, std::span<const double> stations) {
    const OdeDenseSolution sol = integrate_dense(prob);
    OdeTrajectory traj;
    traj.stations.assign(stations.begin(), stations.end());
    traj.states.reserve(stations.size());
    for (const double s : stations) traj.states.push_back(sol.eval(s));
    return traj;
}

}  // namespace wavecascade
