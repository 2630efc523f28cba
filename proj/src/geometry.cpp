#include "wavecascade/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace wavecascade {

namespace {

constexpr double PI = 3.14159265358979323846;

// sqrt(zeta^2 - c^2) with the branch cut on the segment [-c, c]; ~ zeta at infinity
inline Complex two_cut_sqrt(Complex zeta, double c) {
    const Complex r = c / zeta;
    return zeta * std::sqrt(1.0 - r * r);
}

// keep the curve-factor argument on the upper side of the power cut
inline Complex cut_guard(Complex s) {
    if (s.imag() < 0.0 && s.imag() > -1e-11) return {s.real(), 0.0};
    return s;
}

struct ExpScEval {
    Complex d1, G, Gp;  // F' and logarithmic-derivative pieces
};

ExpScEval eval_expsc(const ExpScMap& m, Complex w) {
    const Complex e = std::exp(PI * w);
    Complex prod = 1.0;
    Complex G = 0.0, Gp = 0.0;
    for (int k = 0; k < 4; ++k) {
        const Complex zeta = e + Complex(0.0, m.b[k]) - m.w[k];
        const Complex h = two_cut_sqrt(zeta, m.c[k]);
        const Complex s = cut_guard(h - Complex(0.0, m.b[k]));
        prod *= std::pow(s, m.alpha[k] - 1.0);
        const Complex hs = h * s;
        const Complex g = e * zeta / hs;
        // d/dw [e zeta / (h s)] with h' = (zeta/h) pi e and s' = h'
        const Complex gp =
            PI * e * ((zeta + e) / hs - e * zeta * zeta * (s + h) / (h * h * hs * s));
        G += (m.alpha[k] - 1.0) * PI * g;
        Gp += (m.alpha[k] - 1.0) * PI * gp;
    }
    return {PI * m.A * prod, G, Gp};
}

struct OutPolEval {
    Complex d1, G, Gp;
};

OutPolEval eval_outpol(const OuterPolygonMap& m, Complex w) {
    const double sig = m.phi2 - m.phi1;
    const Complex E = std::exp(sig * w) * std::exp(Complex(0.0, m.phi1));
    const Complex om = E + m.a;
    const Complex am1 = m.alpha - 1.0;
    const Complex d1 = m.A * sig * std::pow(om - 1.0, m.alpha - 1.0) *
                       std::pow(om + 1.0, 1.0 - m.alpha);
    const Complex p = 1.0 / (om - 1.0) - 1.0 / (om + 1.0);
    const Complex q = 1.0 / ((om - 1.0) * (om - 1.0)) -
                      1.0 / ((om + 1.0) * (om + 1.0));
    const Complex G = am1 * sig * E * p;
    const Complex Gp = am1 * sig * sig * E * (p - E * q);
    return {d1, G, Gp};
}

}  // namespace

MapDerivs ConformalMap::derivatives(Complex w) const {
    if (const auto* s = std::get_if<StraightMap>(&kind_))
        return {Complex(s->width, 0.0), 0.0, 0.0};
    if (const auto* m = std::get_if<ExpScMap>(&kind_)) {
        const ExpScEval e = eval_expsc(*m, w);
        return {e.d1, e.d1 * e.G, e.d1 * (e.G * e.G + e.Gp)};
    }
    const auto& m = std::get<OuterPolygonMap>(kind_);
    const OutPolEval e = eval_outpol(m, w);
    return {e.d1, e.d1 * e.G, e.d1 * (e.G * e.G + e.Gp)};
}

namespace {

// Gauss-Kronrod 7-15 on [-1, 1]
constexpr double KX[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813};
constexpr double KW[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double GW[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct Gk15 {
    Complex integral;
    double err;
};

template <typename F>
Gk15 gk15(const F& f, Complex a, Complex b) {
    const Complex mid = 0.5 * (a + b);
    const Complex half = 0.5 * (b - a);
    Complex sk = 0.0, sg = 0.0;
    for (int i = 0; i < 15; ++i) {
        const Complex v = f(mid + half * KX[i]);
        sk += KW[i] * v;
        if (i % 2 == 1) sg += GW[i / 2] * v;
    }
    sk *= half;
    sg *= half;
    return {sk, std::abs(sk - sg)};
}

// adaptive bisection, absolute tolerance 1e-10
template <typename F>
Complex integrate_contour(const F& f, Complex a, Complex b) {
    struct Piece { Complex a, b; int depth; };
    std::vector<Piece> stack{{a, b, 0}};
    Complex total = 0.0;
    const double tol = 1e-10;
    while (!stack.empty()) {
        const Piece p = stack.back();
        stack.pop_back();
        const Gk15 r = gk15(f, p.a, p.b);
        if (r.err < tol * std::max(1.0, std::abs(p.b - p.a)) || r.err < 1e-16) {
            total += r.integral;
        } else {
            if (p.depth > 40)
                throw QuadratureFailure("conformal map quadrature: depth limit");
            const Complex mid = 0.5 * (p.a + p.b);
            stack.push_back({p.a, mid, p.depth + 1});
            stack.push_back({mid, p.b, p.depth + 1});
        }
    }
    return total;
}

}  // namespace

Complex ConformalMap::point(Complex w) const {
    if (const auto* s = std::get_if<StraightMap>(&kind_))
        return s->z0 + s->width * (w - s->u0);
    Complex anchor_w, anchor_z;
    if (const auto* e = std::get_if<ExpScMap>(&kind_)) {
        anchor_w = e->w0;
        anchor_z = e->z0;
    } else {
        const auto& o = std::get<OuterPolygonMap>(kind_);
        anchor_w = o.w0;
        anchor_z = o.z0;
    }
    auto f = [this](Complex z) { return derivatives(z).d1; };
    return anchor_z + integrate_contour(f, anchor_w, w);
}

double ConformalMap::metric_mu(double u, double v) const {
    const Complex d = derivatives(Complex(u, v)).d1;
    return std::norm(d);
}

double ConformalMap::width_at(double u) const {
    return std::abs(point(Complex(u, 1.0)) - point(Complex(u, 0.0)));
}

AdmittanceProfile::AdmittanceProfile(std::vector<AdmittanceSegment> segs)
    : segs_(std::move(segs)) {
    std::sort(segs_.begin(), segs_.end(),
              [](const auto& a, const auto& b) { return a.u0 < b.u0; });
}

namespace {

// C^2 ramp 10t^3 - 15t^4 + 6t^5 with zero first and second derivatives at both ends
inline void smootherstep(double t, double& s, double& sp, double& spp) {
    s = t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
    sp = 30.0 * t * t * (1.0 - t) * (1.0 - t);
    spp = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
}

}  // namespace

std::array<Complex, 3> AdmittanceProfile::beta_derivs(double u) const {
    for (const auto& s : segs_) {
        if (u <= s.u0 || u >= s.u3) continue;
        if (u < s.u1) {
            const double L = s.u1 - s.u0;
            double f, fp, fpp;
            smootherstep((u - s.u0) / L, f, fp, fpp);
            return {s.beta_peak * f, s.beta_peak * fp / L, s.beta_peak * fpp / (L * L)};
        }
        if (u <= s.u2) return {s.beta_peak, 0.0, 0.0};
        const double L = s.u3 - s.u2;
        double f, fp, fpp;
        smootherstep((s.u3 - u) / L, f, fp, fpp);
        return {s.beta_peak * f, -s.beta_peak * fp / L, s.beta_peak * fpp / (L * L)};
    }
    return {0.0, 0.0, 0.0};
}

Complex AdmittanceProfile::beta(double u) const { return beta_derivs(u)[0]; }

ConformalBlock::ConformalBlock(ConformalMap map, AdmittanceProfile admittance,
                               double u_left, double u_right)
    : map_(std::move(map)), adm_(std::move(admittance)), uL_(u_left), uR_(u_right) {
    widthL_ = map_.width_at(uL_);
    widthR_ = map_.width_at(uR_);
}

std::array<Complex, 3> ConformalBlock::Y_derivs(double u) const {
    const auto [b, bp, bpp] = adm_.beta_derivs(u);
    if (b == 0.0 && bp == 0.0 && bpp == 0.0) return {0.0, 0.0, 0.0};
    const MapDerivs d = map_.derivatives(Complex(u, 1.0));
    const double mabs = std::abs(d.d1);
    const double re21 = (d.d2 * std::conj(d.d1)).real();
    const double m1 = re21 / mabs;
    const double m2 = ((d.d3 * std::conj(d.d1)).real() + std::norm(d.d2)) / mabs -
                      m1 * m1 / mabs;
    return {b * mabs, bp * mabs + b * m1, bpp * mabs + 2.0 * bp * m1 + b * m2};
}

double ConformalBlock::end_straightness(bool right) const {
    const double u = right ? uR_ : uL_;
    const double sgn = right ? -1.0 : 1.0;  // probe one unit into the block
    const double m0 = std::abs(map_.derivatives(Complex(u, 1.0)).d1);
    double dev = 0.0;
    for (int i = 1; i <= 4; ++i) {
        const double m = std::abs(map_.derivatives(Complex(u + sgn * 0.25 * i, 1.0)).d1);
        dev = std::max(dev, std::abs(m - m0) / m0);
    }
    return dev;
}

}  // namespace wavecascade
