#pragma once

#include <array>
#include <variant>
#include <vector>

#include "wavecascade/numcore.hpp"

namespace wavecascade {

/// z = z0 + width * (w - u0): a straight guide of the given physical width.
struct StraightMap {
    double width = 1.0;
    double u0 = 0.0;
    Complex z0 = 0.0;
};

/// Approximate-curve-factor Schwarz-Christoffel map composed with exp(pi w).
/// F'(w) = pi A prod_k (sqrt((e + i b_k - w_k)^2 - c_k^2) - i b_k)^(alpha_k - 1),
/// e = exp(pi w); the sqrt branch is cut on the segment between the two roots.
struct ExpScMap {
    double A = 0.6 / 3.141592653589793;
    std::array<double, 4> alpha{};
    std::array<double, 4> b{};
    std::array<double, 4> c{};
    std::array<double, 4> w{};
    double w0 = 2.0;        // strip anchor point (on v = 0)
    Complex z0 = 0.0;       // image of the anchor
};

/// Outer-polygon map: F'(w) = A s (om-1)^(alpha-1) (om+1)^(1-alpha),
/// om = exp(s w) e^{i phi1} + a, s = phi2 - phi1.
struct OuterPolygonMap {
    Complex A = 1.0;
    double alpha = 1.75;
    double phi1 = 0.0;
    double phi2 = 0.0;
    double a = 0.0;
    double w0 = -7.0;       // strip anchor point (on v = 0)
    Complex z0 = 0.0;
};

struct MapDerivs {
    Complex d1, d2, d3;
};

class ConformalMap {
public:
    ConformalMap() : kind_(StraightMap{}) {}
    explicit ConformalMap(StraightMap m) : kind_(m) {}
    explicit ConformalMap(ExpScMap m) : kind_(m) {}
    explicit ConformalMap(OuterPolygonMap m) : kind_(m) {}

    /// F(w): numerical contour quadrature from the anchor (abs tol 1e-10).
    Complex point(Complex w) const;

    /// (F', F'', F''') in closed form.
    MapDerivs derivatives(Complex w) const;

    Complex derivative(Complex w) const { return derivatives(w).d1; }

    /// mu(u,v) = |F'(u+iv)|^2
    double metric_mu(double u, double v) const;

    /// physical cross-section width: |F(u+i) - F(u)|
    double width_at(double u) const;

    const std::variant<StraightMap, ExpScMap, OuterPolygonMap>& kind() const {
        return kind_;
    }

private:
    std::variant<StraightMap, ExpScMap, OuterPolygonMap> kind_;
};

struct AdmittanceSegment {
    double u0, u1, u2, u3;     // support start, plateau start, plateau end, support end
    Complex beta_peak;
};

/// beta(u): C^2 profile, exactly zero outside all segments.
class AdmittanceProfile {
public:
    AdmittanceProfile() = default;
    explicit AdmittanceProfile(std::vector<AdmittanceSegment> segs);

    Complex beta(double u) const;
    /// (beta, beta', beta'')
    std::array<Complex, 3> beta_derivs(double u) const;
    const std::vector<AdmittanceSegment>& segments() const { return segs_; }
    bool empty() const { return segs_.empty(); }

private:
    std::vector<AdmittanceSegment> segs_;
};

/// One waveguide section: map + admittance + u-range.
class ConformalBlock {
public:
    ConformalBlock(ConformalMap map, AdmittanceProfile admittance,
                   double u_left, double u_right);

    const ConformalMap& map() const { return map_; }
    const AdmittanceProfile& admittance() const { return adm_; }
    double u_left() const { return uL_; }
    double u_right() const { return uR_; }
    double width_left() const { return widthL_; }
    double width_right() const { return widthR_; }

    /// Y(u) = beta(u) |F'(u+i)| and its u-derivatives.
    std::array<Complex, 3> Y_derivs(double u) const;
    Complex Y(double u) const { return Y_derivs(u)[0]; }

    double mu(double u, double v) const { return map_.metric_mu(u, v); }

    /// relative variation of |F'(u+i)| over a unit interval at the block end
    double end_straightness(bool right) const;

private:
    ConformalMap map_;
    AdmittanceProfile adm_;
    double uL_, uR_;
    double widthL_, widthR_;
};

/// Connector: straight guide of physical width a and length ell >= 0.
struct StraightGuide {
    double width = 1.0;
    double length = 0.0;
};

}  // namespace wavecascade
