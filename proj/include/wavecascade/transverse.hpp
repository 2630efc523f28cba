#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "wavecascade/geometry.hpp"
#include "wavecascade/numcore.hpp"

namespace wavecascade {

/// Transverse eigendata at one axial station.
struct TransverseBasis {
    double u = 0.0;
    std::vector<Complex> lambda;      // lambda_n, continuation-ordered (family index)
    std::vector<Complex> lambda_p;    // d lambda_n / du
    std::vector<Complex> lambda_pp;   // d^2 lambda_n / du^2
    std::vector<Complex> norms;       // <psi_n, psi_n>
};

/// N roots of lambda tan(lambda) = -i k Y, continuation-ordered. Newton on the
/// entire form lambda sin(lambda) + i k Y cos(lambda). For Y = 0 returns n pi
/// exactly. Throws RootCollision / NoConvergence.
std::vector<Complex> solve_lambda(Complex Y, double k, std::size_t N,
                                  const std::vector<Complex>* seed = nullptr);

/// (lambda', lambda'') per the differentiated eigenvalue equation.
/// Throws DegenerateQ when |Q| < 1e-10.
std::pair<Complex, Complex> lambda_derivatives(Complex lambda, Complex Yp,
                                               Complex Ypp, double k);

/// <psi_m, psi_m> = 1/2 + sin(2 lambda)/(4 lambda), with the lambda->0 limit 1.
Complex biorthogonal_norm(Complex lambda);

/// int_0^1 v sin(c v) dv  (series for small |c|)
Complex int_v_sin(Complex c);
/// int_0^1 v^2 cos(c v) dv
Complex int_v2_cos(Complex c);

/// Build the full basis at a station (lambda solve + derivatives + norms).
TransverseBasis make_basis(double u, Complex Y, Complex Yp, Complex Ypp, double k,
                           std::size_t N, const std::vector<Complex>* seed = nullptr);

/// Expansion coefficient matrices alpha_mn, beta_mn (closed forms).
std::pair<CMatrix, CMatrix> expand_coeffs(const TransverseBasis& basis);

/// mu_mn at station u. Uses the fast cosine transform when the basis is the
/// hard-wall family (lambda_n = n pi), adaptive quadrature otherwise.
CMatrix expand_mu(const TransverseBasis& basis, const ConformalMap& map, double u);

/// The two routes individually (kept for cross-checks).
CMatrix expand_mu_quadrature(const TransverseBasis& basis, const ConformalMap& map,
                             double u);
CMatrix expand_mu_fft(const TransverseBasis& basis, const ConformalMap& map, double u);

}  // namespace wavecascade
