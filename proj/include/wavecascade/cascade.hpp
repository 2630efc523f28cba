#pragma once

#include <span>

#include "wavecascade/geometry.hpp"
#include "wavecascade/rt_solver.hpp"

namespace wavecascade {

/// Axial wavenumber of mode n in a hard straight guide of width a:
/// sqrt(k^2 - (n pi/a)^2), or i sqrt((n pi/a)^2 - k^2) past cut-off.
Complex axial_wavenumber(double a, double k, std::size_t n);

/// Entries of the diagonal straight-guide propagator exp(i alpha_n ell).
std::vector<Complex> propagator_U(double a, double k, double ell, std::size_t N);

struct CascadeResult {
    ScatteringMatrix S_total;
    CMatrix C_plus, C_minus;   // interface coefficients at the guide's left end
};

/// Building-block composition of S1 -- straight guide -- S3. Widths must agree
/// within 1e-3 relative. The minus-direction total matrices come from composing
/// the mirrored configuration.
CascadeResult combine(const ScatteringMatrix& S1, const StraightGuide& guide,
                      const ScatteringMatrix& S3, double k);

/// Field in the connector at distance u from its left end:
/// (U_a(u) C+ + U_a(-u) C-) phi_in.
std::vector<Complex> connector_field(const CMatrix& C_plus, const CMatrix& C_minus,
                                     const StraightGuide& guide, double k, double u,
                                     std::span<const Complex> phi_in);

/// Multi-element chain: blocks S_0..S_{m-1} joined by guides g_0..g_{m-2}.
/// Returns the total scattering matrix plus the C+- pair at every connector.
struct ChainResult {
    ScatteringMatrix S_total;
    std::vector<CMatrix> C_plus, C_minus;   // one pair per connector
};
ChainResult cascade_chain(std::span<const ScatteringMatrix> blocks,
                          std::span<const StraightGuide> guides, double k);

}  // namespace wavecascade
