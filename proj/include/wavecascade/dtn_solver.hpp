#pragma once

#include <iosfwd>
#include <span>

#include "wavecascade/assembly.hpp"

namespace wavecascade {

/// DtN operators of a block, tabulated at the table stations; the dense
/// integrator skeletons are kept for accurate evaluation between stations.
struct DtNSolution {
    std::vector<double> u_grid;
    std::vector<CMatrix> LambdaR_tab, LambdaL_tab;
    OdeDenseSolution denseR, denseL;
    std::size_t N = 0;

    CMatrix lambdaR_at(double u) const;
    CMatrix lambdaL_at(double u) const;
};

struct DtnOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
};

/// Lambda_R right-to-left from B_+, Lambda_L left-to-right from B_-.
/// Retries once with a 10x smaller max step on StepFailure (stiff stations).
DtNSolution solve_dtn_operators(const CoefficientTable& table,
                                const DtnOptions& opts = {});

/// Block reflection seen from the left, derived from Lambda_R(u1):
/// R+ = (B_- + Lambda_R)^{-1} (B_- - Lambda_R).
CMatrix dtn_reflection_plus(const CoefficientTable& table, const DtNSolution& dtn);

/// Boundary value of the right-sourced component at u2 given its left-going
/// part q there: Phi_L(u2) = (Lambda_L(u2) + B_+)^{-1} (2 B_+ q).
std::vector<Complex> dtn_left_boundary_field(const CoefficientTable& table,
                                             const DtNSolution& dtn,
                                             std::span<const Complex> q);

/// Left-to-right propagation of Phi' = -Lambda_R Phi. phi_total_u1 must be the
/// full field vector at u1 (incident plus reflected). Returns Phi at the table
/// stations.
std::vector<std::vector<Complex>> propagate_field(const CoefficientTable& table,
                                                  const DtNSolution& dtn,
                                                  std::span<const Complex> phi_total_u1,
                                                  const DtnOptions& opts = {});

/// Right-to-left propagation of Phi_L' = Lambda_L Phi_L from its value at u2.
std::vector<std::vector<Complex>> propagate_field_left(
    const CoefficientTable& table, const DtNSolution& dtn,
    std::span<const Complex> phiL_u2, const DtnOptions& opts = {});

struct FieldSample {
    double u, v;
    Complex z;      // physical point
    Complex phi;
};
using FieldMap = std::vector<FieldSample>;

/// Phi(u,v) = sum_n Phi_n(u) cos(v lambda_n(u)) over the station grid.
FieldMap reconstruct_field(const std::vector<std::vector<Complex>>& phi_tab,
                           const CoefficientTable& table, const ConformalMap& map,
                           std::span<const double> v_grid);

/// CSV rows: u,v,x,y,re,im
void write_fieldmap_csv(const FieldMap& fm, std::ostream& os);

}  // namespace wavecascade
