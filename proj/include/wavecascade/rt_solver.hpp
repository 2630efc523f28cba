#pragma once

#include <iosfwd>

#include "wavecascade/assembly.hpp"

namespace wavecascade {

/// Truncated reflection/transmission matrices of one block.
struct ScatteringMatrix {
    CMatrix R_plus, R_minus, T_plus, T_minus;
    double u1 = 0.0, u2 = 0.0;          // reference planes
    double width_left = 0.0, width_right = 0.0;

    static ScatteringMatrix identity(std::size_t N, double width);
    /// swap propagation directions (the block seen from the other side)
    ScatteringMatrix reversed() const;
};

struct RtOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
};

/// R+/T+ by right-to-left integration of the Riccati pair, R-/T- left-to-right.
ScatteringMatrix solve_rt(const CoefficientTable& table, const RtOptions& opts = {});

/// CSV rows: matrix,m,n,re,im
void write_smatrix_csv(const ScatteringMatrix& S, std::ostream& os);

}  // namespace wavecascade
