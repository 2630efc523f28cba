#pragma once

#include <functional>
#include <span>

#include "wavecascade/geometry.hpp"
#include "wavecascade/numcore.hpp"

namespace wavecascade {

struct FDGrid {
    double u0 = 0.0, u1 = 0.0;
    std::size_t nu = 16, nv = 16;
    double h_u() const { return (u1 - u0) / static_cast<double>(nu); }
    double h_v() const { return 1.0 / static_cast<double>(nv); }
};

/// One glued piece of the strip domain (local u in [0, length]).
struct StripSegment {
    double length = 0.0;
    std::function<double(double, double)> mu;   // mu(u_local, v)
    std::function<Complex(double)> Y;           // Y(u_local)
};

struct FDResult {
    std::size_t nu = 0, nv = 0;
    std::vector<Complex> field;                 // (nu+1) x (nv+1), row = u column
    std::vector<Complex> reflected;             // modal amplitudes at the left end
    std::vector<Complex> transmitted;           // modal amplitudes at the right end
    Complex at(std::size_t i, std::size_t j) const { return field[i * (nv + 1) + j]; }
};

/// Second-order FD reference for the transformed problem on one block.
FDResult solve_reference(const ConformalBlock& block, double k,
                         std::size_t incident_mode, const FDGrid& grid);

/// Same solver over a glued multi-segment strip (blocks + straight connectors).
FDResult solve_reference_path(std::span<const StripSegment> segments, double k,
                              std::size_t incident_mode, std::size_t nu,
                              std::size_t nv);

/// Segment adapters.
StripSegment segment_of_block(const ConformalBlock& block);
StripSegment segment_of_guide(const StraightGuide& guide);
StripSegment reversed_segment(const StripSegment& s);

}  // namespace wavecascade
