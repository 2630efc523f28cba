#pragma once

#include <span>

#include "wavecascade/rt_solver.hpp"

namespace wavecascade {

/// Modal power a(1+delta_n0)/(2k) |A_n|^2 sqrt(k^2-(n pi/a)^2); zero past cut-off.
double modal_power(Complex amplitude, std::size_t n, double a, double k);

struct PowerReport {
    double k = 0.0;
    double incident_power = 0.0;
    double reflected_power = 0.0;
    double transmitted_power = 0.0;
    double ratio = 0.0;
};

/// P = (reflected + transmitted)/incident for the given incident modal vector.
PowerReport power_ratio(const ScatteringMatrix& S, std::span<const Complex> phi_in,
                        double k);

}  // namespace wavecascade
