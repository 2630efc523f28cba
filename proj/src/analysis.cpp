#include "wavecascade/analysis.hpp"

#include <cmath>

namespace wavecascade {

namespace {
constexpr double PI = 3.14159265358979323846;
}

double modal_power(Complex amplitude, std::size_t n, double a, double k) {
    const double cut = static_cast<double>(n) * PI / a;
    if (k - cut < 1e-9) return 0.0;   // cut off (or within round-off of it)
    const double alpha = std::sqrt(k * k - cut * cut);
    const double w = a * (n == 0 ? 2.0 : 1.0) / (2.0 * k);
    return w * std::norm(amplitude) * alpha;
}

PowerReport power_ratio(const ScatteringMatrix& S, std::span<const Complex> phi_in,
                        double k) {
    PowerReport r;
    r.k = k;
    const std::size_t N = phi_in.size();
    for (std::size_t n = 0; n < N; ++n)
        r.incident_power += modal_power(phi_in[n], n, S.width_left, k);
    if (r.incident_power <= 0.0)
        throw ZeroIncidentPower("power_ratio: all incident modes are cut off");
    const auto refl = S.R_plus.apply(phi_in);
    const auto trans = S.T_plus.apply(phi_in);
    for (std::size_t n = 0; n < N; ++n) {
        r.reflected_power += modal_power(refl[n], n, S.width_left, k);
        r.transmitted_power += modal_power(trans[n], n, S.width_right, k);
    }
    r.ratio = (r.reflected_power + r.transmitted_power) / r.incident_power;
    return r;
}

}  // namespace wavecascade
