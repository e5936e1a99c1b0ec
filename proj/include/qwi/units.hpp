#pragma once

#include <cmath>

namespace qwi {

// Internal unit system: hbar = m = 1.  A free particle then has E = k0^2/2,
// and the dimensionless groups used throughout are
//   xi   = k0 L            phase accumulated across one period
//   p    = alpha L         delta-comb strength  (m alpha L / hbar^2 in general)
//   s    = sqrt(2 U_E) L   vacuum-barrier strength at a crystal edge
//   p_eta = eta L          strength of an extra edge delta
struct UnitsConvention {
    static constexpr double hbar = 1.0;
    static constexpr double mass = 1.0;

    static double k0_of_energy(double E) { return std::sqrt(2.0 * E); }
    static double xi_of_energy(double E, double L) { return std::sqrt(2.0 * E) * L; }
    static double energy_of_xi(double xi, double L) { return xi * xi / (2.0 * L * L); }
};

inline double k0_of_energy(double E) { return UnitsConvention::k0_of_energy(E); }
inline double xi_of_energy(double E, double L) { return UnitsConvention::xi_of_energy(E, L); }
inline double energy_of_xi(double xi, double L) { return UnitsConvention::energy_of_xi(xi, L); }

} // namespace qwi
