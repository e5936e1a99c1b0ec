#pragma once

#include <array>
#include <complex>

namespace qwi {

using cdouble = std::complex<double>;

// Classical reference route for the rectangular-barrier lattice: expand the
// Bloch state in plane waves on the free stretch [0, a] (region I) and on the
// barrier image [-b, 0] (region II, wave numbers k2 = sqrt(2(E - U_b)),
// imaginary below the barrier), write the Bloch periodic factors u(x), and
// impose
//   u_I(0) = u_II(0),  u_I'(0) = u_II'(0),   (interface continuity)
//   u_I(a) = u_II(-b), u_I'(a) = u_II'(-b).  (periodicity of u)
// Nontrivial coefficients exist iff det M = 0, which reproduces the
// dispersion relation cos(kL) = F(E).
struct BlochMatchMatrix {
    std::array<std::array<cdouble, 4>, 4> m{};
};

// k is the Bloch wave number (complex inside gaps: k = i lambda + pi n / L).
BlochMatchMatrix classical_match_matrix(double E, cdouble k, double a, double b,
                                        double U_b);

cdouble det4(const BlochMatchMatrix& M);

// |det M| normalised by the fourth power of the largest entry magnitude, so
// the root criterion is scale-free in E and (a, b, U_b).
double scaled_residual(const BlochMatchMatrix& M);

} // namespace qwi
