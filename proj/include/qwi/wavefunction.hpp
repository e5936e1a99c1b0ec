#pragma once

#include <complex>

#include "qwi/errors.hpp"

namespace qwi {

using cdouble = std::complex<double>;

// Bloch state of a comb lattice whose cell interior is free: on cell n
// (x = n L + x', x' in [0, L))
//   psi(x) = A (e^{i k0 x'} + r0 e^{-i k0 x'}) e^{i k L n}
// The cell reflection coefficient r0 encodes the node scattering; it follows
// from the Bloch condition alone:
//   r0 = (e^{i(xi - kL)} - 1) / (1 - e^{-i(xi + kL)}),   xi = k0 L.
// k L is real inside bands and pi n + i lambda L inside gaps.
struct BlochWave {
    double E = 0.0, L = 1.0, k0 = 0.0;
    cdouble kL{0.0};
    cdouble r0{0.0};
    double A = 1.0; // normalisation: max over one cell of |psi| is 1
};

// Throws NumericalError at the degenerate points xi + kL = 2 pi m unless the
// numerator vanishes too (closed gap), where the limit r0 = 0 applies.
cdouble r0_of(double xi, cdouble kL);

BlochWave make_bloch_wave(double E, cdouble kL, double L);

cdouble psi_at(const BlochWave& w, double x);

// Z(x) = z0 (e^{i k0 x'} - r0 e^{-i k0 x'}) / (e^{i k0 x'} + r0 e^{-i k0 x'}),
// periodic with the cell; PoleError within ~1e-12 of a node of psi.
cdouble impedance_profile(const BlochWave& w, double x);

} // namespace qwi
