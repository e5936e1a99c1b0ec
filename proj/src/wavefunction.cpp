#include "qwi/wavefunction.hpp"

#include <cmath>

#include "qwi/units.hpp"

namespace qwi {

namespace {
const cdouble kI{0.0, 1.0};
}

cdouble r0_of(double xi, cdouble kL) {
    const cdouble num = std::exp(kI * (xi - kL)) - 1.0;
    const cdouble den = 1.0 - std::exp(-kI * (xi + kL));
    if (std::abs(den) < 1e-12) {
        if (std::abs(num) < 1e-12) return cdouble{0.0}; // plane-wave limit
        throw NumericalError("r0_of: degenerate Bloch combination "
                             "xi + kL = 2 pi m");
    }
    return num / den;
}

BlochWave make_bloch_wave(double E, cdouble kL, double L) {
    if (!(E > 0.0) || !(L > 0.0))
        throw NumericalError("make_bloch_wave: need E > 0 and L > 0");
    BlochWave w;
    w.E = E;
    w.L = L;
    w.k0 = k0_of_energy(E);
    w.kL = kL;
    const double xi = w.k0 * L;
    w.r0 = r0_of(xi, kL);

    // |psi/A|^2 = 1 + |r0|^2 + 2 |r0| cos(2 theta - arg r0) on theta = k0 x'
    // in [0, xi]; the maximum is (1 + |r0|)^2 if some theta = arg(r0)/2 + m pi
    // is reachable, otherwise it sits at a cell boundary.
    const double r = std::abs(w.r0);
    const double half_arg = 0.5 * std::arg(w.r0);
    const long m_lo = static_cast<long>(std::ceil((0.0 - half_arg) / M_PI));
    const long m_hi = static_cast<long>(std::floor((xi - half_arg) / M_PI));
    double peak_sq;
    if (m_lo <= m_hi) {
        peak_sq = (1.0 + r) * (1.0 + r);
    } else {
        const double at0 = std::norm(1.0 + w.r0);
        const double atL =
            std::norm(std::exp(kI * xi) + w.r0 * std::exp(-kI * xi));
        peak_sq = std::max(at0, atL);
    }
    w.A = 1.0 / std::sqrt(peak_sq);
    return w;
}

cdouble psi_at(const BlochWave& w, double x) {
    const double n = std::floor(x / w.L);
    const double xp = x - n * w.L;
    const cdouble cell = std::exp(kI * (w.k0 * xp)) +
                         w.r0 * std::exp(-kI * (w.k0 * xp));
    return w.A * cell * std::exp(kI * w.kL * n);
}

cdouble impedance_profile(const BlochWave& w, double x) {
    const double n = std::floor(x / w.L);
    const double xp = x - n * w.L;
    const cdouble up = std::exp(kI * (w.k0 * xp));
    const cdouble dn = std::exp(-kI * (w.k0 * xp));
    const cdouble den = up + w.r0 * dn;
    if (std::abs(den) < 1e-12 * (1.0 + std::abs(w.r0)))
        throw PoleError("impedance_profile: evaluation at a node of psi");
    const double z0 = w.k0; // hbar k0 / m with hbar = m = 1
    return z0 * (up - w.r0 * dn) / den;
}

} // namespace qwi
