#include "qwi/dispersion.hpp"

#include <cmath>
#include <string>

namespace qwi {

double dirac_rhs(double xi, double p) {
    if (!(xi >= 0.0))
        throw NumericalError("dirac_rhs: xi must be >= 0");
    if (xi < 1e-8) {
        // Taylor form of cos xi + p sin(xi)/xi about xi = 0; the quadratic
        // term keeps the function smooth through the limit value 1 + p.
        return 1.0 + p - xi * xi * (0.5 + p / 6.0);
    }
    return std::cos(xi) + p * std::sin(xi) / xi;
}

double delta_delta_prime_rhs(double xi, double p, double beta_tilde) {
    if (std::abs(beta_tilde) >= 1.0)
        throw NumericalError("delta_delta_prime_rhs: |beta_tilde| must be < 1");
    const double b2 = beta_tilde * beta_tilde;
    // (1+b2)/(1-b2) is exactly 1.0 when beta_tilde = 0, so the reduction to
    // the Dirac comb with inverted sign is bit-for-bit.
    return (1.0 + b2) / (1.0 - b2) * dirac_rhs(xi, -p / (1.0 + b2));
}

namespace {

// ch(w) and sh(w)/w as functions of x = w^2, valid for either sign of x
// (x < 0 gives cos, sin).  The series branch keeps the barrier threshold
// E = U_b smooth to machine precision.
void cosh_ratio_pair(double x, double w_abs, double& ch, double& sh_over_w) {
    if (std::abs(x) < 1e-6) {
        ch = 1.0 + x * (0.5 + x * (1.0 / 24.0 + x / 720.0));
        sh_over_w = 1.0 + x * (1.0 / 6.0 + x * (1.0 / 120.0 + x / 5040.0));
    } else if (x > 0.0) {
        if (w_abs > 700.0)
            throw NumericalError("cosh_ratio_pair: exponent overflow, |w| = " +
                                 std::to_string(w_abs));
        ch = std::cosh(w_abs);
        sh_over_w = std::sinh(w_abs) / w_abs;
    } else {
        ch = std::cos(w_abs);
        sh_over_w = std::sin(w_abs) / w_abs;
    }
}

} // namespace

double kronig_penney_rhs(double E, double a, double b, double U_b) {
    if (!(E > 0.0))
        throw NumericalError("kronig_penney_rhs: E must be > 0");
    if (!(a > 0.0) || !(b > 0.0))
        throw NumericalError("kronig_penney_rhs: a, b must be > 0");
    const double k1 = std::sqrt(2.0 * E);
    const double kappa_sq = 2.0 * (U_b - E);
    const double x = kappa_sq * b * b;           // (kappa b)^2, either sign
    const double w_abs = std::sqrt(std::abs(kappa_sq)) * b;
    double chb = 0.0, shb_over = 0.0;            // ch(kappa b), sh(kappa b)/(kappa b)
    cosh_ratio_pair(x, w_abs, chb, shb_over);
    // sh(kappa b)/kappa = b * sh(kappa b)/(kappa b)
    return std::cos(k1 * a) * chb +
           (kappa_sq - k1 * k1) / (2.0 * k1) * b * shb_over * std::sin(k1 * a);
}

ZoneKind classify(double F) {
    const double m = std::abs(F);
    if (m < 1.0) return ZoneKind::Band;
    if (m > 1.0) return ZoneKind::Gap;
    return ZoneKind::Edge;
}

BlochWaveNumber k_of_F(double F) {
    BlochWaveNumber out{};
    out.kind = classify(F);
    switch (out.kind) {
    case ZoneKind::Band:
        out.kL = std::acos(F);
        break;
    case ZoneKind::Edge:
        out.kL = (F > 0.0) ? 0.0 : M_PI;
        break;
    case ZoneKind::Gap:
        out.lambdaL = std::acosh(std::abs(F));
        out.parity = (F > 0.0) ? 0 : 1;
        out.kL = out.parity * M_PI;
        break;
    }
    return out;
}

} // namespace qwi
