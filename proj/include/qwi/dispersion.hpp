#pragma once

#include "qwi/errors.hpp"

namespace qwi {

// Right-hand sides F(xi) of the band equation cos(kL) = F.  |F| <= 1 is a
// band, |F| > 1 a gap.  xi = k0 L with k0 = sqrt(2E) (hbar = m = 1).

// Dirac comb, node strength p = alpha L:
//   F = cos xi + p sin(xi)/xi          (xi -> 0 limit: 1 + p)
double dirac_rhs(double xi, double p);

// delta-delta' comb with attractive delta part of strength p and delta'
// parameter beta_tilde in (-1, 1):
//   F = (1+bt^2)/(1-bt^2) * [cos xi - p/(xi (1+bt^2)) sin xi]
// Evaluated as (1+bt^2)/(1-bt^2) * dirac_rhs(xi, -p/(1+bt^2)), so beta_tilde=0
// reduces bitwise to dirac_rhs(xi, -p).
double delta_delta_prime_rhs(double xi, double p, double beta_tilde);

// Rectangular-barrier (Kronig-Penney) lattice, free stretch a, barrier (b, U_b):
//   F = cos(k1 a) ch(kappa b) + (kappa^2 - k1^2)/(2 k1) * sh(kappa b)/kappa * sin(k1 a)
// with k1 = sqrt(2E), kappa^2 = 2(U_b - E).  Above the barrier kappa^2 < 0 and
// ch, sh/kappa continue to cos, sin/k2; the threshold E = U_b is crossed
// smoothly through a series in kappa^2 b^2.
double kronig_penney_rhs(double E, double a, double b, double U_b);

enum class ZoneKind { Band, Gap, Edge };

// Decomposition of the Bloch wave number for a given F:
//   band:  k L = arccos F in [0, pi]
//   gap:   k L = i lambda L + pi n, lambda L = arcch |F| > 0, parity n from
//          sign F = (-1)^n (n = 0 for F > 1, n = 1 for F < -1)
struct BlochWaveNumber {
    ZoneKind kind;
    double kL = 0.0;      // band (and edge): real part of k L
    double lambdaL = 0.0; // gap: decay constant per period
    int parity = 0;       // gap: 0 or 1
};

ZoneKind classify(double F);
BlochWaveNumber k_of_F(double F);

} // namespace qwi
