#pragma once

#include <vector>

#include "qwi/lattice.hpp"

namespace qwi {

// Bound state localised at the crystal edge: its energy sits inside gap n of
// the bulk band structure, the bulk tail decays as e^{-lambda L} per period,
// and the vacuum tail as e^{kappa_E x} under the barrier.
struct SurfaceState {
    int n = 0;            // zone index of the hosting gap
    double xi = 0.0;      // sqrt(2E) L
    double lambdaL = 0.0; // per-period decay exponent in the bulk
    double E = 0.0;
    // Consistency residuals stored with each accepted root:
    //   residual_1: |(-1)^n e^{-lambda L} - (cos xi + (Q/xi) sin xi)|, the
    //               decaying-branch Bloch factor check (the matching equation
    //               is sign-blind, so this filter rejects growing-branch
    //               pseudo-roots, which carry residual ~ 2 sh(lambda L));
    //   residual_2: |(-1)^n ch(lambda L) - F(xi)|, parity of the hosting gap.
    double residual_1 = 0.0;
    double residual_2 = 0.0;
};

// Matching equation of the clean edge (barrier U_E for x < 0, Dirac comb of
// strength p with nodes at L, 2L, ...):
//   xi ctg xi = s^2/(2p) - sqrt(s^2 - xi^2),   s = sqrt(2 U_E) L.
// Returned value is lhs - rhs.
double clean_edge_residual(double xi, double s, double p);

// Deformed edge: an extra delta of strength p_eta = eta L sits at the edge.
// Two geometries are supported; both reduce to the matching equation
//   xi ctg xi = [xi^2 + (G + 2 p_eta)^2 - 2 p_alpha (G + 2 p_eta)] / (2 p_alpha)
// and differ in G, the barrier-side logarithmic slope seen at the first node:
//   EtaAtStep          - eta on top of the step at x = 0 (bulk nodes at L,
//                        2L, ...): G = sqrt(s^2 - xi^2).  Reduces exactly to
//                        the clean edge at p_eta = 0.  Default.
//   StepOffsetOnePeriod - step one free period to the left of the first node:
//                        G = t(xi) = xi (kEL - xi tg xi)/(xi + kEL tg xi)
//                        with kEL = sqrt(s^2 - xi^2), evaluated through
//                        pole-free trigonometric products.
enum class DeformedEdgeForm { EtaAtStep, StepOffsetOnePeriod };

double deformed_edge_residual(double xi, double s, double p_alpha, double p_eta,
                              DeformedEdgeForm form = DeformedEdgeForm::EtaAtStep);

// The offset-geometry slope parameter t at given xi (exposed for tests).
struct EdgeDeformation {
    double p_eta = 0.0;
    double t = 0.0;
};
EdgeDeformation edge_deformation_of(double xi, double s, double p_eta);

// All surface states with 0 < xi < s, one scan window per bulk gap.
std::vector<SurfaceState> solve_clean_edge(double s, double p, double L = 1.0);
std::vector<SurfaceState>
solve_deformed_edge(double s, double p_alpha, double p_eta, double L = 1.0,
                    DeformedEdgeForm form = DeformedEdgeForm::EtaAtStep);

// Independent cross-check: diagonalisation-free shooting on a finite crystal
// of N cells.  A state is accepted when the (psi, psi') vector launched from
// the vacuum-decaying edge condition lands, after N cells, on the decaying
// Bloch eigenvector of the cell map.  Returns the energies found in
// (E_lo, E_hi); the window must lie inside a bulk gap and below the barrier.
std::vector<double> finite_lattice_oracle(const SemiInfiniteLattice& lattice,
                                          double E_lo, double E_hi, int N = 40);

} // namespace qwi
