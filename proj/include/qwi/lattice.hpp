#pragma once

#include <vector>

#include "qwi/errors.hpp"
#include "qwi/units.hpp"

namespace qwi {

// Zero-width scatterer at a lattice node.  The delta part enters the
// Hamiltonian as +alpha * delta(x - x_node).  The delta' part is parametrised
// by the dimensionless beta_tilde in (-1, 1), defined through the amplitude
// jump of the wave function across the node:
//   psi(x+) = theta psi(x-),  psi'(x+) = psi'(x-)/theta + g psi(x-)
// with theta = (1 + beta_tilde)/(1 - beta_tilde) and
// g = 2 m alpha / (hbar^2 (1 - beta_tilde^2)).
struct PointInteraction {
    double alpha = 0.0;
    double beta_tilde = 0.0;

    bool trivial() const { return alpha == 0.0 && beta_tilde == 0.0; }
    double theta() const { return (1.0 + beta_tilde) / (1.0 - beta_tilde); }
    double slope_coupling() const {
        return 2.0 * UnitsConvention::mass * alpha /
               (UnitsConvention::hbar * UnitsConvention::hbar *
                (1.0 - beta_tilde * beta_tilde));
    }
};

// One piecewise-constant stretch of potential inside the unit cell.
struct PotentialSegment {
    double width = 0.0;
    double height = 0.0; // potential U on this stretch
};

// One period of the crystal: the listed segments, traversed left to right,
// with the node interaction applied at the right boundary of the cell (which
// is the left boundary of the next cell's first segment).  Immutable after
// construction; segment widths must sum to the period within 1e-12 relative.
class UnitCell {
public:
    UnitCell(PointInteraction node, std::vector<PotentialSegment> segments,
             double period_L);

    const PointInteraction& node() const { return node_; }
    const std::vector<PotentialSegment>& segments() const { return segments_; }
    double period() const { return period_L_; }

private:
    PointInteraction node_;
    std::vector<PotentialSegment> segments_;
    double period_L_;
};

// Semi-infinite crystal x > 0 bounded by a constant vacuum barrier U_E on
// x < 0.  The bulk cells start at x = 0; an optional extra point interaction
// (the edge deformation) sits directly at x = 0, on top of the step.
struct SemiInfiniteLattice {
    UnitCell bulk;
    double barrier_U_E = 0.0;
    PointInteraction edge{};

    // s = sqrt(2 U_E) L, the dimensionless barrier strength.
    double s_parameter() const {
        return std::sqrt(2.0 * barrier_U_E) * bulk.period();
    }
};

// Comb of identical deltas, one per period: p = alpha L (p > 0 repulsive).
UnitCell make_dirac_comb(double p, double L = 1.0);

// Comb of delta-delta' scatterers.  Convention: p > 0 means an *attractive*
// delta part (alpha = -p/L) so that the band structure follows
// delta_delta_prime_rhs(xi, p, beta_tilde).
UnitCell make_delta_delta_prime_comb(double p, double beta_tilde, double L = 1.0);

// Rectangular-barrier lattice: free stretch of width a, barrier of width b
// and height U_b; period L = a + b.
UnitCell make_kronig_penney(double a, double b, double U_b);

} // namespace qwi
