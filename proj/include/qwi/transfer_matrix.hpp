#pragma once

#include <complex>

#include "qwi/lattice.hpp"

namespace qwi {

using cdouble = std::complex<double>;

// 2x2 complex transfer matrix acting on column vectors of local basis
// coefficients (c+, c-), where the wave on a stretch starting at x is
//   psi(y) = c+ e^{q (y - x)} + c- e^{-q (y - x)}
// with q = i k on an oscillatory stretch and q = kappa on an evanescent one.
// Propagation runs left to right; matrices compose by left multiplication.
struct TransferMatrix {
    cdouble t11{1.0}, t12{0.0}, t21{0.0}, t22{1.0};

    cdouble det() const { return t11 * t22 - t12 * t21; }
    cdouble trace() const { return t11 + t22; }
};

TransferMatrix operator*(const TransferMatrix& lhs, const TransferMatrix& rhs);

// T^n by repeated multiplication (n >= 0).
TransferMatrix matrix_power(const TransferMatrix& T, unsigned n);

// Eigenvalues mu_1, mu_2 (|mu_1| <= |mu_2|) and a (unnormalised) eigenvector
// of mu_1; used to pick the decaying Bloch branch inside gaps.
struct TransferEigen {
    cdouble mu_small, mu_large;
    cdouble v_small[2];
};
TransferEigen eigen_decompose(const TransferMatrix& T);

// Local complex slope q of a potential segment at energy E:
// q = i sqrt(2(E-U)) above the segment potential, q = sqrt(2(U-E)) below.
cdouble segment_exponent(const PotentialSegment& seg, double E);

// diag(e^{q w}, e^{-q w}); throws NumericalError if |Re(q w)| would overflow.
TransferMatrix propagation_matrix(cdouble q, double width);

// Coefficient conversion across a potential step where the local slope
// changes from q_left to q_right (continuity of psi and psi'):
//   I = 1/(2 q_right) [[q_right + q_left, q_right - q_left],
//                      [q_right - q_left, q_right + q_left]]
TransferMatrix interface_matrix(cdouble q_left, cdouble q_right);

// Coefficient jump across a point interaction embedded in a stretch of
// slope q (same basis on both sides).  det = 1 identically.
TransferMatrix point_interaction_matrix(const PointInteraction& pi, cdouble q);

// Transfer matrix of one full period, anchored just right of the cell's left
// boundary: T maps coefficients at 0+ to coefficients at L+.  Interior
// interfaces are folded into per-segment blocks that stay finite when a
// segment sits at its threshold E = U (grazing slope q -> 0).
TransferMatrix cell_transfer_matrix(const UnitCell& cell, double E);

// F = Re(tr T)/2.  The trace of a physical cell matrix at real energy is
// real; |Im tr| <= 1e-8 * max(2, |tr|) is enforced as a consistency check.
double bloch_rhs_from_trace(const TransferMatrix& T);

} // namespace qwi
