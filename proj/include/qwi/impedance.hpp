#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "qwi/lattice.hpp"
#include "qwi/transfer_matrix.hpp"

namespace qwi {

// Quantum wave impedance Z(x) = -i (hbar/m) psi'(x)/psi(x).  On a stretch of
// constant potential the general state psi ~ ch(q x + phi) gives
//   Z(x) = -i (hbar/m) q th(q x + phi)
// with q = i k0 (oscillatory, z0 = hbar k0/m) or q = kappa (evanescent,
// z0 = hbar kappa/m).  A single complex phase phi therefore carries the whole
// state of the wave on the stretch.

enum class SegmentWaveKind { Oscillatory, Evanescent };

struct ImpedanceState {
    SegmentWaveKind kind = SegmentWaveKind::Oscillatory;
    double z0 = 0.0;      // hbar k0 / m  or  hbar kappa / m  (>= 0)
    cdouble phase{0.0};   // phi at the segment start; Re phi saturates at +-350

    cdouble exponent() const { // q in psi ~ ch(q x + phi)
        return kind == SegmentWaveKind::Oscillatory ? cdouble{0.0, z0}
                                                    : cdouble{z0, 0.0};
    }
};

// th(w) computed through e^{-2|Re w|} so it never overflows; saturates to
// +-1 for |Re w| > 350 and throws PoleError within 1e-12 of a pole.
cdouble stable_tanh(cdouble w);

// log ch(w) up to a multiple of 2 pi i, stable for large |Re w|; only ever
// used in differences under exp, where the ambiguity cancels.
cdouble log_cosh(cdouble w);

// Amplitude kick of a delta' node: psi(x+)/psi(x-) = e^{f0} with
// f0 = ln[(1 + beta_tilde)/(1 - beta_tilde)].
double f0_of(double beta_tilde);

// Z(x) on a stretch, x measured from the segment start.
cdouble impedance_at(const ImpedanceState& st, double x);

// Impedance jump rules across matching points, left value in, right value out.
struct ContinuousMatch {};
struct DeltaJumpMatch {
    double alpha = 0.0;   // Z+ = Z- - 2 i alpha m / hbar
};
struct DeltaDeltaPrimeMatch {
    double alpha = 0.0;   // Z+ = (1-bt)^2/(1+bt)^2 Z- - 2 i alpha m /(hbar (1+bt)^2)
    double beta_tilde = 0.0;
};
using MatchRule = std::variant<ContinuousMatch, DeltaJumpMatch, DeltaDeltaPrimeMatch>;

cdouble apply_match(const MatchRule& rule, cdouble Z);

// Impedance phases of a Bloch state on every segment of one period, together
// with the per-period factor e^{ikL} they reproduce.  Inside gaps the
// decaying branch (|factor| < 1) is selected; inside bands the branch with
// kL in [0, pi].
struct BlochPhases {
    std::vector<ImpedanceState> states;
    cdouble factor;
};
BlochPhases bloch_phase_states(const UnitCell& cell, double E);

// e^{ikL} recovered from the phases alone:
//   theta_node * prod_j exp[ log ch(phi_j + q_j w_j) - log ch(phi_j) ]
cdouble cell_bloch_factor(const UnitCell& cell, double E,
                          const std::vector<ImpedanceState>& states);

} // namespace qwi
