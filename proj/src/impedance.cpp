#include "qwi/impedance.hpp"

#include <cmath>

namespace qwi {

cdouble stable_tanh(cdouble w) {
    const double re = w.real();
    if (re > 350.0) return cdouble{1.0, 0.0};
    if (re < -350.0) return cdouble{-1.0, 0.0};
    // th(w) = (1 - e^{-2w})/(1 + e^{-2w}) for Re w >= 0; mirror otherwise so
    // the exponential never overflows.
    const cdouble e = std::exp(re >= 0.0 ? -2.0 * w : 2.0 * w);
    const cdouble den = 1.0 + e;
    if (std::abs(den) < 1e-12)
        throw PoleError("stable_tanh: argument within ~1e-12 of a pole of th");
    const cdouble num = (re >= 0.0) ? (1.0 - e) : (e - 1.0);
    return num / den;
}

cdouble log_cosh(cdouble w) {
    const cdouble v = (w.real() < 0.0) ? -w : w; // ch is even
    const cdouble e = std::exp(-2.0 * v);        // |e| <= 1
    const cdouble one_plus = 1.0 + e;
    if (std::abs(one_plus) < 1e-12)
        throw PoleError("log_cosh: argument within ~1e-12 of a zero of ch");
    return v - std::log(2.0) + std::log(one_plus);
}

double f0_of(double beta_tilde) {
    if (std::abs(beta_tilde) >= 1.0)
        throw NumericalError("f0_of: |beta_tilde| must be < 1");
    return std::log((1.0 + beta_tilde) / (1.0 - beta_tilde));
}

cdouble impedance_at(const ImpedanceState& st, double x) {
    const cdouble q = st.exponent();
    // Z = -i (hbar/m) psi'/psi = -i q th(q x + phi)   (hbar = m = 1)
    return cdouble{0.0, -1.0} * q * stable_tanh(q * x + st.phase);
}

cdouble apply_match(const MatchRule& rule, cdouble Z) {
    struct Visitor {
        cdouble Z;
        cdouble operator()(const ContinuousMatch&) const { return Z; }
        cdouble operator()(const DeltaJumpMatch& m) const {
            return Z - cdouble{0.0, 2.0 * m.alpha};
        }
        cdouble operator()(const DeltaDeltaPrimeMatch& m) const {
            const double up = 1.0 + m.beta_tilde;
            const double dn = 1.0 - m.beta_tilde;
            return (dn * dn) / (up * up) * Z -
                   cdouble{0.0, 2.0 * m.alpha / (up * up)};
        }
    };
    return std::visit(Visitor{Z}, rule);
}

namespace {

// Unnormalised eigenvector of T for eigenvalue mu, via whichever of the two
// closed forms is better conditioned.
void eigenvector_of(const TransferMatrix& T, cdouble mu, cdouble v[2]) {
    const cdouble a1 = T.t12, b1 = mu - T.t11;
    const cdouble a2 = mu - T.t22, b2 = T.t21;
    if (std::abs(a1) + std::abs(b1) >= std::abs(a2) + std::abs(b2)) {
        v[0] = a1;
        v[1] = b1;
    } else {
        v[0] = a2;
        v[1] = b2;
    }
    if (std::abs(v[0]) + std::abs(v[1]) == 0.0) {
        v[0] = 1.0;
        v[1] = 0.0;
    }
}

// phi = (1/2) ln(A/B) for psi = A e^{qx} + B e^{-qx} = 2 sqrt(AB) ch(qx + phi),
// with the real part clamped to +-350 when one coefficient vanishes (pure
// one-sided wave; th and log ch are exactly saturated there).
cdouble phase_of_coefficients(cdouble A, cdouble B) {
    const double scale = std::abs(A) + std::abs(B);
    if (std::abs(B) <= 1e-300 * scale) return cdouble{350.0, 0.0};
    if (std::abs(A) <= 1e-300 * scale) return cdouble{-350.0, 0.0};
    cdouble phi = 0.5 * (std::log(A) - std::log(B));
    if (phi.real() > 350.0) phi.real(350.0);
    if (phi.real() < -350.0) phi.real(-350.0);
    return phi;
}

} // namespace

BlochPhases bloch_phase_states(const UnitCell& cell, double E) {
    const TransferMatrix T = cell_transfer_matrix(cell, E);
    const TransferEigen eig = eigen_decompose(T);

    // Branch choice: decaying inside a gap, kL in [0, pi] inside a band.
    cdouble mu = eig.mu_small;
    cdouble v[2] = {eig.v_small[0], eig.v_small[1]};
    if (std::abs(eig.mu_small) > 1.0 - 1e-9) { // band (both on the unit circle)
        if (eig.mu_small.imag() < 0.0) {
            mu = eig.mu_large;
            eigenvector_of(T, mu, v);
        }
    }

    BlochPhases out;
    out.factor = mu;
    const auto& segs = cell.segments();
    cdouble A = v[0], B = v[1];
    for (std::size_t j = 0; j < segs.size(); ++j) {
        const cdouble q = segment_exponent(segs[j], E);
        if (std::abs(q) < 1e-10)
            throw NumericalError("bloch_phase_states: segment at threshold has "
                                 "no impedance-phase representation");
        ImpedanceState st;
        st.kind = (q.real() == 0.0) ? SegmentWaveKind::Oscillatory
                                    : SegmentWaveKind::Evanescent;
        st.z0 = std::abs(q);
        st.phase = phase_of_coefficients(A, B);
        out.states.push_back(st);
        if (j + 1 < segs.size()) {
            const cdouble q_next = segment_exponent(segs[j + 1], E);
            const TransferMatrix step =
                interface_matrix(q, q_next) * propagation_matrix(q, segs[j].width);
            const cdouble A2 = step.t11 * A + step.t12 * B;
            const cdouble B2 = step.t21 * A + step.t22 * B;
            A = A2;
            B = B2;
        }
    }
    return out;
}

cdouble cell_bloch_factor(const UnitCell& cell, double E,
                          const std::vector<ImpedanceState>& states) {
    const auto& segs = cell.segments();
    if (states.size() != segs.size())
        throw NumericalError("cell_bloch_factor: one impedance state per segment "
                             "is required");
    cdouble log_ratio{0.0};
    for (std::size_t j = 0; j < segs.size(); ++j) {
        const cdouble q = states[j].exponent();
        if (std::abs(std::abs(segment_exponent(segs[j], E)) - states[j].z0) >
            1e-9 * (1.0 + states[j].z0))
            throw NumericalError("cell_bloch_factor: impedance states do not "
                                 "belong to this cell and energy");
        log_ratio += log_cosh(states[j].phase + q * segs[j].width) -
                     log_cosh(states[j].phase);
    }
    return cell.node().theta() * std::exp(log_ratio);
}

} // namespace qwi
