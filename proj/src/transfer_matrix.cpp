#include "qwi/transfer_matrix.hpp"

#include <cmath>
#include <string>

namespace qwi {

TransferMatrix operator*(const TransferMatrix& lhs, const TransferMatrix& rhs) {
    return TransferMatrix{lhs.t11 * rhs.t11 + lhs.t12 * rhs.t21,
                          lhs.t11 * rhs.t12 + lhs.t12 * rhs.t22,
                          lhs.t21 * rhs.t11 + lhs.t22 * rhs.t21,
                          lhs.t21 * rhs.t12 + lhs.t22 * rhs.t22};
}

TransferMatrix matrix_power(const TransferMatrix& T, unsigned n) {
    TransferMatrix out{}; // identity
    for (unsigned i = 0; i < n; ++i) out = T * out;
    return out;
}

TransferEigen eigen_decompose(const TransferMatrix& T) {
    const cdouble tr = T.trace();
    const cdouble disc = std::sqrt(tr * tr - 4.0 * T.det());
    cdouble mu1 = 0.5 * (tr - disc);
    cdouble mu2 = 0.5 * (tr + disc);
    if (std::abs(mu1) > std::abs(mu2)) std::swap(mu1, mu2);
    TransferEigen out{mu1, mu2, {0.0, 0.0}};
    // (t12, mu - t11) and (mu - t22, t21) are both eigenvectors of mu; take
    // the better-conditioned one.
    const cdouble a1 = T.t12, b1 = mu1 - T.t11;
    const cdouble a2 = mu1 - T.t22, b2 = T.t21;
    if (std::abs(a1) + std::abs(b1) >= std::abs(a2) + std::abs(b2)) {
        out.v_small[0] = a1;
        out.v_small[1] = b1;
    } else {
        out.v_small[0] = a2;
        out.v_small[1] = b2;
    }
    const double norm = std::abs(out.v_small[0]) + std::abs(out.v_small[1]);
    if (norm == 0.0) { // degenerate (e.g. identity): any direction works
        out.v_small[0] = 1.0;
        out.v_small[1] = 0.0;
    }
    return out;
}

cdouble segment_exponent(const PotentialSegment& seg, double E) {
    const double q_sq = 2.0 * (seg.height - E); // psi'' = q^2 psi
    if (q_sq >= 0.0) return cdouble{std::sqrt(q_sq), 0.0};
    return cdouble{0.0, std::sqrt(-q_sq)};
}

TransferMatrix propagation_matrix(cdouble q, double width) {
    const cdouble w = q * width;
    if (std::abs(w.real()) > 700.0)
        throw NumericalError("propagation_matrix: exponent overflow, Re(q w) = " +
                             std::to_string(w.real()));
    return TransferMatrix{std::exp(w), 0.0, 0.0, std::exp(-w)};
}

TransferMatrix interface_matrix(cdouble q_left, cdouble q_right) {
    if (std::abs(q_right) < 1e-14 || std::abs(q_left) < 1e-14)
        throw NumericalError("interface_matrix: grazing slope (q ~ 0); "
                             "use the threshold-safe segment block instead");
    const cdouble sum = (q_right + q_left) / (2.0 * q_right);
    const cdouble dif = (q_right - q_left) / (2.0 * q_right);
    return TransferMatrix{sum, dif, dif, sum};
}

TransferMatrix point_interaction_matrix(const PointInteraction& pi, cdouble q) {
    if (pi.trivial()) return TransferMatrix{};
    if (std::abs(q) < 1e-14)
        throw NumericalError("point_interaction_matrix: grazing slope (q ~ 0)");
    const double theta = pi.theta();
    const double u = 0.5 * (theta + 1.0 / theta);
    const double v = 0.5 * (theta - 1.0 / theta);
    const cdouble w = pi.slope_coupling() / (2.0 * q);
    return TransferMatrix{u + w, v + w, v - w, u - w};
}

namespace {

// ch(w) and sh(w)/w for complex w, driven by x = w^2 so the expressions stay
// analytic through w = 0 (threshold of a segment).  Mirrors the real-valued
// series in the dispersion module.
void cosh_pair(cdouble w, cdouble x, cdouble& ch, cdouble& sh_over_w) {
    if (std::abs(x) < 1e-6) {
        ch = 1.0 + x * (0.5 + x * (1.0 / 24.0 + x / 720.0));
        sh_over_w = 1.0 + x * (1.0 / 6.0 + x * (1.0 / 120.0 + x / 5040.0));
    } else {
        if (std::abs(w.real()) > 700.0)
            throw NumericalError("cell_transfer_matrix: exponent overflow");
        ch = std::cosh(w);
        sh_over_w = std::sinh(w) / w;
    }
}

// Block I(q_s -> q_out) P(q_s, w) I(q_in -> q_s) in closed form.  With
// C = ch(q_s w) and S1 = sh(q_s w)/q_s the entries depend on q_s only through
// q_s^2, so the block stays exact and finite when the segment sits at its
// threshold (q_s -> 0):
//   B11 =  [ S1 (q_s^2 + q_in q_out) + C (q_in + q_out)] / (2 q_out)
//   B12 =  [ S1 (q_s^2 - q_in q_out) + C (q_out - q_in)] / (2 q_out)
//   B21 =  [-S1 (q_s^2 - q_in q_out) + C (q_out - q_in)] / (2 q_out)
//   B22 =  [-S1 (q_s^2 + q_in q_out) + C (q_in + q_out)] / (2 q_out)
TransferMatrix segment_block(cdouble q_in, cdouble q_s_sq, double width,
                             cdouble q_out) {
    if (std::abs(q_out) < 1e-14 || std::abs(q_in) < 1e-14)
        throw NumericalError("segment_block: grazing neighbour slope");
    const cdouble q_s = std::sqrt(q_s_sq);
    const cdouble w = q_s * width;
    cdouble ch, sh_over_w;
    cosh_pair(w, w * w, ch, sh_over_w);
    const cdouble S1 = sh_over_w * width; // sh(q_s w)/q_s
    const cdouble plus = q_s_sq + q_in * q_out;
    const cdouble minus = q_s_sq - q_in * q_out;
    const cdouble sum = q_in + q_out;
    const cdouble dif = q_out - q_in;
    const cdouble den = 2.0 * q_out;
    return TransferMatrix{(S1 * plus + ch * sum) / den,
                          (S1 * minus + ch * dif) / den,
                          (-S1 * minus + ch * dif) / den,
                          (-S1 * plus + ch * sum) / den};
}

} // namespace

TransferMatrix cell_transfer_matrix(const UnitCell& cell, double E) {
    if (!(E > 0.0))
        throw NumericalError("cell_transfer_matrix: E must be > 0");
    const auto& segs = cell.segments();
    const std::size_t m = segs.size();
    const cdouble q1 = segment_exponent(segs[0], E);
    if (std::abs(q1) < 1e-14)
        throw NumericalError("cell_transfer_matrix: first segment at threshold");

    // Anchor at 0+ (start of the first segment): T maps coefficients there to
    // coefficients at L+.  Full chain, right factor acts first:
    //   T = I(q_m -> q_1) M_node(q_m) P_m I(q_{m-1} -> q_m) ... P_2 I(q_1 -> q_2) P_1
    // Segments near their threshold E = U_j are folded together with both of
    // their interfaces into one closed-form block that stays finite there.
    TransferMatrix T = propagation_matrix(q1, segs[0].width);
    if (m == 1) {
        if (!cell.node().trivial())
            T = point_interaction_matrix(cell.node(), q1) * T;
        return T;
    }

    cdouble q_prev = q1;     // basis T currently maps into
    bool entry_done = false; // entry interface into segment j already applied?
    for (std::size_t j = 1; j < m; ++j) {
        const double w = segs[j].width;
        const cdouble q_sq{2.0 * (segs[j].height - E), 0.0};
        const bool last = (j + 1 == m);
        const cdouble q_next = last ? q1 : segment_exponent(segs[j + 1], E);
        if (std::abs(q_sq) * w * w < 1e-6) {
            if (entry_done)
                throw NumericalError(
                    "cell_transfer_matrix: adjacent segments at threshold");
            if (last && !cell.node().trivial())
                throw NumericalError(
                    "cell_transfer_matrix: node attached to a threshold segment");
            T = segment_block(q_prev, q_sq, w, q_next) * T;
            entry_done = true; // the block already crossed into the next basis
            q_prev = q_next;
        } else {
            const cdouble q_j = std::sqrt(q_sq);
            if (!entry_done) T = interface_matrix(q_prev, q_j) * T;
            T = propagation_matrix(q_j, w) * T;
            entry_done = false;
            q_prev = q_j;
            if (last) {
                if (!cell.node().trivial())
                    T = point_interaction_matrix(cell.node(), q_j) * T;
                T = interface_matrix(q_j, q1) * T;
            }
        }
    }
    return T;
}

double bloch_rhs_from_trace(const TransferMatrix& T) {
    const cdouble tr = T.trace();
    const double tol = 1e-8 * std::max(2.0, std::abs(tr));
    if (std::abs(tr.imag()) > tol)
        throw NumericalError("bloch_rhs_from_trace: trace has imaginary residue " +
                             std::to_string(tr.imag()));
    return 0.5 * tr.real();
}

} // namespace qwi
