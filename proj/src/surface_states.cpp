#include "qwi/surface_states.hpp"

#include <cmath>
#include <functional>

#include "qwi/band_solver.hpp"
#include "qwi/dispersion.hpp"

namespace qwi {

namespace {

double xi_cot_xi(double xi) {
    const double s = std::sin(xi);
    if (std::abs(s) < 1e-14)
        throw NumericalError("surface residual: xi ctg xi pole at xi = n pi");
    return xi * std::cos(xi) / s;
}

double barrier_slope(double xi, double s) {
    if (!(xi > 0.0) || !(xi < s))
        throw NumericalError("surface residual: need 0 < xi < s");
    return std::sqrt(s * s - xi * xi); // kappa_E L
}

double generic_residual(double xi, double p_alpha, double G, double p_eta) {
    const double Q = G + 2.0 * p_eta;
    return xi_cot_xi(xi) -
           (xi * xi + Q * Q - 2.0 * p_alpha * Q) / (2.0 * p_alpha);
}

} // namespace

double clean_edge_residual(double xi, double s, double p) {
    if (p == 0.0)
        throw NumericalError("clean_edge_residual: p must be nonzero");
    const double kEL = barrier_slope(xi, s);
    return xi_cot_xi(xi) - s * s / (2.0 * p) + kEL;
}

EdgeDeformation edge_deformation_of(double xi, double s, double p_eta) {
    const double kEL = barrier_slope(xi, s);
    // t = xi (kEL - xi tg xi)/(xi + kEL tg xi); multiply through by cos xi to
    // stay finite at tg-poles.  The remaining zero of the denominator is a
    // genuine pole of t.
    const double c = std::cos(xi), sn = std::sin(xi);
    const double den = xi * c + kEL * sn;
    if (std::abs(den) < 1e-8 * (xi + kEL))
        throw NumericalError("edge_deformation_of: pole of the offset slope t");
    return EdgeDeformation{p_eta, xi * (kEL * c - xi * sn) / den};
}

double deformed_edge_residual(double xi, double s, double p_alpha, double p_eta,
                              DeformedEdgeForm form) {
    if (p_alpha == 0.0)
        throw NumericalError("deformed_edge_residual: p_alpha must be nonzero");
    const double G = (form == DeformedEdgeForm::EtaAtStep)
                         ? barrier_slope(xi, s)
                         : edge_deformation_of(xi, s, p_eta).t;
    return generic_residual(xi, p_alpha, G, p_eta);
}

namespace {

struct Window {
    int n = 0;
    int sign = 0;
    double lo = 0.0, hi = 0.0;
};

std::vector<Window> gap_windows(double s, double p) {
    const DispersionFn F = [p](double xi) { return dirac_rhs(xi, p); };
    const BandDiagram diagram = build_diagram(F, s, 4096);
    std::vector<Window> out;
    for (const auto& g : diagram.gaps) {
        const double lo = g.xi_lo + 1e-9;
        const double hi = std::min(g.xi_hi, s) - 1e-9;
        if (hi > lo) out.push_back(Window{g.n, g.sign, lo, hi});
    }
    return out;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double f_lo) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((f_lo < 0.0) == (fm < 0.0)) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Scan every gap window for roots of `resid`, then keep only roots on the
// decaying Bloch branch (residual_1 filter).  G_of(xi) is the barrier-side
// slope entering the branch check F1 = cos xi + ((G + 2 p_eta)/xi) sin xi.
std::vector<SurfaceState>
scan_surface_roots(double s, double p_alpha, double p_eta, double L,
                   const std::function<double(double)>& resid,
                   const std::function<double(double)>& G_of) {
    std::vector<SurfaceState> out;
    for (const auto& win : gap_windows(s, p_alpha)) {
        const int n_pts = 4001;
        double prev_x = 0.0, prev_f = 0.0;
        bool prev_ok = false;
        for (int i = 0; i < n_pts; ++i) {
            const double x = win.lo + (win.hi - win.lo) * i / (n_pts - 1.0);
            double f;
            bool ok = true;
            try {
                f = resid(x);
                ok = std::isfinite(f);
            } catch (const NumericalError&) {
                ok = false;
                f = 0.0;
            }
            if (ok && prev_ok && (prev_f < 0.0) != (f < 0.0)) {
                try {
                    const double root = bisect_root(resid, prev_x, x, prev_f);
                    const double F2 = dirac_rhs(root, p_alpha);
                    if (std::abs(F2) > 1.0 &&
                        ((F2 > 0.0) ? +1 : -1) == win.sign) {
                        const double lamL = std::acosh(std::abs(F2));
                        const double Q = G_of(root) + 2.0 * p_eta;
                        const double F1 =
                            std::cos(root) + Q / root * std::sin(root);
                        const double r1 =
                            std::abs(win.sign * std::exp(-lamL) - F1);
                        const double r2 =
                            std::abs(win.sign * std::cosh(lamL) - F2);
                        if (r1 < 1e-10) {
                            SurfaceState st;
                            st.n = win.n;
                            st.xi = root;
                            st.lambdaL = lamL;
                            st.E = root * root / (2.0 * L * L);
                            st.residual_1 = r1;
                            st.residual_2 = r2;
                            out.push_back(st);
                        }
                    }
                } catch (const NumericalError&) {
                    // Sign change across a pole of the residual, not a root.
                }
            }
            prev_x = x;
            prev_f = f;
            prev_ok = ok;
        }
    }
    return out;
}

} // namespace

std::vector<SurfaceState> solve_clean_edge(double s, double p, double L) {
    const auto resid = [s, p](double xi) { return clean_edge_residual(xi, s, p); };
    const auto G_of = [s](double xi) { return barrier_slope(xi, s); };
    return scan_surface_roots(s, p, 0.0, L, resid, G_of);
}

std::vector<SurfaceState>
solve_deformed_edge(double s, double p_alpha, double p_eta, double L,
                    DeformedEdgeForm form) {
    const auto resid = [=](double xi) {
        return deformed_edge_residual(xi, s, p_alpha, p_eta, form);
    };
    const auto G_of = [=](double xi) {
        return (form == DeformedEdgeForm::EtaAtStep)
                   ? barrier_slope(xi, s)
                   : edge_deformation_of(xi, s, p_eta).t;
    };
    return scan_surface_roots(s, p_alpha, p_eta, L, resid, G_of);
}

// ------------------------------------------------------------------ oracle ---

namespace {

// Real (psi, psi') propagation, kept deliberately separate from the complex
// coefficient-basis transfer matrices: the oracle must not share code with
// the machinery it checks.
struct Mat2 {
    double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;
};

Mat2 mul(const Mat2& l, const Mat2& r) {
    return Mat2{l.a11 * r.a11 + l.a12 * r.a21, l.a11 * r.a12 + l.a12 * r.a22,
                l.a21 * r.a11 + l.a22 * r.a21, l.a21 * r.a12 + l.a22 * r.a22};
}

// psi'' = q2 psi across width w: [[ch, sh/q], [q sh, ch]] expressed in q2 so
// both signs of q2 and the threshold q2 = 0 are covered.
Mat2 segment_psi_matrix(double q2, double w) {
    const double x = q2 * w * w;
    double C, S1;
    if (std::abs(x) < 1e-6) {
        C = 1.0 + x * (0.5 + x * (1.0 / 24.0 + x / 720.0));
        S1 = w * (1.0 + x * (1.0 / 6.0 + x * (1.0 / 120.0 + x / 5040.0)));
    } else if (x > 0.0) {
        const double u = std::sqrt(q2) * w;
        if (u > 700.0) throw NumericalError("finite_lattice_oracle: overflow");
        C = std::cosh(u);
        S1 = std::sinh(u) / std::sqrt(q2);
    } else {
        const double u = std::sqrt(-q2) * w;
        C = std::cos(u);
        S1 = std::sin(u) / std::sqrt(-q2);
    }
    return Mat2{C, S1, q2 * S1, C};
}

Mat2 cell_psi_matrix(const UnitCell& cell, double E) {
    Mat2 M;
    for (const auto& seg : cell.segments())
        M = mul(segment_psi_matrix(2.0 * (seg.height - E), seg.width), M);
    if (!cell.node().trivial()) {
        const double th = cell.node().theta();
        const double g = cell.node().slope_coupling();
        M = mul(Mat2{th, 0.0, g, 1.0 / th}, M);
    }
    return M;
}

struct OracleEval {
    double f = 0.0;    // cross(v after N cells, decaying eigenvector)
    double vd[2] = {0.0, 0.0};
    bool valid = false;
};

OracleEval oracle_eval(const SemiInfiniteLattice& lat, double E, int N,
                       const double* ref_vd) {
    OracleEval out;
    if (!(E > 0.0) || E >= lat.barrier_U_E) return out;
    const Mat2 C = cell_psi_matrix(lat.bulk, E);
    const double t = C.a11 + C.a22;
    if (std::abs(t) - 2.0 <= 1e-12) return out; // not inside a gap

    const double root = std::sqrt(t * t - 4.0);
    const double mu_d = 0.5 * (t - (t > 0.0 ? root : -root)); // |mu_d| < 1
    double vd[2];
    const double n1 = std::abs(C.a12) + std::abs(mu_d - C.a11);
    const double n2 = std::abs(mu_d - C.a22) + std::abs(C.a21);
    if (n1 >= n2) {
        vd[0] = C.a12;
        vd[1] = mu_d - C.a11;
    } else {
        vd[0] = mu_d - C.a22;
        vd[1] = C.a21;
    }
    const double norm = std::hypot(vd[0], vd[1]);
    if (norm == 0.0) return out;
    vd[0] /= norm;
    vd[1] /= norm;
    // The closed forms above switch branch as E moves, flipping the vector's
    // overall sign; align with the caller's reference so f stays continuous.
    if (ref_vd && (vd[0] * ref_vd[0] + vd[1] * ref_vd[1]) < 0.0) {
        vd[0] = -vd[0];
        vd[1] = -vd[1];
    }

    // Launch from the vacuum-decaying condition at the edge, deformation
    // included, and march through N cells with per-cell rescaling.
    const double kapE = std::sqrt(2.0 * (lat.barrier_U_E - E));
    const double th_e = lat.edge.theta();
    const double g_e = lat.edge.slope_coupling();
    double v[2] = {th_e, kapE / th_e + g_e};
    for (int c = 0; c < N; ++c) {
        const double w0 = C.a11 * v[0] + C.a12 * v[1];
        const double w1 = C.a21 * v[0] + C.a22 * v[1];
        const double m = std::max(std::abs(w0), std::abs(w1));
        if (m == 0.0) return out;
        v[0] = w0 / m;
        v[1] = w1 / m;
    }
    out.f = v[0] * vd[1] - v[1] * vd[0];
    out.vd[0] = vd[0];
    out.vd[1] = vd[1];
    out.valid = true;
    return out;
}

} // namespace

std::vector<double> finite_lattice_oracle(const SemiInfiniteLattice& lattice,
                                          double E_lo, double E_hi, int N) {
    if (!(E_hi > E_lo) || N < 2)
        throw NumericalError("finite_lattice_oracle: bad window or N");
    std::vector<double> roots;
    const int n_pts = 4001;
    double prev_E = 0.0, prev_f = 0.0;
    double prev_vd[2] = {0.0, 0.0};
    bool prev_ok = false;
    double run_ref[2] = {0.0, 0.0};
    bool have_ref = false;
    for (int i = 0; i < n_pts; ++i) {
        const double E = E_lo + (E_hi - E_lo) * i / (n_pts - 1.0);
        const OracleEval ev =
            oracle_eval(lattice, E, N, have_ref ? run_ref : nullptr);
        if (ev.valid) {
            run_ref[0] = ev.vd[0];
            run_ref[1] = ev.vd[1];
            have_ref = true;
        }
        if (ev.valid && prev_ok && (prev_f < 0.0) != (ev.f < 0.0)) {
            // Bisect with the eigenvector direction pinned to the bracket's
            // left endpoint.
            double lo = prev_E, hi = E, f_lo = prev_f;
            const double ref[2] = {prev_vd[0], prev_vd[1]};
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const OracleEval em = oracle_eval(lattice, mid, N, ref);
                if (!em.valid) break;
                if ((f_lo < 0.0) == (em.f < 0.0)) {
                    lo = mid;
                    f_lo = em.f;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        if (ev.valid) {
            prev_E = E;
            prev_f = ev.f;
            prev_vd[0] = ev.vd[0];
            prev_vd[1] = ev.vd[1];
        }
        prev_ok = ev.valid;
    }
    return roots;
}

} // namespace qwi
