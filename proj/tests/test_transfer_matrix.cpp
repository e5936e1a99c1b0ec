#include <doctest.h>

#include "helpers.hpp"
#include "qwi/dispersion.hpp"
#include "qwi/errors.hpp"
#include "qwi/transfer_matrix.hpp"

#include <cmath>
#include <complex>
#include <numbers>

using namespace qwi;
using std::numbers::pi;
using namespace std::complex_literals;

namespace {

// Largest entry magnitude, used to scale closeness checks.
double sup_norm(const TransferMatrix& T) {
    return std::max({std::abs(T.t11), std::abs(T.t12), std::abs(T.t21), std::abs(T.t22)});
}

bool matrices_close(const TransferMatrix& A, const TransferMatrix& B, double tol) {
    const double scale = std::max(1.0, std::max(sup_norm(A), sup_norm(B)));
    return std::abs(A.t11 - B.t11) <= tol * scale && std::abs(A.t12 - B.t12) <= tol * scale &&
           std::abs(A.t21 - B.t21) <= tol * scale && std::abs(A.t22 - B.t22) <= tol * scale;
}

// (c+, c-) -> (psi, psi') conversion at a point, for a stretch of slope q.
void to_psi(const cdouble& cp, const cdouble& cm, cdouble q, cdouble& psi, cdouble& dpsi) {
    psi = cp + cm;
    dpsi = q * (cp - cm);
}

} // namespace

TEST_SUITE("transfer-matrix") {

TEST_CASE("propagation matrix") {
    // Oscillatory stretch of half a wavelength flips both coefficients.
    const TransferMatrix P = propagation_matrix(cdouble(0.0, pi), 1.0);
    CHECK(std::abs(P.t11 - (-1.0)) <= 1e-15);
    CHECK(std::abs(P.t22 - (-1.0)) <= 1e-15);
    CHECK(std::abs(P.t12) == 0.0);
    CHECK(std::abs(P.t21) == 0.0);
    // Evanescent stretch: real growth/decay pair.
    const TransferMatrix Q = propagation_matrix(cdouble(2.0, 0.0), 0.5);
    CHECK(std::abs(Q.t11 - std::exp(1.0)) <= 1e-15 * std::exp(1.0));
    CHECK(std::abs(Q.t22 - std::exp(-1.0)) <= 1e-16);
    CHECK(std::abs(Q.det() - 1.0) <= 1e-15);
    // Exponent overflow guard.
    CHECK_THROWS_AS(propagation_matrix(cdouble(800.0, 0.0), 1.0), NumericalError);
}

TEST_CASE("interface matrix: algebra and a frozen mixed-basis value") {
    // Evanescent (kappa = 1) to oscillatory (k = 2): top-left entry (2 - i)/4.
    const TransferMatrix I = interface_matrix(cdouble(1.0, 0.0), cdouble(0.0, 2.0));
    CHECK(std::abs(I.t11 - cdouble(0.5, -0.25)) <= 1e-15);
    CHECK(std::abs(I.t22 - cdouble(0.5, -0.25)) <= 1e-15);
    CHECK(std::abs(I.t12 - cdouble(0.5, 0.25)) <= 1e-15);
    CHECK(std::abs(I.t21 - cdouble(0.5, 0.25)) <= 1e-15);

    auto g = testutil::rng(31);
    for (int i = 0; i < 500; ++i) {
        // Random slopes, each either oscillatory or evanescent.
        auto random_q = [&]() {
            const double m = testutil::uniform(g, 0.1, 5.0);
            return (testutil::uniform(g, 0.0, 1.0) < 0.5) ? cdouble(m, 0.0) : cdouble(0.0, m);
        };
        const cdouble qa = random_q(), qb = random_q();
        const TransferMatrix ab = interface_matrix(qa, qb);
        const TransferMatrix ba = interface_matrix(qb, qa);
        // Round trip is the identity; det I = q_left/q_right.
        CHECK(matrices_close(ab * ba, TransferMatrix{}, 1e-13));
        CHECK(std::abs(ab.det() - qa / qb) <= 1e-13 * std::abs(qa / qb));
        // The interface preserves psi and psi'.
        const cdouble cp{0.7, -0.3}, cm{-0.2, 1.1};
        cdouble psi_l, dpsi_l, psi_r, dpsi_r;
        to_psi(cp, cm, qa, psi_l, dpsi_l);
        to_psi(ab.t11 * cp + ab.t12 * cm, ab.t21 * cp + ab.t22 * cm, qb, psi_r, dpsi_r);
        CHECK(std::abs(psi_l - psi_r) <= 1e-12);
        CHECK(std::abs(dpsi_l - dpsi_r) <= 1e-12);
    }
}

TEST_CASE("point interaction matrix: unit determinant and the slope jump") {
    auto g = testutil::rng(32);
    for (int i = 0; i < 500; ++i) {
        const PointInteraction node{testutil::uniform(g, -10.0, 10.0),
                                    testutil::uniform(g, -0.9, 0.9)};
        const double m = testutil::uniform(g, 0.1, 5.0);
        const cdouble q = (i % 2 == 0) ? cdouble(0.0, m) : cdouble(m, 0.0);
        const TransferMatrix M = point_interaction_matrix(node, q);
        // Exact value 1; rounding of the theta/g combinations reaches ~2e-13
        // for strong couplings, so allow one decade above that.
        CHECK(std::abs(M.det() - 1.0) <= 1e-12);

        // Independent oracle: the matrix must realise the amplitude/slope jump
        //   psi+ = theta psi-,  psi'+ = psi'-/theta + g psi-.
        const cdouble cp{0.4, 0.9}, cm{1.3, -0.5};
        cdouble psi_m, dpsi_m, psi_p, dpsi_p;
        to_psi(cp, cm, q, psi_m, dpsi_m);
        to_psi(M.t11 * cp + M.t12 * cm, M.t21 * cp + M.t22 * cm, q, psi_p, dpsi_p);
        const double theta = node.theta();
        const double gj = node.slope_coupling();
        CHECK(std::abs(psi_p - theta * psi_m) <= 1e-12 * std::max(1.0, std::abs(psi_m)));
        CHECK(std::abs(dpsi_p - (dpsi_m / theta + gj * psi_m)) <=
              1e-11 * std::max(1.0, std::abs(dpsi_m)));
    }
    // A trivial node is the identity.
    CHECK(matrices_close(point_interaction_matrix(PointInteraction{}, 1.0i), TransferMatrix{},
                         1e-16));
}

TEST_CASE("cell trace reproduces the closed-form dirac dispersion") {
    auto g = testutil::rng(33);
    for (int i = 0; i < 400; ++i) {
        const double p = testutil::uniform(g, 0.1, 20.0);
        const double L = testutil::uniform(g, 0.5, 2.0);
        const double xi = testutil::uniform(g, 0.05, 20.0);
        const double E = xi * xi / (2.0 * L * L);
        const TransferMatrix T = cell_transfer_matrix(make_dirac_comb(p, L), E);
        const double F = dirac_rhs(xi, p);
        CHECK(std::abs(bloch_rhs_from_trace(T) - F) <= 1e-12 * std::max(1.0, std::abs(F)));
        CHECK(std::abs(T.det() - 1.0) <= 1e-10); // unimodularity invariant
    }
}

TEST_CASE("cell trace reproduces the closed-form delta-delta' dispersion") {
    // This pins the sin-coefficient convention of the mixed comb: the 2x2
    // route is an independent derivation of the same band equation.
    auto g = testutil::rng(34);
    for (double bt = -0.9; bt <= 0.9001; bt += 0.1) {
        for (double p : {0.1, 1.0, 5.0, 10.0}) {
            for (int i = 0; i < 25; ++i) {
                const double xi = testutil::uniform(g, 0.05, 15.0);
                const double E = xi * xi / 2.0;
                const TransferMatrix T =
                    cell_transfer_matrix(make_delta_delta_prime_comb(p, bt, 1.0), E);
                const double F = delta_delta_prime_rhs(xi, p, bt);
                CHECK(std::abs(bloch_rhs_from_trace(T) - F) <=
                      1e-12 * std::max(1.0, std::abs(F)));
            }
        }
    }
}

TEST_CASE("rectangular cell: frozen entries and symmetry") {
    const UnitCell cell = make_kronig_penney(1.0, 1.0, 8.0);
    const TransferMatrix T = cell_transfer_matrix(cell, 2.0);
    CHECK(std::abs(T.t11 - cdouble(1.7238076417692936, 18.373394572143475)) <= 1e-12 * 19.0);
    CHECK(std::abs(T.det() - 1.0) <= 1e-12);
    CHECK(std::abs(T.trace() / 2.0 - kronig_penney_rhs(2.0, 1.0, 1.0, 8.0)) <= 1e-12 * 2.0);

    // Real potential, oscillatory outer basis: t22 = conj(t11), t21 = conj(t12),
    // below and above the barrier top.
    for (double E : {2.0, 2.1, 12.0, 30.0}) {
        const TransferMatrix M = cell_transfer_matrix(cell, E);
        const double scale = sup_norm(M);
        CHECK(std::abs(M.t22 - std::conj(M.t11)) <= 1e-12 * scale);
        CHECK(std::abs(M.t21 - std::conj(M.t12)) <= 1e-12 * scale);
        CHECK(std::abs(M.det() - 1.0) <= 1e-11 * std::max(1.0, scale));
    }
}

TEST_CASE("cell matrix equals the explicit interface/propagation chain") {
    // Away from thresholds the folded per-segment blocks must agree with the
    // naive product I(q2->q1) P(q2) I(q1->q2) P(q1) across one period.
    auto g = testutil::rng(35);
    for (int i = 0; i < 200; ++i) {
        const double a = testutil::uniform(g, 0.2, 2.0);
        const double b = testutil::uniform(g, 0.2, 2.0);
        const double U_b = testutil::uniform(g, 0.5, 50.0);
        double E = testutil::uniform(g, 0.05, 60.0);
        if (std::abs(E - U_b) < 1e-3) E += 2e-3; // keep clear of the threshold
        const UnitCell cell = make_kronig_penney(a, b, U_b);
        const PotentialSegment s1{a, 0.0}, s2{b, U_b};
        const cdouble q1 = segment_exponent(s1, E);
        const cdouble q2 = segment_exponent(s2, E);
        const TransferMatrix chain = interface_matrix(q2, q1) * propagation_matrix(q2, b) *
                                     interface_matrix(q1, q2) * propagation_matrix(q1, a);
        CHECK(matrices_close(cell_transfer_matrix(cell, E), chain, 1e-11));
    }
}

TEST_CASE("segment exponent picks the right branch") {
    CHECK(std::abs(segment_exponent(PotentialSegment{1.0, 0.0}, 2.0) - 2.0i) <= 1e-15);
    CHECK(std::abs(segment_exponent(PotentialSegment{1.0, 8.0}, 2.0) -
                   cdouble(std::sqrt(12.0), 0.0)) <= 1e-15);
    CHECK(std::abs(segment_exponent(PotentialSegment{1.0, 8.0}, 8.0)) == 0.0);
}

TEST_CASE("in-band powers follow the Chebyshev trace identity") {
    // tr(T^N)/2 = cos(N kL) whenever |tr T/2| <= 1.
    const UnitCell cell = make_kronig_penney(1.0, 1.0, 8.0);
    for (double E : {2.1, 12.0}) {
        const TransferMatrix T = cell_transfer_matrix(cell, E);
        const double F = bloch_rhs_from_trace(T);
        REQUIRE(std::abs(F) < 1.0);
        const double kL = std::acos(F);
        for (unsigned N = 1; N <= 8; ++N) {
            const TransferMatrix TN = matrix_power(T, N);
            CHECK(std::abs(TN.trace() / 2.0 - std::cos(N * kL)) <= 1e-9);
            CHECK(std::abs(TN.det() - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("eigen decomposition") {
    auto check_eigen = [](const TransferMatrix& T) {
        const TransferEigen eig = eigen_decompose(T);
        const double scale = std::max(1.0, sup_norm(T));
        // Eigenvalue product and sum match det and trace.
        CHECK(std::abs(eig.mu_small * eig.mu_large - T.det()) <= 1e-12 * scale * scale);
        CHECK(std::abs(eig.mu_small + eig.mu_large - T.trace()) <= 1e-12 * scale);
        CHECK(std::abs(eig.mu_small) <= std::abs(eig.mu_large) * (1.0 + 1e-12));
        // v_small is an eigenvector of mu_small.
        const cdouble r1 = T.t11 * eig.v_small[0] + T.t12 * eig.v_small[1];
        const cdouble r2 = T.t21 * eig.v_small[0] + T.t22 * eig.v_small[1];
        const double vn = std::max(std::abs(eig.v_small[0]), std::abs(eig.v_small[1]));
        REQUIRE(vn > 0.0);
        CHECK(std::abs(r1 - eig.mu_small * eig.v_small[0]) <= 1e-10 * scale * vn);
        CHECK(std::abs(r2 - eig.mu_small * eig.v_small[1]) <= 1e-10 * scale * vn);
    };
    const UnitCell kp = make_kronig_penney(1.0, 1.0, 8.0);
    check_eigen(cell_transfer_matrix(kp, 2.0));  // gap: real eigenvalue pair
    check_eigen(cell_transfer_matrix(kp, 12.0)); // band: unimodular pair
    check_eigen(cell_transfer_matrix(make_dirac_comb(10.0, 1.0), 3.0));
    // In a gap the small eigenvalue is strictly inside the unit circle.
    const TransferEigen gap = eigen_decompose(cell_transfer_matrix(kp, 2.0));
    CHECK(std::abs(gap.mu_small) < 1.0);
    CHECK(std::abs(gap.mu_large) > 1.0);
    CHECK(std::abs(std::imag(gap.mu_small)) <= 1e-12 * std::abs(gap.mu_small));
}

TEST_CASE("threshold energy stays finite and matches the smooth dispersion") {
    const UnitCell cell = make_kronig_penney(1.0, 1.0, 8.0);
    const TransferMatrix T = cell_transfer_matrix(cell, 8.0); // grazing barrier top
    CHECK(std::isfinite(std::abs(T.t11)));
    CHECK(std::abs(T.det() - 1.0) <= 1e-12);
    CHECK(std::abs(bloch_rhs_from_trace(T) - kronig_penney_rhs(8.0, 1.0, 1.0, 8.0)) <= 1e-12);
    // Two-sided continuity of the full matrix through the threshold.
    const TransferMatrix Tm = cell_transfer_matrix(cell, 8.0 - 1e-9);
    const TransferMatrix Tp = cell_transfer_matrix(cell, 8.0 + 1e-9);
    CHECK(matrices_close(Tm, T, 1e-7));
    CHECK(matrices_close(Tp, T, 1e-7));
}

TEST_CASE("trace consistency guard rejects a corrupted matrix") {
    TransferMatrix T = cell_transfer_matrix(make_dirac_comb(10.0, 1.0), 3.0);
    CHECK_NOTHROW(bloch_rhs_from_trace(T));
    T.t11 += cdouble(0.0, 1e-4);
    CHECK_THROWS_AS(bloch_rhs_from_trace(T), NumericalError);
}

} // TEST_SUITE
