#include "qwi/bloch_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "qwi/errors.hpp"

namespace qwi {

BlochMatchMatrix classical_match_matrix(double E, cdouble k, double a, double b,
                                        double U_b) {
    if (!(E > 0.0) || !(a > 0.0) || !(b > 0.0))
        throw NumericalError("classical_match_matrix: need E, a, b > 0");
    const cdouble i{0.0, 1.0};
    const cdouble k1{std::sqrt(2.0 * E), 0.0};
    const cdouble k2 = std::sqrt(cdouble{2.0 * (E - U_b), 0.0}); // i kappa below U_b

    // Periodic factors u = e^{+-i k_j x} e^{-i k x} carry the combinations
    const cdouble d1 = k1 - k, s1 = k1 + k; // region I exponents
    const cdouble d2 = k2 - k, s2 = k2 + k; // region II exponents

    BlochMatchMatrix M;
    // u and u' continuity at the interface x = 0:
    M.m[0] = {1.0, 1.0, -1.0, -1.0};
    M.m[1] = {k1, -k1, -k2, k2};
    // Periodicity of u: region I evaluated at x = a must equal region II
    // evaluated at x = -b (the same physical cell boundary one period apart).
    const cdouble eA = std::exp(i * d1 * a);
    const cdouble eB = std::exp(-i * s1 * a);
    const cdouble eC = std::exp(-i * d2 * b);
    const cdouble eD = std::exp(i * s2 * b);
    M.m[2] = {eA, eB, -eC, -eD};
    M.m[3] = {d1 * eA, -s1 * eB, -d2 * eC, s2 * eD};
    return M;
}

cdouble det4(const BlochMatchMatrix& M) {
    // LU decomposition with partial pivoting on a local copy.
    std::array<std::array<cdouble, 4>, 4> a = M.m;
    cdouble det{1.0, 0.0};
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        if (a[col][col] == cdouble{0.0, 0.0}) return cdouble{0.0, 0.0};
        det *= a[col][col];
        for (int r = col + 1; r < 4; ++r) {
            const cdouble f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return det;
}

double scaled_residual(const BlochMatchMatrix& M) {
    double biggest = 0.0;
    for (const auto& row : M.m)
        for (const auto& e : row) biggest = std::max(biggest, std::abs(e));
    if (biggest == 0.0) return 0.0;
    const double d = std::abs(det4(M));
    return d / (biggest * biggest * biggest * biggest);
}

} // namespace qwi
