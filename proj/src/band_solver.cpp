#include "qwi/band_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwi/dispersion.hpp"
#include "qwi/errors.hpp"

namespace qwi {

namespace {

constexpr double kEdgeFloorXi = 1e-9; // stand-in for the xi -> 0 limit point

double bisect_crossing(const DispersionFn& g, double lo, double hi, double g_lo) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // interval at machine resolution
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((g_lo < 0.0) == (gm < 0.0)) {
            lo = mid;
            g_lo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Minimise |g| on [lo, hi] by ternary search (used for tangential touches,
// where g keeps one sign and dips to ~0).
double ternary_min(const DispersionFn& g, double lo, double hi) {
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * std::max(1.0, hi); ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (std::abs(g(m1)) <= std::abs(g(m2)))
            hi = m2;
        else
            lo = m1;
    }
    return 0.5 * (lo + hi);
}

struct ScanResult {
    std::vector<BandEdge> edges;
    std::vector<TouchPoint> touches;
};

ScanResult scan_grid(const DispersionFn& F, double xi_max, int grid_per_pi) {
    const double h = M_PI / grid_per_pi;
    const long n_steps = static_cast<long>(std::ceil(xi_max / h));
    ScanResult out;

    std::vector<double> xs, fs;
    xs.reserve(n_steps + 1);
    xs.push_back(kEdgeFloorXi);
    for (long i = 1; i <= n_steps; ++i) xs.push_back(std::min(i * h, xi_max));
    fs.reserve(xs.size());
    for (double x : xs) fs.push_back(F(x));

    const auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
    for (int sign : {+1, -1}) {
        // Crossings of g = F - sign.
        for (std::size_t i = 1; i < xs.size(); ++i) {
            const double gp = fs[i - 1] - sign;
            const double gc = fs[i] - sign;
            if (gc == 0.0) {
                // Exact zero at a grid sample: an edge only if g changes sign
                // across it; a tangential touch keeps one sign on both sides
                // and is left to the touch detector below.
                double after = 0.0;
                for (std::size_t j = i + 1; j < xs.size() && after == 0.0; ++j)
                    after = fs[j] - sign;
                if (sgn(gp) * sgn(after) < 0)
                    out.edges.push_back(BandEdge{xs[i], sign});
            } else if (gp != 0.0 && (gp < 0.0) != (gc < 0.0)) {
                auto g = [&](double x) { return F(x) - sign; };
                out.edges.push_back(
                    BandEdge{bisect_crossing(g, xs[i - 1], xs[i], gp), sign});
            }
        }
        // Tangential touches: interior local minimum of |g| with no sign
        // change and a minimum value compatible with a double root.
        for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
            const double gm = fs[i - 1] - sign, gc = fs[i] - sign,
                         gn = fs[i + 1] - sign;
            if (std::abs(gc) > 1e-3) continue;
            if (std::abs(gc) > std::abs(gm) || std::abs(gc) > std::abs(gn))
                continue;
            // Neighbours must share a sign; the centre sample may be an exact
            // zero but must not have crossed to the opposite sign.
            if (sgn(gm) * sgn(gn) <= 0) continue;
            if (sgn(gc) != 0 && sgn(gc) != sgn(gm)) continue;
            auto g = [&](double x) { return F(x) - sign; };
            const double x_min = ternary_min(g, xs[i - 1], xs[i + 1]);
            if (std::abs(g(x_min)) < 1e-10) {
                if (out.touches.empty() ||
                    std::abs(out.touches.back().xi - x_min) > h)
                    out.touches.push_back(TouchPoint{x_min, sign});
            }
        }
    }
    std::sort(out.edges.begin(), out.edges.end(),
              [](const BandEdge& a, const BandEdge& b) { return a.xi < b.xi; });
    std::sort(out.touches.begin(), out.touches.end(),
              [](const TouchPoint& a, const TouchPoint& b) { return a.xi < b.xi; });
    return out;
}

bool edge_sets_agree(const std::vector<BandEdge>& a,
                     const std::vector<BandEdge>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].sign != b[i].sign) return false;
        if (std::abs(a[i].xi - b[i].xi) > 1e-10 * std::max(1.0, a[i].xi))
            return false;
    }
    return true;
}

ScanResult stable_scan(const DispersionFn& F, double xi_max, int grid_per_pi,
                       int* grid_used) {
    ScanResult coarse = scan_grid(F, xi_max, grid_per_pi);
    for (int grid = 2 * grid_per_pi; grid <= (1 << 22); grid *= 2) {
        ScanResult fine = scan_grid(F, xi_max, grid);
        if (edge_sets_agree(coarse.edges, fine.edges)) {
            if (grid_used) *grid_used = grid;
            return fine;
        }
        coarse = std::move(fine);
    }
    throw NumericalError("find_band_edges: edge set did not stabilise under "
                         "grid refinement (refinement error)");
}

} // namespace

std::vector<BandEdge> find_band_edges(const DispersionFn& F, double xi_max,
                                      int grid_per_pi) {
    if (!(xi_max > 0.0) || grid_per_pi < 2)
        throw NumericalError("find_band_edges: need xi_max > 0 and a grid");
    return stable_scan(F, xi_max, grid_per_pi, nullptr).edges;
}

BandDiagram build_diagram(const DispersionFn& F, double xi_max,
                          int grid_per_pi) {
    if (!(xi_max > 0.0) || grid_per_pi < 2)
        throw NumericalError("build_diagram: need xi_max > 0 and a grid");
    int grid_used = grid_per_pi;
    const ScanResult scan = stable_scan(F, xi_max, grid_per_pi, &grid_used);

    BandDiagram out;
    out.xi_max = xi_max;
    out.grid_per_pi = grid_used;
    out.touches = scan.touches;

    std::vector<double> cuts;
    cuts.push_back(0.0);
    for (const auto& e : scan.edges) cuts.push_back(e.xi);
    cuts.push_back(xi_max);

    int band_ordinal = 0;
    bool have_prev_gap = false;
    int prev_n = 0, prev_sign = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (hi - lo < 1e-12) continue;
        const double mid = std::max(0.5 * (lo + hi), kEdgeFloorXi);
        const double Fm = F(mid);
        if (classify(Fm) == ZoneKind::Band) {
            out.bands.push_back(Band{++band_ordinal, lo, hi});
        } else {
            const int sign = (Fm > 0.0) ? +1 : -1;
            int n;
            if (!have_prev_gap) {
                n = (sign > 0) ? 0 : 1; // (-1)^n = sign of F inside the gap
            } else {
                n = prev_n + ((sign != prev_sign) ? 1 : 2);
            }
            out.gaps.push_back(GapZone{n, sign, lo, hi});
            have_prev_gap = true;
            prev_n = n;
            prev_sign = sign;
        }
    }
    return out;
}

EkCurve ek_curve(const DispersionFn& F, const Band& band, double L,
                 int n_samples) {
    if (n_samples < 2 || !(L > 0.0))
        throw NumericalError("ek_curve: need n_samples >= 2 and L > 0");
    EkCurve out;
    out.samples.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double xi =
            band.xi_lo + (band.xi_hi - band.xi_lo) * i / (n_samples - 1.0);
        const double Fx = std::clamp(F(std::max(xi, kEdgeFloorXi)), -1.0, 1.0);
        out.samples.push_back(EkSample{std::acos(Fx) / L, xi * xi / (2.0 * L * L)});
    }
    std::sort(out.samples.begin(), out.samples.end(),
              [](const EkSample& a, const EkSample& b) { return a.k < b.k; });
    bool inc = true, dec = true;
    for (std::size_t i = 1; i < out.samples.size(); ++i) {
        if (out.samples[i].E <= out.samples[i - 1].E) inc = false;
        if (out.samples[i].E >= out.samples[i - 1].E) dec = false;
    }
    out.monotonic = inc || dec;
    return out;
}

} // namespace qwi
