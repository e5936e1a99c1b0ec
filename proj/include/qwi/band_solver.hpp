#pragma once

#include <functional>
#include <vector>

namespace qwi {

// The band equation cos(kL) = F(xi) with xi = sqrt(2E) L.  The solver only
// sees F, so it works identically for every lattice model and for either
// analysis route (closed-form rhs or transfer-matrix trace).
using DispersionFn = std::function<double(double xi)>;

struct BandEdge {
    double xi = 0.0;
    int sign = 0; // +1: F crosses +1,  -1: F crosses -1
};

struct Band {
    int ordinal = 0; // 1-based, counted upward in xi
    double xi_lo = 0.0, xi_hi = 0.0;
};

// Gap with its zone index n: inside, k L = i lambda L + pi n and
// sign(F) = (-1)^n.
struct GapZone {
    int n = 0;
    int sign = 0;
    double xi_lo = 0.0, xi_hi = 0.0;
};

// Point where |F| reaches 1 tangentially (closed gap): bands touch, no gap
// opens.  Reported separately from edges.
struct TouchPoint {
    double xi = 0.0;
    int sign = 0;
};

struct BandDiagram {
    std::vector<Band> bands;
    std::vector<GapZone> gaps;
    std::vector<TouchPoint> touches;
    double xi_max = 0.0;
    int grid_per_pi = 0; // grid that passed the stability check
};

// All crossings of F with +-1 on (0, xi_max], bisected to machine precision.
// The scan grid is doubled until the edge set is stable (same count, shifts
// below 1e-10); NumericalError if that never happens.
std::vector<BandEdge> find_band_edges(const DispersionFn& F, double xi_max,
                                      int grid_per_pi = 4096);

// Edges -> bands, gaps with zone indices, and tangential touch points.
// Intervals are classified by |F| at their midpoint (|F| <= 1: band).
BandDiagram build_diagram(const DispersionFn& F, double xi_max,
                          int grid_per_pi = 4096);

// E(k) samples across one band: k = arccos(F)/L, E = xi^2/(2 L^2).
struct EkSample {
    double k = 0.0, E = 0.0;
};
struct EkCurve {
    std::vector<EkSample> samples;
    bool monotonic = false; // E strictly monotonic along increasing k
};
EkCurve ek_curve(const DispersionFn& F, const Band& band, double L,
                 int n_samples = 64);

} // namespace qwi
