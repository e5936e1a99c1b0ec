#include "qwi/lattice.hpp"

#include <cmath>
#include <string>

namespace qwi {

UnitCell::UnitCell(PointInteraction node, std::vector<PotentialSegment> segments,
                   double period_L)
    : node_(node), segments_(std::move(segments)), period_L_(period_L) {
    if (!(period_L_ > 0.0))
        throw ConfigError("unit cell period must be positive");
    if (std::abs(node_.beta_tilde) >= 1.0)
        throw ConfigError("beta_tilde must lie in (-1, 1), got " +
                          std::to_string(node_.beta_tilde));
    if (segments_.empty())
        throw ConfigError("unit cell needs at least one potential segment");
    double total = 0.0;
    for (const auto& seg : segments_) {
        if (!(seg.width > 0.0))
            throw ConfigError("segment widths must be positive");
        if (!std::isfinite(seg.height))
            throw ConfigError("segment heights must be finite");
        total += seg.width;
    }
    if (std::abs(total - period_L_) > 1e-12 * period_L_)
        throw ConfigError("segment widths must sum to the period");
}

UnitCell make_dirac_comb(double p, double L) {
    return UnitCell{PointInteraction{p / L, 0.0}, {PotentialSegment{L, 0.0}}, L};
}

UnitCell make_delta_delta_prime_comb(double p, double beta_tilde, double L) {
    return UnitCell{PointInteraction{-p / L, beta_tilde},
                    {PotentialSegment{L, 0.0}}, L};
}

UnitCell make_kronig_penney(double a, double b, double U_b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw ConfigError("kronig-penney stretches a, b must be positive");
    return UnitCell{PointInteraction{},
                    {PotentialSegment{a, 0.0}, PotentialSegment{b, U_b}}, a + b};
}

} // namespace qwi
