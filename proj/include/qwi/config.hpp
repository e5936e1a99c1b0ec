#pragma once

#include <optional>
#include <string>

#include "qwi/lattice.hpp"

namespace qwi {

// Lattice description read from a JSON config file.  Keys:
//   model       "dirac" | "delta-delta-prime" | "kronig-penney"   (required)
//   p           node strength p = alpha L            (dirac, delta-delta-prime)
//   beta_tilde  delta' parameter in (-1, 1)          (delta-delta-prime)
//   a, b, U_b   stretch widths and barrier height    (kronig-penney)
//   L           period; default 1, must equal a + b for kronig-penney
//   U_E         vacuum barrier height (surface-state commands only)
//   eta         edge delta strength (surface-state commands, default 0)
// Unknown keys are rejected with a message naming the key.
struct ModelConfig {
    enum class Kind { Dirac, DeltaDeltaPrime, KronigPenney };
    Kind kind = Kind::Dirac;
    double p = 0.0;
    double beta_tilde = 0.0;
    double a = 0.0, b = 0.0, U_b = 0.0;
    double L = 1.0;
    std::optional<double> U_E;
    double eta = 0.0;

    std::string model_name() const;
    UnitCell cell() const;

    // Semi-infinite crystal for surface-state work: requires the dirac model
    // and a positive U_E.
    SemiInfiniteLattice semi_infinite() const;
};

ModelConfig parse_model_config(const std::string& json_text);
ModelConfig load_model_config(const std::string& path);

} // namespace qwi
