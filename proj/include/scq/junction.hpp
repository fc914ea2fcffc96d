#pragma once

#include <string>

#include "scq/constants.hpp"

namespace scq::quantize {

// Linearized Josephson junction: L_J in parallel with C_J.
struct JunctionSpec {
    std::string name;
    double L_J = 0.0;
    double C_J = 0.0;

    // Josephson energy in J.
    double E_J() const { return constants::phi0_reduced * constants::phi0_reduced / L_J; }
    // Same, as an angular frequency E_J / hbar.
    double E_J_omega() const { return E_J() / constants::hbar; }

    void validate() const;
};

double inductance_from_EJ(double E_J);

}  // namespace scq::quantize
