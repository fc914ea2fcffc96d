#include <string>

#include "scq/error.hpp"
#include "scq/quantize.hpp"

namespace scq::quantize {

void HamiltonianSpec::validate() const
{
    modes.validate();
    if (junctions.size() != modes.junction_count())
        throw Error(ErrorKind::InvalidInput, "one JunctionSpec per phi_zpf row is required");
    for (const auto& j : junctions)
        j.validate();
    if (expansion_order < 2 || expansion_order % 2 != 0 || expansion_order > 12)
        throw Error(ErrorKind::InvalidInput, "expansion order must be even, between 2 and 12");
    if (truncation.size() != modes.mode_count())
        throw Error(ErrorKind::InvalidInput, "one truncation entry per mode is required");
    for (int d : truncation) {
        if (d < 3)
            throw Error(ErrorKind::TruncationTooSmall,
                        "every mode needs at least 3 Fock levels, got " + std::to_string(d));
    }
}

HamiltonianSpec assemble_hamiltonian(const ModeSet& modes, const std::vector<JunctionSpec>& junctions,
                                     int expansion_order, const std::vector<int>& truncation)
{
    HamiltonianSpec h{modes, junctions, expansion_order, truncation};
    h.validate();
    return h;
}

HamiltonianSpec assemble_hamiltonian(const ModeSet& modes, const std::vector<JunctionSpec>& junctions,
                                     int expansion_order, int truncation)
{
    return assemble_hamiltonian(modes, junctions, expansion_order,
                                std::vector<int>(modes.mode_count(), truncation));
}

}  // namespace scq::quantize
