#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scq/junction.hpp"
#include "scq/netlist.hpp"

namespace scq::quantize {

// Linear modes plus the zero-point phase fluctuation of every junction in
// every mode. Rows of phi_zpf follow junction_names, columns follow omegas.
struct ModeSet {
    std::vector<double> omegas;  // rad/s, ascending
    Eigen::MatrixXd phi_zpf;
    std::vector<std::string> junction_names;

    std::size_t mode_count() const { return omegas.size(); }
    std::size_t junction_count() const { return junction_names.size(); }
    void validate() const;
    // Subset of modes (columns) and junctions (rows), order as given.
    ModeSet select(const std::vector<int>& modes, const std::vector<int>& junctions) const;
};

using ImpedanceFunction = std::function<Eigen::MatrixXcd(double)>;

struct BbqOptions {
    int grid_points = 2000;
    // Offset used around each pole, relative to its frequency.
    double relative_step = 1e-6;
};

// Poles of the junction-port impedance Z(omega) inside [band_lo, band_hi].
// Each pole is a zero of Im[1/Z_jj]; its residue gives
// Z_eff = 2 / (omega_n dIm[1/Z_jj]/domega) and phi^2 = (2 e^2 / hbar) Z_eff.
// Throws PoleNotBracketed when nothing is found, NegativeEffectiveImpedance
// when a residue has the wrong sign.
ModeSet bbq_extract(const ImpedanceFunction& Z, const std::vector<std::string>& junction_names,
                    double band_lo, double band_hi, const BbqOptions& options = {});

// Same, with Z taken from nodal analysis of the netlist at its junctions.
ModeSet bbq_extract(const tline::Netlist& netlist, tline::ConductorModel model, double band_lo,
                    double band_hi, const BbqOptions& options = {});

struct EprOptions {
    int initial_cells = 32;
    int max_cells = 512;
    double frequency_tolerance = 1e-5;      // relative change on doubling cells
    double participation_tolerance = 1e-4;  // absolute change on doubling cells
    int kinetic_iterations = 4;
};

struct EprResult {
    ModeSet modes;
    Eigen::MatrixXd participation;  // junction x mode
    int cells_per_segment = 0;  // in the longest segment
};

// Normal modes of the lumped equivalent (transmission lines cut into LC cells,
// doubled until converged). p(j,n) is the junction's share of the mode's
// inductive energy, kinetic inductance counted in the total only, and
// phi^2 = p hbar omega / (2 E_J). DegenerateModes when two modes in the band
// cannot be told apart.
EprResult epr_extract(const tline::Netlist& netlist, tline::ConductorModel model, double band_lo,
                      double band_hi, const EprOptions& options = {});

struct HamiltonianSpec {
    ModeSet modes;
    std::vector<JunctionSpec> junctions;  // aligned with modes.junction_names
    int expansion_order = 4;              // highest power of phi kept
    std::vector<int> truncation;          // Fock levels per mode

    void validate() const;
};

// H = sum_n w_n a_n^dag a_n - sum_j E_j sum_{k>=2} (-1)^k/(2k)! phi_j^{2k},
// phi_j = sum_n phi_zpf(j,n) (a_n^dag + a_n), truncated at expansion_order.
// TruncationTooSmall when a mode keeps fewer than 3 levels.
HamiltonianSpec assemble_hamiltonian(const ModeSet& modes, const std::vector<JunctionSpec>& junctions,
                                     int expansion_order, const std::vector<int>& truncation);

HamiltonianSpec assemble_hamiltonian(const ModeSet& modes, const std::vector<JunctionSpec>& junctions,
                                     int expansion_order = 4, int truncation = 10);

}  // namespace scq::quantize
