#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scq/netlist.hpp"

namespace scq::tline {

using cplx = std::complex<double>;

// Node pair a-b; index -1 is ground.
struct Terminal {
    int a = -1;
    int b = -1;
};

struct NetworkOptions {
    ConductorModel model = ConductorModel::IBC;
    // Open-circuit every junction (high-power punch-out limit).
    bool open_junctions = false;
    // Terminate Port elements in their reference impedance.
    bool terminate_ports = true;
    // Series resistance on every inductive branch, regularizes exact poles.
    double series_resistance = 1e-6;
};

// Frequency-domain nodal analysis. Transmission-line segments enter as exact
// two-port admittances, junctions as their linear L_J || C_J part.
class LinearNetwork {
public:
    LinearNetwork(Netlist netlist, NetworkOptions options);

    const Netlist& netlist() const { return netlist_; }
    const NetworkOptions& options() const { return options_; }
    int size() const { return static_cast<int>(netlist_.nodes.size()); }

    Terminal terminal_of(const Element& e) const;

    Eigen::MatrixXcd admittance(double omega) const;

    // Z_jk = e_j^T Y^-1 e_k for the given terminals.
    Eigen::MatrixXcd impedance_matrix(double omega, const std::vector<Terminal>& ports) const;

    // Per-length line parameters of a geometry at omega under the configured model.
    LineParams line_params(const CpwGeometry& geom, double omega) const;

private:
    Netlist netlist_;
    NetworkOptions options_;
};

struct PortImpedancePoint {
    double omega = 0.0;
    Eigen::MatrixXcd Z;
};

// Impedance matrix seen at the named junctions, junctions kept as their linear part.
std::vector<PortImpedancePoint> port_impedance(const Netlist& netlist,
                                               const std::vector<std::string>& junction_names,
                                               const std::vector<double>& omega_grid,
                                               ConductorModel model, unsigned workers = 1);

struct TwoPortResponse {
    std::vector<double> omega;
    std::vector<cplx> S21;
    std::vector<cplx> S11;
};

// S-parameters between two Port elements; every other port stays terminated.
TwoPortResponse transmission_spectrum(const Netlist& netlist, const std::string& in_port,
                                      const std::string& out_port,
                                      const std::vector<double>& omega_grid, ConductorModel model,
                                      unsigned workers = 1);

// Same with explicit network options, e.g. series_resistance = 0 for an exact
// passivity check. Ports are always terminated.
TwoPortResponse transmission_spectrum(const Netlist& netlist, const std::string& in_port,
                                      const std::string& out_port,
                                      const std::vector<double>& omega_grid,
                                      const NetworkOptions& options, unsigned workers = 1);

// Local minima of |S21|, refined between grid points.
std::vector<double> resonance_dips(const TwoPortResponse& response,
                                   const std::function<double(double)>& magnitude, double depth = 0.5);

// |S21|(omega) evaluated directly, for dip refinement.
std::function<double(double)> s21_magnitude(const Netlist& netlist, const std::string& in_port,
                                            const std::string& out_port, ConductorModel model);

// Zeros of B(omega) = Im[1/Z] on (lo, hi), i.e. poles of Z for a lossless
// network. Intervals where B drops contain a pole of B and are bisected, so
// close pole/zero pairs inside one grid cell are still resolved.
std::vector<double> susceptance_zeros(const std::function<double(double)>& B, double lo, double hi,
                                      int grid_points);

struct ResonatorFrequency {
    std::string element;
    double omega = 0.0;
};

// Resonance of each quarter/half-wave segment, found as the pole of the
// impedance at its open node nearest the uncoupled estimate. `open_junctions`
// gives the bare (punch-out) frequencies, otherwise the linearly loaded ones.
std::vector<ResonatorFrequency> resonator_frequencies(const Netlist& netlist, ConductorModel model,
                                                      bool open_junctions);

std::vector<ResonatorFrequency> bare_resonator_frequencies(const Netlist& netlist,
                                                           ConductorModel model);

}  // namespace scq::tline
