#pragma once

#include <map>
#include <string>
#include <vector>

#include "scq/constants.hpp"
#include "scq/fock.hpp"
#include "scq/netlist.hpp"
#include "scq/quantize.hpp"

namespace scq::pipeline {

enum class Method { EPR, BBQ };

Method parse_method(const std::string& text);
std::string to_string(Method m);
tline::ConductorModel parse_model(const std::string& text);
std::string to_string(tline::ConductorModel m);

struct QuantizeOptions {
    Method method = Method::EPR;
    tline::ConductorModel model = tline::ConductorModel::IBC;
    double band_lo = constants::ghz_to_omega(1.0);
    double band_hi = constants::ghz_to_omega(12.0);
    // Order 6 is the lowest truncation of the cosine that is bounded below,
    // so the Fock-space results converge with truncation.
    int expansion_order = 6;
    int qubit_dims = 15;
    int resonator_dims = 10;
    fock::ConvergenceOptions convergence;
    unsigned workers = 1;
};

// Linear modes and phi_zpf of the whole netlist, junctions kept linear.
quantize::ModeSet linear_modes(const tline::Netlist& netlist, const QuantizeOptions& options);

struct PairResult {
    std::string junction;
    int qubit_mode = 0;      // index into the full ModeSet
    int resonator_mode = 0;
    std::vector<int> dims;   // qubit, resonator
    double omega_q = 0.0;    // rad/s, renormalized
    double alpha_q = 0.0;
    double omega_r = 0.0;
    double chi = 0.0;        // (E11 - E10) - (E01 - E00)
};

// Qubit mode of junction j: the mode with the largest phi_zpf(j, n); its
// readout resonator: the next largest. Each pair is diagonalized on its own
// with junction j only.
PairResult quantize_pair(const quantize::ModeSet& modes, const tline::Netlist& netlist,
                         const std::string& junction_element, const QuantizeOptions& options,
                         bool converge = true);

std::vector<PairResult> quantize_pairs(const tline::Netlist& netlist, const QuantizeOptions& options);

// Qubit (omega, alpha) of one junction inside the device, at fixed truncation.
fock::FitEvaluator device_evaluator(const tline::Netlist& netlist, const std::string& junction_element,
                                    const QuantizeOptions& options);

struct QubitTarget {
    double omega = 0.0;  // rad/s
    double alpha = 0.0;  // rad/s
};

// Refits every targeted junction in device context; junction elements keyed
// by element name. Returns the updated netlist.
tline::Netlist fit_device_junctions(const tline::Netlist& netlist,
                                    const std::map<std::string, QubitTarget>& targets,
                                    const QuantizeOptions& options);

}  // namespace scq::pipeline
