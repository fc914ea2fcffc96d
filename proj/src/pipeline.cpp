#include <algorithm>
#include <cmath>

#include "scq/error.hpp"
#include "scq/parallel.hpp"
#include "scq/pipeline.hpp"

namespace scq::pipeline {

Method parse_method(const std::string& text)
{
    if (text == "epr" || text == "EPR")
        return Method::EPR;
    if (text == "bbq" || text == "BBQ")
        return Method::BBQ;
    throw Error(ErrorKind::InvalidInput, "unknown method '" + text + "' (epr|bbq)");
}

std::string to_string(Method m) { return m == Method::EPR ? "epr" : "bbq"; }

tline::ConductorModel parse_model(const std::string& text)
{
    if (text == "pec" || text == "PEC")
        return tline::ConductorModel::PEC;
    if (text == "ibc" || text == "IBC")
        return tline::ConductorModel::IBC;
    throw Error(ErrorKind::InvalidInput, "unknown conductor model '" + text + "' (pec|ibc)");
}

std::string to_string(tline::ConductorModel m) { return m == tline::ConductorModel::PEC ? "pec" : "ibc"; }

quantize::ModeSet linear_modes(const tline::Netlist& netlist, const QuantizeOptions& options)
{
    if (options.method == Method::BBQ)
        return quantize::bbq_extract(netlist, options.model, options.band_lo, options.band_hi);
    return quantize::epr_extract(netlist, options.model, options.band_lo, options.band_hi).modes;
}

namespace {

int row_of(const quantize::ModeSet& modes, const std::string& junction)
{
    const auto it = std::find(modes.junction_names.begin(), modes.junction_names.end(), junction);
    if (it == modes.junction_names.end())
        throw Error(ErrorKind::InvalidInput, "junction element '" + junction + "' not in the mode set");
    return static_cast<int>(it - modes.junction_names.begin());
}

}  // namespace

PairResult quantize_pair(const quantize::ModeSet& modes, const tline::Netlist& netlist,
                         const std::string& junction_element, const QuantizeOptions& options, bool converge)
{
    const int j = row_of(modes, junction_element);
    if (modes.mode_count() < 2)
        throw Error(ErrorKind::InvalidInput, "pairwise quantization needs at least two modes in the band");

    const Eigen::VectorXd phi = modes.phi_zpf.row(j);
    int q = 0;
    phi.maxCoeff(&q);
    int r = -1;
    for (int n = 0; n < phi.size(); ++n)
        if (n != q && (r < 0 || phi(n) > phi(r)))
            r = n;

    // ModeSet keeps modes ascending.
    const bool qubit_first = modes.omegas[static_cast<std::size_t>(q)] < modes.omegas[static_cast<std::size_t>(r)];
    const std::vector<int> order = qubit_first ? std::vector<int>{q, r} : std::vector<int>{r, q};
    const auto pair = modes.select(order, {j});
    const int qi = qubit_first ? 0 : 1;
    const int ri = 1 - qi;

    std::vector<int> dims(2);
    dims[static_cast<std::size_t>(qi)] = options.qubit_dims;
    dims[static_cast<std::size_t>(ri)] = options.resonator_dims;
    const auto& spec = netlist.junction_of(netlist.element(junction_element));
    const auto h = quantize::assemble_hamiltonian(pair, {spec}, options.expansion_order, dims);

    PairResult out;
    out.junction = junction_element;
    out.qubit_mode = q;
    out.resonator_mode = r;
    fock::NormalModeReport report;
    if (converge) {
        auto conv = fock::converge_truncation(h, options.convergence);
        report = std::move(conv.report);
        dims = conv.dims;
    } else {
        report = fock::solve(h, options.convergence.report, options.convergence.cap);
    }
    out.dims = {dims[static_cast<std::size_t>(qi)], dims[static_cast<std::size_t>(ri)]};
    out.omega_q = report.omega_tilde[static_cast<std::size_t>(qi)];
    out.alpha_q = report.alpha[static_cast<std::size_t>(qi)];
    out.omega_r = report.omega_tilde[static_cast<std::size_t>(ri)];
    // (E|11> - E|10>) - (E|01> - E|00>) is symmetric in the two modes.
    out.chi = report.dispersive_shifts.at(0).value;
    return out;
}

std::vector<PairResult> quantize_pairs(const tline::Netlist& netlist, const QuantizeOptions& options)
{
    const auto modes = linear_modes(netlist, options);
    std::vector<PairResult> out(modes.junction_count());
    parallel_for(out.size(), options.workers, [&](std::size_t j) {
        out[j] = quantize_pair(modes, netlist, modes.junction_names[j], options);
    });
    return out;
}

fock::FitEvaluator device_evaluator(const tline::Netlist& netlist, const std::string& junction_element,
                                    const QuantizeOptions& options)
{
    const std::string ref = netlist.element(junction_element).ref;
    return [netlist, junction_element, ref, options](const quantize::JunctionSpec& trial) {
        tline::Netlist local = netlist;
        auto& spec = local.junctions.at(ref);
        spec.L_J = trial.L_J;
        spec.C_J = trial.C_J;
        const auto modes = linear_modes(local, options);
        const auto pr = quantize_pair(modes, local, junction_element, options, false);
        return std::make_pair(pr.omega_q, pr.alpha_q);
    };
}

tline::Netlist fit_device_junctions(const tline::Netlist& netlist,
                                    const std::map<std::string, QubitTarget>& targets,
                                    const QuantizeOptions& options)
{
    std::vector<std::pair<std::string, QubitTarget>> jobs(targets.begin(), targets.end());
    std::vector<quantize::JunctionSpec> fitted(jobs.size());
    parallel_for(jobs.size(), options.workers, [&](std::size_t k) {
        const auto& [name, target] = jobs[k];
        const auto& element = netlist.element(name);
        if (element.kind != tline::ElementKind::Junction)
            throw Error(ErrorKind::InvalidInput, "'" + name + "' is not a junction element");
        fitted[k] = fock::fit_junction_to_measurement(target.omega, target.alpha,
                                                      device_evaluator(netlist, name, options), {},
                                                      netlist.junction_of(element));
    });
    tline::Netlist out = netlist;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        auto& spec = out.junctions.at(netlist.element(jobs[k].first).ref);
        spec.L_J = fitted[k].L_J;
        spec.C_J = fitted[k].C_J;
    }
    return out;
}

}  // namespace scq::pipeline
