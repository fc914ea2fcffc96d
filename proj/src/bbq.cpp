#include <algorithm>
#include <cmath>

#include "scq/constants.hpp"
#include "scq/error.hpp"
#include "scq/network.hpp"
#include "scq/quantize.hpp"

namespace scq::quantize {

namespace c = scq::constants;

void ModeSet::validate() const
{
    if (static_cast<std::size_t>(phi_zpf.rows()) != junction_names.size() ||
        static_cast<std::size_t>(phi_zpf.cols()) != omegas.size())
        throw Error(ErrorKind::InvalidInput, "phi_zpf shape does not match junctions x modes");
    for (std::size_t n = 0; n < omegas.size(); ++n) {
        if (!(omegas[n] > 0.0))
            throw Error(ErrorKind::InvalidInput, "mode frequencies must be > 0");
        if (n > 0 && omegas[n] < omegas[n - 1])
            throw Error(ErrorKind::InvalidInput, "mode frequencies must be ascending");
    }
    if ((phi_zpf.array() < 0.0).any())
        throw Error(ErrorKind::InvalidInput, "phi_zpf entries must be >= 0");
}

ModeSet ModeSet::select(const std::vector<int>& modes, const std::vector<int>& junctions) const
{
    ModeSet out;
    out.phi_zpf.resize(static_cast<Eigen::Index>(junctions.size()), static_cast<Eigen::Index>(modes.size()));
    for (std::size_t n = 0; n < modes.size(); ++n)
        out.omegas.push_back(omegas.at(static_cast<std::size_t>(modes[n])));
    for (std::size_t j = 0; j < junctions.size(); ++j) {
        out.junction_names.push_back(junction_names.at(static_cast<std::size_t>(junctions[j])));
        for (std::size_t n = 0; n < modes.size(); ++n)
            out.phi_zpf(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(n)) =
                phi_zpf(junctions[j], modes[n]);
    }
    return out;
}

namespace {

// c = lim eps * (X(w - eps) - X(w + eps)) / 2 for X = Im Z_jj; equals
// omega_n Z_eff / 2 at a pole and 0 where port j does not see the mode.
double pole_residue(const std::function<double(double)>& X, double omega, double rel_step)
{
    const auto estimate = [&](double eps) { return 0.5 * eps * (X(omega - eps) - X(omega + eps)); };
    const double h = rel_step * omega;
    const double coarse = estimate(h);
    const double fine = estimate(0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

ModeSet bbq_extract(const ImpedanceFunction& Z, const std::vector<std::string>& junction_names,
                    double band_lo, double band_hi, const BbqOptions& options)
{
    const auto ports = static_cast<Eigen::Index>(junction_names.size());
    if (ports == 0)
        throw Error(ErrorKind::InvalidInput, "BBQ needs at least one junction port");

    std::vector<double> poles;
    for (Eigen::Index j = 0; j < ports; ++j) {
        const auto B = [&](double w) {
            try {
                return (1.0 / Z(w)(j, j)).imag();
            } catch (const Error& err) {
                // Singular nodal matrix: w sits exactly on a normal mode.
                if (err.kind() == ErrorKind::SingularNetwork)
                    return 0.0;
                throw;
            }
        };
        const auto zeros = tline::susceptance_zeros(B, band_lo, band_hi, options.grid_points);
        poles.insert(poles.end(), zeros.begin(), zeros.end());
    }
    std::sort(poles.begin(), poles.end());
    poles.erase(std::unique(poles.begin(), poles.end(),
                            [](double a, double b) { return std::abs(a - b) <= 1e-8 * b; }),
                poles.end());
    if (poles.empty())
        throw Error(ErrorKind::PoleNotBracketed, "no impedance pole inside the search band");

    ModeSet out;
    out.junction_names = junction_names;
    out.omegas = poles;
    out.phi_zpf = Eigen::MatrixXd::Zero(ports, static_cast<Eigen::Index>(poles.size()));
    for (std::size_t n = 0; n < poles.size(); ++n) {
        for (Eigen::Index j = 0; j < ports; ++j) {
            const auto X = [&](double w) { return Z(w)(j, j).imag(); };
            const double residue = pole_residue(X, poles[n], options.relative_step);
            const double z_eff = 2.0 * residue / poles[n];
            if (z_eff < -1e-9) {
                throw Error(ErrorKind::NegativeEffectiveImpedance,
                            "mode at " + std::to_string(c::omega_to_ghz(poles[n])) +
                                " GHz has Z_eff = " + std::to_string(z_eff) + " ohm at port " +
                                junction_names[static_cast<std::size_t>(j)]);
            }
            const double phi2 = 2.0 * c::e_charge * c::e_charge / c::hbar * std::max(z_eff, 0.0);
            out.phi_zpf(j, static_cast<Eigen::Index>(n)) = std::sqrt(phi2);
        }
    }
    return out;
}

ModeSet bbq_extract(const tline::Netlist& netlist, tline::ConductorModel model, double band_lo,
                    double band_hi, const BbqOptions& options)
{
    tline::NetworkOptions net_opt;
    net_opt.model = model;
    // Lossless problem: ports are left open, as in the EPR path.
    net_opt.terminate_ports = false;
    // No loss regularization either: it would broaden the poles the residue is read from.
    net_opt.series_resistance = 0.0;
    const tline::LinearNetwork net(netlist, net_opt);

    std::vector<std::string> names;
    std::vector<tline::Terminal> ports;
    for (const auto* e : netlist.of_kind(tline::ElementKind::Junction)) {
        names.push_back(e->name);
        ports.push_back(net.terminal_of(*e));
    }
    const ImpedanceFunction Z = [&](double w) { return net.impedance_matrix(w, ports); };
    return bbq_extract(Z, names, band_lo, band_hi, options);
}

}  // namespace scq::quantize
