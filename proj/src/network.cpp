#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>

#include <boost/math/tools/minima.hpp>

#include "scq/constants.hpp"
#include "scq/error.hpp"
#include "scq/network.hpp"
#include "scq/parallel.hpp"

namespace scq::tline {

namespace {

void stamp(Eigen::MatrixXcd& Y, int a, int b, cplx y)
{
    if (a >= 0)
        Y(a, a) += y;
    if (b >= 0)
        Y(b, b) += y;
    if (a >= 0 && b >= 0) {
        Y(a, b) -= y;
        Y(b, a) -= y;
    }
}

Eigen::VectorXcd unit(int n, const Terminal& t)
{
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    if (t.a >= 0)
        v(t.a) += 1.0;
    if (t.b >= 0)
        v(t.b) -= 1.0;
    return v;
}

bool all_finite(const Eigen::MatrixXcd& m)
{
    return m.allFinite();
}

}  // namespace

LinearNetwork::LinearNetwork(Netlist netlist, NetworkOptions options)
    : netlist_(std::move(netlist)), options_(options)
{
    netlist_.validate();
}

Terminal LinearNetwork::terminal_of(const Element& e) const
{
    Terminal t;
    t.a = netlist_.node_index(e.node_a);
    t.b = is_open(e.node_b) ? -1 : netlist_.node_index(e.node_b);
    return t;
}

LineParams LinearNetwork::line_params(const CpwGeometry& geom, double omega) const
{
    return cpw_line_params(geom, omega, netlist_.temperature, options_.model);
}

Eigen::MatrixXcd LinearNetwork::admittance(double omega) const
{
    const int n = size();
    Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(n, n);
    const cplx jw(0.0, omega);
    const double R = options_.series_resistance;
    const bool ibc = options_.model == ConductorModel::IBC;
    // Segments sharing a geometry share one surface-impedance evaluation.
    std::map<std::string, LineParams> params;

    for (const auto& e : netlist_.elements) {
        const Terminal t = terminal_of(e);
        switch (e.kind) {
        case ElementKind::Capacitor:
            stamp(Y, t.a, t.b, jw * e.value);
            break;
        case ElementKind::Inductor: {
            const double L = e.value + (ibc ? e.kinetic : 0.0);
            stamp(Y, t.a, t.b, 1.0 / (R + jw * L));
            break;
        }
        case ElementKind::Junction: {
            const auto& j = netlist_.junction_of(e);
            cplx y = jw * j.C_J;
            if (!options_.open_junctions)
                y += 1.0 / (R + jw * j.L_J);
            stamp(Y, t.a, t.b, y);
            break;
        }
        case ElementKind::Tline: {
            auto it = params.find(e.ref);
            if (it == params.end())
                it = params.emplace(e.ref, line_params(netlist_.geometry_of(e), omega)).first;
            const LineParams& p = it->second;
            const cplx series = R / e.length + jw * p.L_total();
            const cplx shunt = jw * p.C;
            const cplx gamma_l = std::sqrt(series * shunt) * e.length;
            const cplx Yc = std::sqrt(shunt / series);
            switch (segment_mode(e)) {
            case SegmentMode::Quarter:  // far end shorted
                stamp(Y, t.a, -1, Yc / std::tanh(gamma_l));
                break;
            case SegmentMode::Half:  // far end open
                stamp(Y, t.a, -1, Yc * std::tanh(gamma_l));
                break;
            case SegmentMode::Through: {
                const cplx y11 = Yc / std::tanh(gamma_l);
                const cplx y12 = -Yc / std::sinh(gamma_l);
                // Pi equivalent: series -y12 between a and b, shunts y11 + y12.
                stamp(Y, t.a, t.b, -y12);
                stamp(Y, t.a, -1, y11 + y12);
                stamp(Y, t.b, -1, y11 + y12);
                break;
            }
            }
            break;
        }
        case ElementKind::Port:
            if (options_.terminate_ports)
                stamp(Y, t.a, t.b, 1.0 / e.value);
            break;
        }
    }
    return Y;
}

Eigen::MatrixXcd LinearNetwork::impedance_matrix(double omega, const std::vector<Terminal>& ports) const
{
    const int n = size();
    const Eigen::MatrixXcd Y = admittance(omega);
    Eigen::MatrixXcd E(n, static_cast<Eigen::Index>(ports.size()));
    for (std::size_t k = 0; k < ports.size(); ++k)
        E.col(static_cast<Eigen::Index>(k)) = unit(n, ports[k]);
    const Eigen::MatrixXcd X = Y.partialPivLu().solve(E);
    const Eigen::MatrixXcd Z = E.transpose() * X;
    if (!all_finite(Z))
        throw Error(ErrorKind::SingularNetwork, "nodal admittance matrix is singular");
    return Z;
}

std::vector<PortImpedancePoint> port_impedance(const Netlist& netlist,
                                               const std::vector<std::string>& junction_names,
                                               const std::vector<double>& omega_grid,
                                               ConductorModel model, unsigned workers)
{
    NetworkOptions opt;
    opt.model = model;
    const LinearNetwork net(netlist, opt);
    std::vector<Terminal> ports;
    for (const auto& name : junction_names) {
        const auto& e = netlist.element(name);
        if (e.kind != ElementKind::Junction)
            throw Error(ErrorKind::InvalidInput, "'" + name + "' is not a junction element");
        ports.push_back(net.terminal_of(e));
    }
    std::vector<PortImpedancePoint> out(omega_grid.size());
    parallel_for(omega_grid.size(), workers, [&](std::size_t i) {
        out[i] = {omega_grid[i], net.impedance_matrix(omega_grid[i], ports)};
    });
    return out;
}

namespace {

struct DrivenSetup {
    LinearNetwork net;
    Terminal in;
    Terminal out;
    double z_in;
    double z_out;
};

DrivenSetup driven_setup(const Netlist& netlist, const std::string& in_port,
                         const std::string& out_port, NetworkOptions opt)
{
    opt.terminate_ports = true;
    LinearNetwork net(netlist, opt);
    const auto& pin = netlist.element(in_port);
    const auto& pout = netlist.element(out_port);
    if (pin.kind != ElementKind::Port || pout.kind != ElementKind::Port)
        throw Error(ErrorKind::InvalidInput, "S-parameters need two Port elements");
    const Terminal tin = net.terminal_of(pin);
    const Terminal tout = net.terminal_of(pout);
    return {std::move(net), tin, tout, pin.value, pout.value};
}

std::pair<cplx, cplx> s_params(const DrivenSetup& s, double omega)
{
    const int n = s.net.size();
    const Eigen::MatrixXcd Y = s.net.admittance(omega);
    // Unit source voltage behind z_in, Norton equivalent current 1/z_in.
    const Eigen::VectorXcd I = unit(n, s.in) / s.z_in;
    const Eigen::VectorXcd V = Y.partialPivLu().solve(I);
    if (!V.allFinite())
        throw Error(ErrorKind::SingularNetwork, "nodal admittance matrix is singular");
    const cplx v_in = unit(n, s.in).dot(V);
    const cplx v_out = unit(n, s.out).dot(V);
    const cplx s21 = 2.0 * v_out * std::sqrt(s.z_in / s.z_out);
    const cplx s11 = 2.0 * v_in - 1.0;
    return {s21, s11};
}

}  // namespace

TwoPortResponse transmission_spectrum(const Netlist& netlist, const std::string& in_port,
                                      const std::string& out_port,
                                      const std::vector<double>& omega_grid, ConductorModel model,
                                      unsigned workers)
{
    NetworkOptions opt;
    opt.model = model;
    return transmission_spectrum(netlist, in_port, out_port, omega_grid, opt, workers);
}

TwoPortResponse transmission_spectrum(const Netlist& netlist, const std::string& in_port,
                                      const std::string& out_port,
                                      const std::vector<double>& omega_grid,
                                      const NetworkOptions& options, unsigned workers)
{
    const DrivenSetup setup = driven_setup(netlist, in_port, out_port, options);
    TwoPortResponse r;
    r.omega = omega_grid;
    r.S21.resize(omega_grid.size());
    r.S11.resize(omega_grid.size());
    parallel_for(omega_grid.size(), workers, [&](std::size_t i) {
        const auto [s21, s11] = s_params(setup, omega_grid[i]);
        r.S21[i] = s21;
        r.S11[i] = s11;
    });
    return r;
}

std::function<double(double)> s21_magnitude(const Netlist& netlist, const std::string& in_port,
                                            const std::string& out_port, ConductorModel model)
{
    NetworkOptions opt;
    opt.model = model;
    auto setup = std::make_shared<DrivenSetup>(driven_setup(netlist, in_port, out_port, opt));
    return [setup](double omega) { return std::abs(s_params(*setup, omega).first); };
}

std::vector<double> resonance_dips(const TwoPortResponse& response,
                                   const std::function<double(double)>& magnitude, double depth)
{
    std::vector<double> dips;
    const auto& w = response.omega;
    const std::size_t n = w.size();
    if (n < 3)
        return dips;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double m = std::abs(response.S21[i]);
        if (!(m <= std::abs(response.S21[i - 1]) && m < std::abs(response.S21[i + 1])))
            continue;
        const auto [x, fx] =
            boost::math::tools::brent_find_minima(magnitude, w[i - 1], w[i + 1], 52);
        if (fx < depth)
            dips.push_back(x);
    }
    return dips;
}

std::vector<double> susceptance_zeros(const std::function<double(double)>& B, double lo, double hi,
                                      int grid_points)
{
    if (!(lo > 0.0 && hi > lo) || grid_points < 2)
        throw Error(ErrorKind::InvalidInput, "susceptance scan needs 0 < lo < hi and >= 2 points");
    std::vector<double> zeros;
    const double tol = 1e-13 * hi;

    // Recursion handles one grid cell; B is increasing between poles.
    std::function<void(double, double, double, double, int)> scan =
        [&](double a, double b, double Ba, double Bb, int depth) {
            if (depth > 80 || b - a <= tol)
                return;
            if (Bb >= Ba) {
                if (!(Ba < 0.0 && Bb >= 0.0))
                    return;
                const double r = numerics::find_root_bracketed(B, a, b, tol);
                const double Br = B(r);
                // A pole also flips sign; it shows up as a huge residual.
                if (std::abs(Br) <= 1e-3 * (std::abs(Ba) + std::abs(Bb))) {
                    zeros.push_back(r);
                    return;
                }
                const double m = r;
                const double d = std::max(tol, 1e-9 * (b - a));
                if (m - d > a)
                    scan(a, m - d, Ba, B(m - d), depth + 1);
                if (m + d < b)
                    scan(m + d, b, B(m + d), Bb, depth + 1);
                return;
            }
            // B dropped: a pole of B lies inside, zeros may sit on either side.
            if (Ba >= 0.0 && Bb <= 0.0 && b - a < 1e-9 * a)
                return;
            const double m = 0.5 * (a + b);
            const double Bm = B(m);
            // Falling across both halves while also falling right at a: not a
            // Foster reactance (a lossless passive B rises everywhere except
            // at its poles). Keep the sign change and let the caller judge it.
            if (Ba > Bm && Bm > Bb && B(a + 1e-7 * (b - a)) < Ba) {
                if ((Ba > 0.0) != (Bb > 0.0))
                    zeros.push_back(numerics::find_root_bracketed(B, a, b, tol));
                return;
            }
            scan(a, m, Ba, Bm, depth + 1);
            scan(m, b, Bm, Bb, depth + 1);
        };

    const auto grid = numerics::linspace(lo, hi, static_cast<std::size_t>(grid_points));
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        values[i] = B(grid[i]);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        scan(grid[i], grid[i + 1], values[i], values[i + 1], 0);

    std::sort(zeros.begin(), zeros.end());
    zeros.erase(std::unique(zeros.begin(), zeros.end(),
                            [](double x, double y) { return std::abs(x - y) <= 1e-10 * y; }),
                zeros.end());
    return zeros;
}

std::vector<ResonatorFrequency> resonator_frequencies(const Netlist& netlist, ConductorModel model,
                                                      bool open_junctions)
{
    NetworkOptions opt;
    opt.model = model;
    opt.open_junctions = open_junctions;
    const LinearNetwork net(netlist, opt);

    std::vector<ResonatorFrequency> out;
    for (const auto* e : netlist.of_kind(ElementKind::Tline)) {
        const SegmentMode mode = segment_mode(*e);
        if (mode == SegmentMode::Through)
            continue;
        const double estimate = resonator_frequency(
            netlist.geometry_of(*e), e->length,
            mode == SegmentMode::Quarter ? ResonatorMode::Quarter : ResonatorMode::Half,
            netlist.temperature, model);
        const std::vector<Terminal> probe = {net.terminal_of(*e)};
        const auto Z = [&](double w) { return net.impedance_matrix(w, probe)(0, 0); };
        const auto B = [&](double w) { return (1.0 / Z(w)).imag(); };
        const auto zeros = susceptance_zeros(B, 0.7 * estimate, 1.2 * estimate, 600);
        if (zeros.empty())
            throw Error(ErrorKind::PoleNotBracketed, "no resonance found for '" + e->name + "'");
        // The segment's own mode has the largest residue at its open node. Off
        // the pole, |Z| ~ residue / detuning, which unlike the peak value does not
        // depend on how each branch is regularized.
        const auto strength = [&](double w) {
            return std::abs(Z(w * (1.0 - 1e-6))) + std::abs(Z(w * (1.0 + 1e-6)));
        };
        const auto best = std::max_element(zeros.begin(), zeros.end(), [&](double x, double y) {
            return strength(x) < strength(y);
        });
        out.push_back({e->name, *best});
    }
    return out;
}

std::vector<ResonatorFrequency> bare_resonator_frequencies(const Netlist& netlist, ConductorModel model)
{
    return resonator_frequencies(netlist, model, true);
}

}  // namespace scq::tline
