#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "scq/constants.hpp"
#include "scq/error.hpp"
#include "scq/network.hpp"
#include "scq/quantize.hpp"

namespace scq::quantize {

namespace c = scq::constants;
using tline::ElementKind;
using tline::SegmentMode;

namespace {

constexpr int min_cells = 20;

struct JunctionBranch {
    int a = -1;
    int b = -1;
    double L_J = 0.0;
    double E_J = 0.0;
};

// Lumped equivalent: capacitance and inverse-inductance matrices over node
// fluxes, ground eliminated.
struct LumpedCircuit {
    Eigen::MatrixXd C;
    Eigen::MatrixXd K;
    std::vector<JunctionBranch> junctions;
};

class LumpedBuilder {
public:
    explicit LumpedBuilder(int nodes) : C_(Eigen::MatrixXd::Zero(nodes, nodes)), K_(C_), count_(nodes) {}

    int add_node()
    {
        const int idx = count_++;
        C_.conservativeResize(count_, count_);
        K_.conservativeResize(count_, count_);
        C_.row(idx).setZero();
        C_.col(idx).setZero();
        K_.row(idx).setZero();
        K_.col(idx).setZero();
        return idx;
    }

    void capacitor(int a, int b, double value) { stamp(C_, a, b, value); }
    void inductor(int a, int b, double L) { stamp(K_, a, b, 1.0 / L); }

    LumpedCircuit finish(std::vector<JunctionBranch> junctions) const
    {
        return {C_, K_, std::move(junctions)};
    }

private:
    static void stamp(Eigen::MatrixXd& M, int a, int b, double y)
    {
        if (a >= 0)
            M(a, a) += y;
        if (b >= 0)
            M(b, b) += y;
        if (a >= 0 && b >= 0) {
            M(a, b) -= y;
            M(b, a) -= y;
        }
    }

    Eigen::MatrixXd C_;
    Eigen::MatrixXd K_;
    int count_;
};

LumpedCircuit discretize(const tline::LinearNetwork& net, int cells, double omega_eval)
{
    const auto& nl = net.netlist();
    const bool ibc = net.options().model == tline::ConductorModel::IBC;
    LumpedBuilder builder(net.size());
    std::vector<JunctionBranch> junctions;
    std::map<std::string, tline::LineParams> params;
    // `cells` goes to the longest segment, shorter ones get proportionally fewer (at least 20).
    double longest = 0.0;
    for (const auto* e : nl.of_kind(ElementKind::Tline))
        longest = std::max(longest, e->length);

    for (const auto& e : nl.elements) {
        const int a = nl.node_index(e.node_a);
        switch (e.kind) {
        case ElementKind::Capacitor:
            builder.capacitor(a, nl.node_index(e.node_b), e.value);
            break;
        case ElementKind::Inductor:
            builder.inductor(a, nl.node_index(e.node_b), e.value + (ibc ? e.kinetic : 0.0));
            break;
        case ElementKind::Junction: {
            const auto& j = nl.junction_of(e);
            const int b = nl.node_index(e.node_b);
            builder.capacitor(a, b, j.C_J);
            builder.inductor(a, b, j.L_J);
            junctions.push_back({a, b, j.L_J, j.E_J()});
            break;
        }
        case ElementKind::Tline: {
            auto it = params.find(e.ref);
            if (it == params.end())
                it = params.emplace(e.ref, net.line_params(nl.geometry_of(e), omega_eval)).first;
            const tline::LineParams& p = it->second;
            const int n = std::max(min_cells, static_cast<int>(std::ceil(cells * e.length / longest)));
            const double dL = p.L_total() * e.length / n;
            const double dC = p.C * e.length / n;
            const SegmentMode mode = tline::segment_mode(e);
            int far = -1;
            if (mode == SegmentMode::Through)
                far = nl.node_index(e.node_b);
            else if (mode == SegmentMode::Half)
                far = builder.add_node();
            int prev = a;
            for (int k = 0; k < n; ++k) {
                const int next = (k + 1 == n) ? far : builder.add_node();
                builder.inductor(prev, next, dL);
                builder.capacitor(prev, -1, 0.5 * dC);
                builder.capacitor(next, -1, 0.5 * dC);
                prev = next;
            }
            break;
        }
        case ElementKind::Port:
            // Open in the lossless linear problem.
            break;
        }
    }
    return builder.finish(std::move(junctions));
}

struct LinearModes {
    std::vector<double> omegas;
    Eigen::MatrixXd participation;  // junction x mode
};

LinearModes solve_modes(const LumpedCircuit& lc, double band_lo, double band_hi)
{
    const Eigen::Index n = lc.C.rows();
    const double cscale = lc.C.diagonal().cwiseAbs().maxCoeff();
    std::vector<Eigen::Index> keep;
    std::vector<Eigen::Index> drop;
    for (Eigen::Index i = 0; i < n; ++i)
        (lc.C.row(i).cwiseAbs().maxCoeff() > 1e-12 * cscale ? keep : drop).push_back(i);

    const auto sub = [](const Eigen::MatrixXd& M, const std::vector<Eigen::Index>& r,
                        const std::vector<Eigen::Index>& col) { return M(r, col).eval(); };

    Eigen::MatrixXd K = sub(lc.K, keep, keep);
    const Eigen::MatrixXd C = sub(lc.C, keep, keep);
    Eigen::MatrixXd back;  // dropped fluxes = back * kept fluxes
    if (!drop.empty()) {
        const Eigen::MatrixXd Kbb = sub(lc.K, drop, drop);
        const Eigen::MatrixXd Kba = sub(lc.K, drop, keep);
        auto lu = Kbb.fullPivLu();
        if (!lu.isInvertible())
            throw Error(ErrorKind::SingularNetwork, "floating node without capacitance or inductance");
        back = -lu.solve(Kba);
        K += sub(lc.K, keep, drop) * back;
        K = 0.5 * (K + K.transpose()).eval();
    }

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(K, C);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::NoConvergence, "generalized eigenproblem failed");

    LinearModes out;
    std::vector<Eigen::VectorXd> vectors;
    for (Eigen::Index m = 0; m < solver.eigenvalues().size(); ++m) {
        const double lambda = solver.eigenvalues()(m);
        if (!(lambda > 0.0))
            continue;
        const double w = std::sqrt(lambda);
        if (w < band_lo || w > band_hi)
            continue;
        Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
        const Eigen::VectorXd v = solver.eigenvectors().col(m);
        for (std::size_t i = 0; i < keep.size(); ++i)
            full(keep[i]) = v(static_cast<Eigen::Index>(i));
        if (!drop.empty()) {
            const Eigen::VectorXd vb = back * v;
            for (std::size_t i = 0; i < drop.size(); ++i)
                full(drop[i]) = vb(static_cast<Eigen::Index>(i));
        }
        out.omegas.push_back(w);
        vectors.push_back(std::move(full));
    }

    const auto nj = static_cast<Eigen::Index>(lc.junctions.size());
    out.participation.resize(nj, static_cast<Eigen::Index>(out.omegas.size()));
    for (std::size_t m = 0; m < vectors.size(); ++m) {
        const auto& v = vectors[m];
        // v^T C v = 1, so twice the inductive energy is omega^2.
        const double total = v.dot(lc.K * v);
        for (Eigen::Index j = 0; j < nj; ++j) {
            const auto& jb = lc.junctions[static_cast<std::size_t>(j)];
            const double dv = (jb.a >= 0 ? v(jb.a) : 0.0) - (jb.b >= 0 ? v(jb.b) : 0.0);
            out.participation(j, static_cast<Eigen::Index>(m)) = dv * dv / jb.L_J / total;
        }
    }
    return out;
}

bool has_tlines(const tline::Netlist& nl)
{
    return !nl.of_kind(ElementKind::Tline).empty();
}

void check_spacing(const std::vector<double>& omegas)
{
    for (std::size_t m = 1; m < omegas.size(); ++m) {
        if (omegas[m] - omegas[m - 1] <= 1e-7 * omegas[m]) {
            throw Error(ErrorKind::DegenerateModes,
                        "modes at " + std::to_string(c::omega_to_ghz(omegas[m - 1])) + " and " +
                            std::to_string(c::omega_to_ghz(omegas[m])) + " GHz are not resolved");
        }
    }
}

}  // namespace

EprResult epr_extract(const tline::Netlist& netlist, tline::ConductorModel model, double band_lo,
                      double band_hi, const EprOptions& options)
{
    if (!(band_lo > 0.0 && band_hi > band_lo))
        throw Error(ErrorKind::InvalidInput, "search band must satisfy 0 < lo < hi");
    if (options.initial_cells < min_cells)
        throw Error(ErrorKind::InvalidInput, "at least 20 cells per transmission-line segment");

    tline::NetworkOptions net_opt;
    net_opt.model = model;
    net_opt.terminate_ports = false;
    const tline::LinearNetwork net(netlist, net_opt);
    const double omega_mid = std::sqrt(band_lo * band_hi);

    // Cells per segment: double until frequencies and participations settle.
    int cells = options.initial_cells;
    LinearModes modes = solve_modes(discretize(net, cells, omega_mid), band_lo, band_hi);
    if (has_tlines(netlist)) {
        for (;;) {
            if (2 * cells > options.max_cells)
                throw Error(ErrorKind::NoConvergence, "lumped discretization did not converge");
            LinearModes finer = solve_modes(discretize(net, 2 * cells, omega_mid), band_lo, band_hi);
            cells *= 2;
            bool settled = finer.omegas.size() == modes.omegas.size();
            for (std::size_t m = 0; settled && m < finer.omegas.size(); ++m) {
                settled = std::abs(finer.omegas[m] / modes.omegas[m] - 1.0) < options.frequency_tolerance &&
                          (finer.participation.col(static_cast<Eigen::Index>(m)) -
                           modes.participation.col(static_cast<Eigen::Index>(m)))
                                  .cwiseAbs()
                                  .maxCoeff() < options.participation_tolerance;
            }
            modes = std::move(finer);
            if (settled)
                break;
        }
    }

    // Line kinetic inductance depends on frequency: re-evaluate each mode at its own omega.
    if (model == tline::ConductorModel::IBC && has_tlines(netlist)) {
        for (std::size_t m = 0; m < modes.omegas.size(); ++m) {
            double w = modes.omegas[m];
            for (int it = 0; it < options.kinetic_iterations; ++it) {
                const LinearModes local = solve_modes(discretize(net, cells, w), band_lo, band_hi);
                if (local.omegas.empty())
                    break;
                std::size_t best = 0;
                for (std::size_t k = 1; k < local.omegas.size(); ++k)
                    if (std::abs(local.omegas[k] - w) < std::abs(local.omegas[best] - w))
                        best = k;
                const double moved = std::abs(local.omegas[best] - w) / w;
                w = local.omegas[best];
                modes.omegas[m] = w;
                modes.participation.col(static_cast<Eigen::Index>(m)) =
                    local.participation.col(static_cast<Eigen::Index>(best));
                if (moved < 1e-10)
                    break;
            }
        }
    }

    {
        std::vector<std::size_t> order(modes.omegas.size());
        for (std::size_t m = 0; m < order.size(); ++m)
            order[m] = m;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t x, std::size_t y) { return modes.omegas[x] < modes.omegas[y]; });
        LinearModes sorted;
        sorted.participation.resize(modes.participation.rows(), modes.participation.cols());
        for (std::size_t m = 0; m < order.size(); ++m) {
            sorted.omegas.push_back(modes.omegas[order[m]]);
            sorted.participation.col(static_cast<Eigen::Index>(m)) =
                modes.participation.col(static_cast<Eigen::Index>(order[m]));
        }
        modes = std::move(sorted);
    }
    check_spacing(modes.omegas);

    EprResult out;
    out.cells_per_segment = has_tlines(netlist) ? cells : 0;
    out.participation = modes.participation;
    out.modes.omegas = modes.omegas;
    std::vector<double> ej;
    for (const auto* e : netlist.of_kind(ElementKind::Junction)) {
        out.modes.junction_names.push_back(e->name);
        ej.push_back(netlist.junction_of(*e).E_J());
    }
    const auto nj = static_cast<Eigen::Index>(ej.size());
    out.modes.phi_zpf.resize(nj, static_cast<Eigen::Index>(modes.omegas.size()));
    for (Eigen::Index j = 0; j < nj; ++j) {
        for (Eigen::Index m = 0; m < out.modes.phi_zpf.cols(); ++m) {
            const double w = modes.omegas[static_cast<std::size_t>(m)];
            const double p = modes.participation(j, m);
            out.modes.phi_zpf(j, m) = std::sqrt(p * c::hbar * w / (2.0 * ej[static_cast<std::size_t>(j)]));
        }
    }
    if (out.modes.omegas.empty())
        throw Error(ErrorKind::PoleNotBracketed, "no normal mode inside the search band");
    return out;
}

}  // namespace scq::quantize
