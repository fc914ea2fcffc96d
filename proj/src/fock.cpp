#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Sparse>

#include "scq/constants.hpp"
#include "scq/error.hpp"
#include "scq/fock.hpp"

namespace scq::fock {

namespace c = scq::constants;
using quantize::HamiltonianSpec;
using quantize::JunctionSpec;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

FockBasis::FockBasis(std::vector<int> dims) : dims_(std::move(dims))
{
    if (dims_.empty())
        throw Error(ErrorKind::InvalidInput, "Fock basis needs at least one mode");
    strides_.assign(dims_.size(), 1);
    for (std::size_t n = dims_.size(); n-- > 0;) {
        if (dims_[n] < 1)
            throw Error(ErrorKind::InvalidInput, "Fock dimensions must be >= 1");
        strides_[n] = size_;
        size_ *= static_cast<std::size_t>(dims_[n]);
    }
}

std::size_t FockBasis::index(const std::vector<int>& occupation) const
{
    if (occupation.size() != dims_.size())
        throw Error(ErrorKind::InvalidInput, "occupation has the wrong number of modes");
    std::size_t idx = 0;
    for (std::size_t n = 0; n < dims_.size(); ++n) {
        if (occupation[n] < 0 || occupation[n] >= dims_[n])
            throw Error(ErrorKind::InvalidInput, "occupation outside the truncated basis");
        idx += static_cast<std::size_t>(occupation[n]) * strides_[n];
    }
    return idx;
}

std::vector<int> FockBasis::occupation(std::size_t index) const
{
    if (index >= size_)
        throw Error(ErrorKind::InvalidInput, "flat index outside the basis");
    std::vector<int> occ(dims_.size());
    for (std::size_t n = 0; n < dims_.size(); ++n) {
        occ[n] = static_cast<int>(index / strides_[n]);
        index %= strides_[n];
    }
    return occ;
}

namespace {

// a_n + a_n^dag on the full product basis.
SparseMatrix quadrature(const FockBasis& basis, std::size_t mode)
{
    const std::size_t dim = basis.size();
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(2 * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        auto occ = basis.occupation(i);
        const int n = occ[mode];
        if (n + 1 < basis.dims()[mode]) {
            occ[mode] = n + 1;
            const auto j = basis.index(occ);
            const double amp = std::sqrt(static_cast<double>(n + 1));
            entries.emplace_back(static_cast<int>(i), static_cast<int>(j), amp);
            entries.emplace_back(static_cast<int>(j), static_cast<int>(i), amp);
        }
    }
    SparseMatrix X(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    X.setFromTriplets(entries.begin(), entries.end());
    return X;
}

double factorial(int n)
{
    double f = 1.0;
    for (int k = 2; k <= n; ++k)
        f *= k;
    return f;
}

}  // namespace

Eigen::MatrixXd build_matrix(const HamiltonianSpec& h, const FockBasis& basis, std::size_t cap)
{
    h.validate();
    if (basis.modes() != h.modes.mode_count())
        throw Error(ErrorKind::InvalidInput, "basis and Hamiltonian disagree on the number of modes");
    for (int d : basis.dims())
        if (d < 3)
            throw Error(ErrorKind::TruncationTooSmall, "every mode needs at least 3 Fock levels");
    if (basis.size() > cap) {
        throw Error(ErrorKind::DimensionOverflow, "Fock dimension " + std::to_string(basis.size()) +
                                                      " exceeds the cap of " + std::to_string(cap));
    }

    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto occ = basis.occupation(static_cast<std::size_t>(i));
        double e = 0.0;
        for (std::size_t n = 0; n < occ.size(); ++n)
            e += h.modes.omegas[n] * occ[n];
        H(i, i) = e;
    }

    const int kmax = h.expansion_order / 2;
    if (kmax < 2 || h.junctions.empty())
        return H;

    std::vector<int> padded_dims = basis.dims();
    for (auto& d : padded_dims)
        d += kmax;
    const FockBasis padded(padded_dims);

    std::vector<SparseMatrix> X;
    for (std::size_t n = 0; n < basis.modes(); ++n)
        X.push_back(quadrature(padded, n));

    const auto pdim = static_cast<Eigen::Index>(padded.size());
    SparseMatrix nonlinear(pdim, pdim);
    for (std::size_t j = 0; j < h.junctions.size(); ++j) {
        SparseMatrix phi(pdim, pdim);
        for (std::size_t n = 0; n < basis.modes(); ++n)
            phi += h.modes.phi_zpf(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(n)) * X[n];
        const SparseMatrix phi2 = (phi * phi).pruned();
        SparseMatrix power = phi2;
        const double ej = h.junctions[j].E_J_omega();
        for (int k = 2; k <= kmax; ++k) {
            power = (power * phi2).pruned();
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            nonlinear -= (ej * sign / factorial(2 * k)) * power;
        }
    }

    // Project onto the truncated basis.
    std::vector<Eigen::Index> target(padded.size(), -1);
    for (std::size_t i = 0; i < basis.size(); ++i)
        target[padded.index(basis.occupation(i))] = static_cast<Eigen::Index>(i);
    for (Eigen::Index r = 0; r < nonlinear.outerSize(); ++r) {
        const Eigen::Index tr = target[static_cast<std::size_t>(r)];
        if (tr < 0)
            continue;
        for (SparseMatrix::InnerIterator it(nonlinear, r); it; ++it) {
            const Eigen::Index tc = target[static_cast<std::size_t>(it.col())];
            if (tc >= 0)
                H(tr, tc) += it.value();
        }
    }
    // Exact symmetry; the sparse products agree only to rounding.
    return 0.5 * (H + H.transpose());
}

namespace {

struct Labeled {
    double energy = 0.0;
    double overlap = 0.0;
    Eigen::Index column = 0;
};

std::string describe(const std::vector<int>& occ)
{
    std::ostringstream s;
    s << '|';
    for (std::size_t n = 0; n < occ.size(); ++n)
        s << (n ? "," : "") << occ[n];
    s << '>';
    return s.str();
}

Labeled label(const numerics::RealEigenResult& eig, const FockBasis& basis, const std::vector<int>& occ,
              double threshold)
{
    const auto row = static_cast<Eigen::Index>(basis.index(occ));
    const Eigen::VectorXd weights = eig.eigenvectors.row(row).array().square();
    Eigen::Index best = 0;
    weights.maxCoeff(&best);
    Labeled out{eig.eigenvalues(best), weights(best), best};
    if (!(out.overlap > threshold)) {
        Eigen::VectorXd rest = weights;
        rest(best) = -1.0;
        Eigen::Index second = 0;
        rest.maxCoeff(&second);
        std::ostringstream msg;
        msg << "state " << describe(occ) << " is hybridized: candidates at "
            << c::omega_to_ghz(eig.eigenvalues(best)) << " GHz (overlap " << weights(best) << ") and "
            << c::omega_to_ghz(eig.eigenvalues(second)) << " GHz (overlap " << weights(second) << ")";
        throw Error(ErrorKind::LabelingAmbiguous, msg.str());
    }
    return out;
}

double top_level_weight(const numerics::RealEigenResult& eig, const FockBasis& basis, const Labeled& state,
                        std::size_t own_row)
{
    double w = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (i == own_row)
            continue;
        const auto occ = basis.occupation(i);
        bool top = false;
        for (std::size_t n = 0; n < occ.size(); ++n)
            top = top || occ[n] == basis.dims()[n] - 1;
        if (top) {
            const double v = eig.eigenvectors(static_cast<Eigen::Index>(i), state.column);
            w += v * v;
        }
    }
    return w;
}

}  // namespace

NormalModeReport extract_report(const numerics::RealEigenResult& eig, const FockBasis& basis,
                                const ReportOptions& options)
{
    if (static_cast<std::size_t>(eig.eigenvectors.rows()) != basis.size())
        throw Error(ErrorKind::InvalidInput, "eigenvectors do not match the basis");
    const std::size_t N = basis.modes();
    for (int d : basis.dims())
        if (d < 3)
            throw Error(ErrorKind::TruncationTooSmall, "every mode needs at least 3 Fock levels");

    NormalModeReport report;
    report.dims = basis.dims();
    const auto fetch = [&](const std::vector<int>& occ) {
        const Labeled s = label(eig, basis, occ, options.label_threshold);
        report.tail_weight = std::max(report.tail_weight, top_level_weight(eig, basis, s, basis.index(occ)));
        return s.energy;
    };

    const std::vector<int> vacuum(N, 0);
    const double e0 = fetch(vacuum);
    std::vector<double> e1(N);
    for (std::size_t n = 0; n < N; ++n) {
        auto occ = vacuum;
        occ[n] = 1;
        e1[n] = fetch(occ) - e0;
        occ[n] = 2;
        const double e2 = fetch(occ) - e0;
        report.omega_tilde.push_back(e1[n]);
        report.alpha.push_back(e2 - 2.0 * e1[n]);
    }
    report.chi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    for (std::size_t m = 0; m < N; ++m) {
        for (std::size_t n = m + 1; n < N; ++n) {
            auto occ = vacuum;
            occ[m] = 1;
            occ[n] = 1;
            const double e11 = fetch(occ) - e0;
            const double chi = e11 - e1[m] - e1[n];
            report.chi(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = chi;
            report.chi(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) = chi;
            // Dispersive shift: (E11 - E10) - (E01 - E00).
            const double shift = (e11 - e1[m]) - e1[n];
            report.dispersive_shifts.push_back({static_cast<int>(m), static_cast<int>(n), shift});
        }
    }
    if (report.tail_weight > options.tail_tolerance) {
        throw Error(ErrorKind::TruncationTooSmall,
                    "labeled states carry weight " + std::to_string(report.tail_weight) +
                        " on the top Fock level");
    }
    return report;
}

NormalModeReport solve(const HamiltonianSpec& h, const ReportOptions& options, std::size_t cap)
{
    const FockBasis basis(h.truncation);
    const Eigen::MatrixXd H = build_matrix(h, basis, cap);
    return extract_report(numerics::eigh(H), basis, options);
}

namespace {

double largest_change(const NormalModeReport& a, const NormalModeReport& b)
{
    double d = 0.0;
    for (std::size_t n = 0; n < a.omega_tilde.size(); ++n) {
        d = std::max(d, std::abs(a.omega_tilde[n] - b.omega_tilde[n]));
        d = std::max(d, std::abs(a.alpha[n] - b.alpha[n]));
    }
    return std::max(d, (a.chi - b.chi).cwiseAbs().maxCoeff());
}

}  // namespace

ConvergedReport converge_truncation(const HamiltonianSpec& h, const ConvergenceOptions& options)
{
    if (options.step < 1)
        throw Error(ErrorKind::InvalidInput, "truncation step must be >= 1");
    HamiltonianSpec trial = h;
    trial.validate();

    ConvergedReport out;
    std::optional<NormalModeReport> previous;
    for (int step = 0;; ++step) {
        if (step > options.max_steps) {
            throw Error(ErrorKind::NoConvergence,
                        "truncation did not converge in " + std::to_string(options.max_steps) +
                            " steps (order " + std::to_string(h.expansion_order) + ")");
        }
        std::size_t dim = 1;
        for (int d : trial.truncation)
            dim *= static_cast<std::size_t>(d);
        if (dim > options.cap) {
            throw Error(ErrorKind::DimensionOverflow,
                        "truncation did not converge below the dimension cap of " +
                            std::to_string(options.cap));
        }
        try {
            NormalModeReport current = solve(trial, options.report, options.cap);
            if (previous) {
                const double delta = largest_change(*previous, current);
                out.deltas.push_back(delta);
                if (delta < options.tolerance) {
                    out.dims = trial.truncation;
                    out.report = std::move(current);
                    return out;
                }
            }
            previous = std::move(current);
        } catch (const Error& err) {
            if (err.kind() != ErrorKind::TruncationTooSmall)
                throw;
            previous.reset();
        }
        for (auto& d : trial.truncation)
            d += options.step;
    }
}

FitEvaluator single_transmon_evaluator(int expansion_order, int dims)
{
    return [expansion_order, dims](const JunctionSpec& j) {
        quantize::ModeSet modes;
        const double w = 1.0 / std::sqrt(j.L_J * j.C_J);
        modes.omegas = {w};
        modes.junction_names = {j.name};
        modes.phi_zpf.resize(1, 1);
        modes.phi_zpf(0, 0) = std::sqrt(c::hbar * w / (2.0 * j.E_J()));
        const auto h = quantize::assemble_hamiltonian(modes, {j}, expansion_order, dims);
        const auto report = solve(h);
        return std::make_pair(report.omega_tilde[0], report.alpha[0]);
    };
}

JunctionSpec fit_junction_to_measurement(double target_omega, double target_alpha,
                                         const FitEvaluator& evaluate, const FitOptions& options,
                                         std::optional<JunctionSpec> initial)
{
    if (!(target_omega > 0.0) || !(target_alpha < 0.0) || !(-target_alpha < 0.5 * target_omega))
        throw Error(ErrorKind::InvalidInput, "fit targets need omega > 0 and -omega/2 < alpha < 0");

    JunctionSpec guess;
    if (initial) {
        guess = *initial;
    } else {
        // Transmon estimates: E_C ~ -alpha, omega ~ sqrt(8 E_J E_C) - E_C.
        const double ec = -target_alpha;
        const double ej = (target_omega + ec) * (target_omega + ec) / (8.0 * ec);
        guess.C_J = c::e_charge * c::e_charge / (2.0 * c::hbar * ec);
        guess.L_J = quantize::inductance_from_EJ(c::hbar * ej);
    }
    guess.validate();

    const auto residual = [&](const Eigen::Vector2d& x) {
        JunctionSpec j = guess;
        j.L_J = std::exp(x(0));
        j.C_J = std::exp(x(1));
        const auto [w, a] = evaluate(j);
        return Eigen::Vector2d(w / target_omega - 1.0, a / target_alpha - 1.0);
    };

    Eigen::Vector2d x(std::log(guess.L_J), std::log(guess.C_J));
    Eigen::Vector2d r = residual(x);
    const double h = 1e-6;
    for (int it = 0; it < options.max_iterations; ++it) {
        if (r.cwiseAbs().maxCoeff() < options.tolerance) {
            guess.L_J = std::exp(x(0));
            guess.C_J = std::exp(x(1));
            return guess;
        }
        Eigen::Matrix2d J;
        for (int k = 0; k < 2; ++k) {
            Eigen::Vector2d xp = x;
            xp(k) += h;
            J.col(k) = (residual(xp) - r) / h;
        }
        const Eigen::Vector2d step = J.fullPivLu().solve(-r);
        if (!step.allFinite())
            break;
        double t = 1.0;
        Eigen::Vector2d next = x + step;
        Eigen::Vector2d rn = residual(next);
        while (rn.norm() >= r.norm() && t > 1e-4) {
            t *= 0.5;
            next = x + t * step;
            rn = residual(next);
        }
        x = next;
        r = rn;
    }
    throw Error(ErrorKind::NoConvergence, "junction fit did not reach the targets (residual " +
                                              std::to_string(r.cwiseAbs().maxCoeff()) + ")");
}

}  // namespace scq::fock
