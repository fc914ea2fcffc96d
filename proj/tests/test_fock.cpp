#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "netlists.hpp"
#include "oracles.hpp"
#include "scq/constants.hpp"
#include "scq/error.hpp"
#include "scq/fock.hpp"
#include "scq/pipeline.hpp"
#include "scq/quantize.hpp"

using namespace scq;
using namespace scq::fock;
using quantize::JunctionSpec;
using quantize::ModeSet;
namespace c = scq::constants;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an scq::Error");
    return ErrorKind::InvalidInput;
}

ModeSet single_mode(double omega, double phi)
{
    ModeSet m;
    m.omegas = {omega};
    m.junction_names = {"J"};
    m.phi_zpf.resize(1, 1);
    m.phi_zpf(0, 0) = phi;
    return m;
}

// Transmon at E_J/E_C = 50 as a linear mode plus its junction.
struct Transmon {
    double EC, EJ;  // rad/s
    JunctionSpec junction;
    ModeSet modes;
};

Transmon transmon_50()
{
    Transmon t;
    t.EC = 2.0 * oracle::pi * 250e6;
    t.EJ = 50.0 * t.EC;
    t.junction.name = "J";
    t.junction.C_J = c::e_charge * c::e_charge / (2.0 * c::hbar * t.EC);
    t.junction.L_J = quantize::inductance_from_EJ(c::hbar * t.EJ);
    const double w = 1.0 / std::sqrt(t.junction.L_J * t.junction.C_J);
    t.modes = single_mode(w, std::sqrt(c::hbar * w / (2.0 * t.junction.E_J())));
    return t;
}

// Report of a dense matrix given in the product basis.
NormalModeReport report_of(const Eigen::MatrixXd& H, const FockBasis& basis, const ReportOptions& opt = {})
{
    return extract_report(numerics::eigh(H), basis, opt);
}

}  // namespace

TEST_CASE("Fock basis index map is a bijection")
{
    FockBasis b({3, 4, 5});
    CHECK(b.size() == 60);
    for (std::size_t i = 0; i < b.size(); ++i)
        CHECK(b.index(b.occupation(i)) == i);
    CHECK(b.index({1, 0, 0}) == 20);
    CHECK(b.index({0, 1, 0}) == 5);
    CHECK(b.occupation(59) == std::vector<int>{2, 3, 4});
    CHECK(kind_of([&] { b.index({3, 0, 0}); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([&] { b.occupation(60); }) == ErrorKind::InvalidInput);
}

TEST_CASE("harmonic modes give a diagonal matrix and exact frequencies")
{
    ModeSet m;
    m.omegas = {c::ghz_to_omega(5.0), c::ghz_to_omega(7.0)};
    m.junction_names = {"J"};
    m.phi_zpf.resize(1, 2);
    m.phi_zpf << 0.3, 0.05;
    const auto h = quantize::assemble_hamiltonian(m, {{"J", 13e-9, 70e-15}}, 2, std::vector<int>{5, 4});
    FockBasis basis(h.truncation);
    const auto H = build_matrix(h, basis);
    CHECK((H - Eigen::MatrixXd(H.diagonal().asDiagonal())).norm() == 0.0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto n = basis.occupation(i);
        CHECK(rel(H(i, i) + 1.0, n[0] * m.omegas[0] + n[1] * m.omegas[1] + 1.0) < 1e-14);
    }
    const auto r = report_of(H, basis);
    CHECK(r.omega_tilde[0] == doctest::Approx(m.omegas[0]).epsilon(1e-13));
    CHECK(r.omega_tilde[1] == doctest::Approx(m.omegas[1]).epsilon(1e-13));
    CHECK(std::abs(r.alpha[0]) < 1e-3);
    CHECK(std::abs(r.chi(0, 1)) < 1e-3);

    const auto conv = converge_truncation(h);
    REQUIRE(conv.deltas.size() == 1);
    CHECK(conv.deltas[0] < 1e-3);
}

TEST_CASE("single-mode Kerr oscillator recovers its anharmonicity")
{
    const double w = c::ghz_to_omega(5.0), a0 = c::ghz_to_omega(-0.25);
    FockBasis basis({12});
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(12, 12);
    for (int n = 0; n < 12; ++n)
        H(n, n) = w * n + 0.5 * a0 * n * (n - 1);
    const auto r = report_of(H, basis);
    CHECK(rel(r.alpha[0], a0) < 1e-10);
    CHECK(rel(r.omega_tilde[0], w) < 1e-12);
}

TEST_CASE("transmon against the charge-basis Cooper pair box")
{
    const auto t = transmon_50();
    const auto cpb = oracle::cooper_pair_box(t.EJ, t.EC);
    const double w01 = cpb[1] - cpb[0];
    const double alpha = (cpb[2] - cpb[1]) - w01;
    CHECK(w01 / (2.0 * oracle::pi) == doctest::Approx(4.75e9).epsilon(0.02));

    const auto h = quantize::assemble_hamiltonian(t.modes, {t.junction}, 6, 10);
    const auto conv = converge_truncation(h);
    CHECK(rel(conv.report.omega_tilde[0], w01) < 0.01);
    CHECK(rel(conv.report.alpha[0], alpha) < 0.05);
    CHECK(conv.dims[0] >= 10);
    CHECK(conv.dims[0] <= 24);

    // The changes between successive truncations settle.
    REQUIRE(conv.deltas.size() >= 2);
    for (std::size_t k = 1; k < conv.deltas.size(); ++k)
        CHECK(conv.deltas[k] < conv.deltas[k - 1]);
    CHECK(conv.deltas.back() < ConvergenceOptions{}.tolerance);
}

TEST_CASE("order 4 does not converge with truncation")
{
    const auto t = transmon_50();
    const auto h = quantize::assemble_hamiltonian(t.modes, {t.junction}, 4, 10);
    ConvergenceOptions opt;
    opt.max_steps = 20;
    CHECK(kind_of([&] { converge_truncation(h, opt); }) == ErrorKind::NoConvergence);
}

TEST_CASE("dimension cap")
{
    ModeSet m;
    m.omegas = {c::ghz_to_omega(5.0), c::ghz_to_omega(7.0)};
    m.junction_names = {"J"};
    m.phi_zpf.resize(1, 2);
    m.phi_zpf << 0.3, 0.05;
    const auto h = quantize::assemble_hamiltonian(m, {{"J", 13e-9, 70e-15}}, 4, std::vector<int>{70, 70});
    CHECK(kind_of([&] { build_matrix(h, FockBasis(h.truncation)); }) == ErrorKind::DimensionOverflow);
    CHECK(kind_of([&] { build_matrix(h, FockBasis({10, 10}), 50); }) == ErrorKind::DimensionOverflow);
}

TEST_CASE("hybridized states are reported, not guessed")
{
    // Three degenerate modes sharing one excitation: |010> spreads over all
    // three eigenstates with no overlap above one half.
    const double w = c::ghz_to_omega(6.0), g = c::ghz_to_omega(0.05);
    FockBasis basis({3, 3, 3});
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(27, 27);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto n = basis.occupation(i);
        H(i, i) = w * (n[0] + n[1] + n[2]);
    }
    const auto a = basis.index({1, 0, 0}), b = basis.index({0, 1, 0}), d = basis.index({0, 0, 1});
    H(a, b) = H(b, a) = g;
    H(a, d) = H(d, a) = 0.7 * g;
    H(b, d) = H(d, b) = 0.4 * g;
    CHECK(kind_of([&] { report_of(H, basis); }) == ErrorKind::LabelingAmbiguous);

    // Detuning the modes by many couplings restores the labels.
    for (int k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < basis.size(); ++i)
            H(i, i) += 40.0 * g * k * basis.occupation(i)[k];
    const auto r = report_of(H, basis);
    CHECK(rel(r.omega_tilde[1], w + 40.0 * g) < 1e-3);
}

TEST_CASE("dispersive shift of a Duffing qubit and a resonator")
{
    // GHz units throughout; only ratios matter.
    const double wq = 5.0, a = -0.3, g = 0.05;
    FockBasis basis({8, 8});
    double prev = 0.0;
    for (double wr = 7.0; wr >= 6.0 - 1e-9; wr -= 0.1) {
        const auto r = report_of(oracle::duffing_exchange(wq, a, wr, g, 8, 8), basis);
        CHECK(r.chi(0, 1) == r.chi(1, 0));
        REQUIRE(r.dispersive_shifts.size() == 1);
        CHECK(r.dispersive_shifts[0].value == r.chi(0, 1));
        const double d = wq - wr;
        const double perturbative = 2.0 * g * g * a / (d * (d + a));
        CHECK(rel(r.chi(0, 1), perturbative) < 0.1);
        // Closer detuning, larger |chi|.
        CHECK(std::abs(r.chi(0, 1)) > prev);
        prev = std::abs(r.chi(0, 1));
    }
}

TEST_CASE("resonator kinetic inductance moves chi but not the qubit")
{
    const double Lr = 1.0e-9;
    const double kinetic = Lr * (1.0 / (0.88 * 0.88) - 1.0);
    const auto net = testnet::transmon_resonator(13e-9, 70e-15, 5e-15, Lr, 500e-15, kinetic);
    pipeline::QuantizeOptions opt;
    opt.model = tline::ConductorModel::PEC;
    const auto pec = pipeline::quantize_pairs(net, opt);
    opt.model = tline::ConductorModel::IBC;
    const auto ibc = pipeline::quantize_pairs(net, opt);
    REQUIRE(pec.size() == 1);
    REQUIRE(ibc.size() == 1);
    CHECK(ibc[0].omega_r < 0.9 * pec[0].omega_r);
    CHECK(ibc[0].omega_r > 0.86 * pec[0].omega_r);
    CHECK(rel(ibc[0].omega_q, pec[0].omega_q) < 0.01);
    CHECK(rel(ibc[0].chi, pec[0].chi) > 0.2);
    CHECK(std::abs(ibc[0].chi) > std::abs(pec[0].chi));
    CHECK(pec[0].alpha_q < 0.0);
}

TEST_CASE("junction fit round-trips measured qubits")
{
    struct Target {
        double ghz, mhz;
    };
    const auto evaluate = single_transmon_evaluator();
    for (const Target& t : {Target{4.7595, -342.3}, Target{4.8342, -344.0}}) {
        const double w = c::ghz_to_omega(t.ghz), a = c::ghz_to_omega(t.mhz * 1e-3);
        JunctionSpec j = fit_junction_to_measurement(w, a, evaluate);
        const auto [wf, af] = evaluate(j);
        CHECK(rel(wf, w) < 1e-4);
        CHECK(rel(af, a) < 1e-4);

        // omega ~ 1/sqrt(L): +1% in L_J lowers omega by about half a percent.
        JunctionSpec heavier = j;
        heavier.L_J *= 1.01;
        const double shift = evaluate(heavier).first / wf - 1.0;
        CHECK(shift < -0.0045);
        CHECK(shift > -0.006);
    }
}

TEST_CASE("junction fit input errors")
{
    const auto evaluate = single_transmon_evaluator();
    const double w = c::ghz_to_omega(4.8);
    CHECK(kind_of([&] { fit_junction_to_measurement(w, c::ghz_to_omega(0.3), evaluate); }) ==
          ErrorKind::InvalidInput);
    CHECK(kind_of([&] { fit_junction_to_measurement(-w, c::ghz_to_omega(-0.3), evaluate); }) ==
          ErrorKind::InvalidInput);
    CHECK(kind_of([&] { fit_junction_to_measurement(w, -w, evaluate); }) == ErrorKind::InvalidInput);
}
