#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "netlists.hpp"
#include "oracles.hpp"
#include "scq/constants.hpp"
#include "scq/error.hpp"
#include "scq/fock.hpp"
#include "scq/io.hpp"
#include "scq/quantize.hpp"

using namespace scq;
using namespace scq::quantize;
using tline::ConductorModel;
namespace c = scq::constants;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const double band_lo = c::ghz_to_omega(1.0);
const double band_hi = c::ghz_to_omega(12.0);

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

// Transmon around 5 GHz and a lumped resonator around 7 GHz.
constexpr double Lj = 13e-9, Cj = 70e-15, Cg = 5e-15, Lr = 1.0e-9, Cr = 500e-15;

}  // namespace

TEST_CASE("textbook LC")
{
    const double L = 5e-9, C = 2e-12;  // sqrt(L/C) = 50 ohm
    const double w0 = 1.0 / std::sqrt(L * C);
    const double phi2 = 2.0 * oracle::e_charge * oracle::e_charge / oracle::hbar * 50.0;
    CHECK(std::abs(std::sqrt(phi2) - 0.156) < 5e-4);

    auto net = testnet::lc(L, C);
    auto bbq = bbq_extract(net, ConductorModel::PEC, band_lo, band_hi);
    REQUIRE(bbq.mode_count() == 1);
    CHECK(rel(bbq.omegas[0], w0) < 1e-9);
    CHECK(rel(bbq.phi_zpf(0, 0) * bbq.phi_zpf(0, 0), phi2) < 1e-6);
    CHECK(bbq.junction_names == std::vector<std::string>{"J"});

    auto epr = epr_extract(net, ConductorModel::PEC, band_lo, band_hi);
    CHECK(rel(epr.modes.omegas[0], w0) < 1e-9);
    CHECK(epr.participation(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rel(epr.modes.phi_zpf(0, 0) * epr.modes.phi_zpf(0, 0), phi2) < 1e-9);

    // Co-scaling L and C keeps omega and scales phi^2 with sqrt(L/C).
    for (double s : {0.5, 2.0, 4.0}) {
        auto scaled = testnet::lc(L * s, C / s);
        auto b = bbq_extract(scaled, ConductorModel::PEC, band_lo, band_hi);
        auto e = epr_extract(scaled, ConductorModel::PEC, band_lo, band_hi);
        CHECK(rel(b.omegas[0], w0) < 1e-9);
        CHECK(rel(b.phi_zpf(0, 0) * b.phi_zpf(0, 0), s * phi2) < 1e-6);
        CHECK(rel(e.modes.phi_zpf(0, 0) * e.modes.phi_zpf(0, 0), s * phi2) < 1e-9);
    }
}

TEST_CASE("BBQ and EPR against the closed-form two-mode circuit")
{
    auto ref = oracle::two_tank(Lj, Cj, Lr, Cr, Cg);
    auto net = testnet::transmon_resonator(Lj, Cj, Cg, Lr, Cr);
    auto bbq = bbq_extract(net, ConductorModel::PEC, band_lo, band_hi);
    auto epr = epr_extract(net, ConductorModel::PEC, band_lo, band_hi);
    REQUIRE(bbq.mode_count() == 2);
    REQUIRE(epr.modes.mode_count() == 2);
    for (int m = 0; m < 2; ++m) {
        CHECK(rel(bbq.omegas[m], ref.omega[m]) < 1e-8);
        CHECK(rel(epr.modes.omegas[m], ref.omega[m]) < 1e-8);
        CHECK(rel(bbq.phi_zpf(0, m), ref.phi[m][0]) < 1e-5);
        CHECK(rel(epr.modes.phi_zpf(0, m), ref.phi[m][0]) < 1e-6);
        CHECK(epr.participation(0, m) <= 1.0 + 1e-12);
    }
    CHECK(bbq.omegas[0] < bbq.omegas[1]);
    // The transmon mode holds nearly all of its inductive energy in the junction.
    CHECK(epr.participation(0, 0) > 0.99);
    CHECK(epr.participation(0, 1) < 0.01);
}

TEST_CASE("participations of two junctions sum to one")
{
    auto net = testnet::two_tanks(10e-9, 80e-15, 6e-9, 90e-15, 10e-15);
    auto epr = epr_extract(net, ConductorModel::PEC, band_lo, band_hi);
    REQUIRE(epr.modes.mode_count() == 2);
    for (int m = 0; m < 2; ++m) {
        CHECK(epr.participation.col(m).sum() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK((epr.participation.col(m).array() >= 0.0).all());
    }
    auto bbq = bbq_extract(net, ConductorModel::PEC, band_lo, band_hi);
    CHECK((bbq.phi_zpf - epr.modes.phi_zpf).cwiseAbs().maxCoeff() < 1e-4 * epr.modes.phi_zpf.maxCoeff());
}

TEST_CASE("decoupling drives the cross participation to zero")
{
    // phi(junction, resonator mode) scales with the coupling capacitance.
    double prev = 1.0;
    for (double cg : {5e-15, 2e-15, 5e-16, 2e-16}) {
        auto m = bbq_extract(testnet::transmon_resonator(Lj, Cj, cg, Lr, Cr), ConductorModel::PEC, band_lo,
                             band_hi);
        REQUIRE(m.mode_count() == 2);
        CHECK(m.phi_zpf(0, 1) < prev);
        CHECK(m.phi_zpf(0, 1) / cg == doctest::Approx(0.0203 / 5e-15).epsilon(0.15));
        prev = m.phi_zpf(0, 1);
    }
    CHECK(prev < 1e-3);
    // Past the BBQ grid resolution the eigen path still resolves the mode.
    auto e = epr_extract(testnet::transmon_resonator(Lj, Cj, 1e-18, Lr, Cr), ConductorModel::PEC, band_lo,
                         band_hi);
    REQUIRE(e.modes.mode_count() == 2);
    CHECK(e.modes.phi_zpf(0, 1) < 1e-5);
}

TEST_CASE("transmon alone has unit participation")
{
    auto net = testnet::lc(Lj, Cj);
    auto epr = epr_extract(net, ConductorModel::IBC, band_lo, band_hi);
    const JunctionSpec j{"JL", Lj, Cj};
    const double w = 1.0 / std::sqrt(Lj * Cj);
    CHECK(epr.participation(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rel(epr.modes.phi_zpf(0, 0) * epr.modes.phi_zpf(0, 0), c::hbar * w / (2.0 * j.E_J())) < 1e-9);
}

TEST_CASE("series kinetic inductance on the resonator")
{
    // Kinetic inductance that lowers the resonator by about 12%.
    const double kinetic = Lr * (1.0 / (0.88 * 0.88) - 1.0);
    auto net = testnet::transmon_resonator(Lj, Cj, Cg, Lr, Cr, kinetic);
    auto pec = epr_extract(net, ConductorModel::PEC, band_lo, band_hi);
    auto ibc = epr_extract(net, ConductorModel::IBC, band_lo, band_hi);
    CHECK(ibc.modes.omegas[1] < 0.9 * pec.modes.omegas[1]);
    CHECK(rel(ibc.modes.omegas[0], pec.modes.omegas[0]) < 0.005);
    CHECK(std::abs(ibc.participation(0, 0) - pec.participation(0, 0)) < 0.01);
    // Kinetic energy counts in the total only, so the resonator mode's junction
    // share stays small.
    CHECK(ibc.participation(0, 1) < 0.01);

    auto bbq = bbq_extract(net, ConductorModel::IBC, band_lo, band_hi);
    for (int m = 0; m < 2; ++m) {
        CHECK(rel(bbq.omegas[m], ibc.modes.omegas[m]) < 1e-3);
        CHECK(rel(bbq.phi_zpf(0, m), ibc.modes.phi_zpf(0, m)) < 1e-2);
    }
}

TEST_CASE("BBQ and EPR agree on a distributed device")
{
    auto net = testnet::two_qubit();
    auto bbq = bbq_extract(net, ConductorModel::IBC, band_lo, band_hi);
    auto epr = epr_extract(net, ConductorModel::IBC, band_lo, band_hi);
    REQUIRE(bbq.mode_count() == 4);
    REQUIRE(epr.modes.mode_count() == 4);
    CHECK(epr.cells_per_segment >= 32);
    for (int m = 0; m < 4; ++m) {
        CHECK(rel(bbq.omegas[m], epr.modes.omegas[m]) < 1e-3);
        for (int j = 0; j < 2; ++j) {
            const double ref = epr.modes.phi_zpf(j, m);
            if (ref > 1e-3 * epr.modes.phi_zpf.maxCoeff())
                CHECK(rel(bbq.phi_zpf(j, m), ref) < 1e-2);
        }
        CHECK(epr.participation.col(m).sum() <= 1.0 + 1e-9);
    }
}

TEST_CASE("extraction errors")
{
    auto net = testnet::lc(5e-9, 2e-12);  // 1.59 GHz
    CHECK(kind_of([&] { bbq_extract(net, ConductorModel::PEC, c::ghz_to_omega(5.0), band_hi); }) ==
          ErrorKind::PoleNotBracketed);

    // An impedance with the wrong residue sign.
    const double L = 5e-9, C = 2e-12;
    ImpedanceFunction flipped = [&](double w) {
        Eigen::MatrixXcd Z(1, 1);
        Z(0, 0) = -1.0 / (std::complex<double>(0.0, w * C) + 1.0 / std::complex<double>(0.0, w * L));
        return Z;
    };
    CHECK(kind_of([&] { bbq_extract(flipped, {"J"}, band_lo, band_hi); }) ==
          ErrorKind::NegativeEffectiveImpedance);

    // Two identical, uncoupled tanks cannot be told apart.
    tline::Netlist twins = testnet::two_tanks(10e-9, 80e-15, 10e-9, 80e-15, 1e-15);
    twins.elements.pop_back();
    CHECK(kind_of([&] { epr_extract(twins, ConductorModel::PEC, band_lo, band_hi); }) ==
          ErrorKind::DegenerateModes);
}

TEST_CASE("ModeSet validation, selection and JSON")
{
    ModeSet m;
    m.omegas = {c::ghz_to_omega(4.7), c::ghz_to_omega(6.6), c::ghz_to_omega(6.7)};
    m.junction_names = {"J1", "J2"};
    m.phi_zpf.resize(2, 3);
    m.phi_zpf << 0.3, 0.02, 0.001, 0.002, 0.01, 0.03;
    m.validate();

    auto s = m.select({2, 0}, {1});
    CHECK(s.omegas == std::vector<double>{m.omegas[2], m.omegas[0]});
    CHECK(s.junction_names == std::vector<std::string>{"J2"});
    CHECK(s.phi_zpf(0, 0) == 0.03);
    CHECK(s.phi_zpf(0, 1) == 0.002);

    auto back = io::modeset_from_json(io::modeset_to_json(m));
    CHECK(back.junction_names == m.junction_names);
    for (int n = 0; n < 3; ++n) {
        CHECK(rel(back.omegas[n], m.omegas[n]) < 1e-9);
        for (int j = 0; j < 2; ++j)
            CHECK(rel(back.phi_zpf(j, n), m.phi_zpf(j, n)) < 1e-9);
    }

    ModeSet unsorted = m;
    std::swap(unsorted.omegas[0], unsorted.omegas[1]);
    CHECK_THROWS_AS(unsorted.validate(), Error);
    ModeSet negative = m;
    negative.phi_zpf(0, 0) = -0.1;
    CHECK_THROWS_AS(negative.validate(), Error);
    ModeSet shape = m;
    shape.junction_names.pop_back();
    CHECK_THROWS_AS(shape.validate(), Error);
}

TEST_CASE("assembled Hamiltonian")
{
    ModeSet one;
    one.omegas = {c::ghz_to_omega(5.0)};
    one.junction_names = {"J"};
    one.phi_zpf.resize(1, 1);
    one.phi_zpf << 0.3;
    const JunctionSpec j{"J", 13e-9, 70e-15};

    // Order 2: the quadratic term already lives in the linear modes.
    auto harmonic = fock::solve(assemble_hamiltonian(one, {j}, 2, 8));
    CHECK(harmonic.alpha[0] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rel(harmonic.omega_tilde[0], one.omegas[0]) < 1e-12);

    // Order 4: <0|H|0> = -E_J phi^4 <0|(a + a^dag)^4|0> / 24 = -E_J phi^4 3/24.
    auto h4 = assemble_hamiltonian(one, {j}, 4, 10);
    auto H = fock::build_matrix(h4, fock::FockBasis({10}));
    const double phi = 0.3;
    CHECK(rel(H(0, 0), -j.E_J_omega() * std::pow(phi, 4) * 3.0 / 24.0) < 1e-12);
    // <2|H|0> from (a + a^dag)^4 |0> = sqrt(2) 6 |2> + ...: -E_J phi^4 6 sqrt(2) / 24.
    CHECK(rel(H(2, 0), -j.E_J_omega() * std::pow(phi, 4) * 6.0 * std::sqrt(2.0) / 24.0) < 1e-12);
    CHECK(H(1, 0) == 0.0);

    CHECK(kind_of([&] { assemble_hamiltonian(one, {j}, 4, 2); }) == ErrorKind::TruncationTooSmall);
    CHECK(kind_of([&] { assemble_hamiltonian(one, {j}, 5, 10); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([&] { assemble_hamiltonian(one, {j, j}, 4, 10); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([&] { assemble_hamiltonian(one, {j}, 4, std::vector<int>{10, 10}); }) ==
          ErrorKind::InvalidInput);
}

TEST_CASE("assembled operators are Hermitian")
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> freq(3.0, 9.0), phi(0.0, 0.4), lj(8e-9, 20e-9);
    std::uniform_int_distribution<int> order(2, 4), dim(3, 7);
    for (int trial = 0; trial < 100; ++trial) {
        ModeSet m;
        m.omegas = {c::ghz_to_omega(freq(rng)), c::ghz_to_omega(freq(rng))};
        std::sort(m.omegas.begin(), m.omegas.end());
        m.junction_names = {"A", "B"};
        m.phi_zpf.resize(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k)
                m.phi_zpf(i, k) = phi(rng);
        auto h = assemble_hamiltonian(m, {{"A", lj(rng), 50e-15}, {"B", lj(rng), 50e-15}}, 2 * order(rng),
                                      std::vector<int>{dim(rng), dim(rng)});
        auto H = fock::build_matrix(h, fock::FockBasis(h.truncation));
        CHECK((H - H.transpose()).norm() <= 1e-14 * H.norm());
    }
}
