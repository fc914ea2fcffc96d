// One PASS/FAIL line per acceptance criterion; nonzero exit on any failure.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "netlists.hpp"
#include "oracles.hpp"
#include "scq/constants.hpp"
#include "scq/cpw.hpp"
#include "scq/fock.hpp"
#include "scq/io.hpp"
#include "scq/materials.hpp"
#include "scq/network.hpp"
#include "scq/pipeline.hpp"
#include "scq/quantize.hpp"

using namespace scq;
namespace c = scq::constants;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int n, const std::string& name, const std::function<void(Verdict&)>& body)
{
    Verdict v;
    try {
        body(v);
    } catch (const std::exception& e) {
        v.pass = false;
        v.detail << " [exception: " << e.what() << "]";
    }
    if (!v.pass)
        ++failures;
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << n << " " << name << ":" << v.detail.str() << std::endl;
}

materials::SuperconductorSpec nb_bulk(double sigma_n = 5.5e7)
{
    return materials::make_superconductor("nb", 9.2, 33.3e-9, 39e-9, sigma_n, 1.395 * c::meV, std::nullopt,
                                          std::nullopt);
}

tline::CpwGeometry nb_halfwave_cpw()
{
    tline::CpwGeometry g;
    g.name = "nb_halfwave";
    g.width = 10e-6;
    g.gap = 6e-6;
    g.film = materials::make_superconductor("nb_100nm", 9.2, 33.3e-9, 39e-9, 5.5e7, std::nullopt, std::nullopt,
                                            100e-9);
    g.eps_r = 11.45;
    g.substrate_thickness = 500e-6;
    return g;
}

std::map<std::string, pipeline::QubitTarget> measured_targets()
{
    std::map<std::string, pipeline::QubitTarget> t;
    for (const auto& m : io::measurements_from_json(io::read_json(testnet::config("two_qubit_measured.json"))))
        t[m.junction] = {c::ghz_to_omega(m.qubit_GHz), c::ghz_to_omega(m.anharmonicity_MHz * 1e-3)};
    return t;
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string("\"") + SCQ_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

int main()
{
    std::cout.precision(6);
    const double lo = c::ghz_to_omega(1.0), hi = c::ghz_to_omega(12.0);

    criterion(1, "conductivity vs brute-force quadrature", [](Verdict& v) {
        const auto spec = nb_bulk();
        const oracle::Film film{spec.Tc, spec.Delta0, spec.lambda_L, spec.xi, spec.sigma_n};
        const std::vector<std::pair<double, double>> points = {
            {4.0, 0.001}, {5.5, 0.001}, {7.0, 0.001}, {8.0, 0.001}, {4.5, 0.3},
            {6.0, 0.3},   {7.5, 0.3},   {4.0, 0.7},   {6.0, 0.7},   {8.0, 0.7}};
        double worst = 0.0, adaptive_time = 0.0;
        for (const auto& [f, t] : points) {
            const double w = c::ghz_to_omega(f), T = t * spec.Tc;
            const auto t0 = Clock::now();
            const auto s = materials::complex_conductivity(spec, w, T);
            adaptive_time += seconds_since(t0);
            const oracle::cplx ref = oracle::brute_force_conductivity(film, w, T) * spec.sigma_n;
            const double err = std::abs(oracle::cplx(s.sigma1, s.sigma2) - ref) / std::abs(ref);
            worst = std::max({worst, err, rel(s.sigma2, ref.imag())});
            if (t >= 0.3)
                worst = std::max(worst, rel(s.sigma1, ref.real()));
        }
        v.detail << " worst relative error " << worst << " (tol 1e-3), adaptive time " << adaptive_time
                 << " s (limit 10 s)";
        v.require(worst < 1e-3, "accuracy");
        v.require(adaptive_time < 10.0, "runtime");
    });

    criterion(2, "Mattis-Bardeen dirty limit", [](Verdict& v) {
        const auto spec = nb_bulk(2.0e6);
        const double l_over_xi = materials::mean_free_path(spec) / spec.xi;
        v.require(l_over_xi <= 0.05, "l/xi <= 0.05");
        double worst = 0.0;
        for (double t : {0.01, 0.03, 0.05})
            for (double f : {1.0, 4.0, 8.0}) {
                const double w = c::ghz_to_omega(f), T = t * spec.Tc;
                const double D = materials::gap_at_temperature(spec, T).Delta;
                v.require(c::hbar * w <= 0.1 * D, "hbar omega <= 0.1 Delta");
                const auto s = materials::complex_conductivity(spec, w, T);
                worst = std::max(worst, rel(s.sigma2 / spec.sigma_n, oracle::mattis_bardeen_sigma2(D, w, T)));
            }
        v.detail << " l/xi " << l_over_xi << ", worst sigma2 deviation " << worst << " (tol 0.05)";
        v.require(worst < 0.05, "accuracy");
    });

    criterion(3, "Nb film resonator kinetic shift and temperature curve", [](Verdict& v) {
        const auto t0 = Clock::now();
        const auto g = nb_halfwave_cpw();
        const double pec = c::ghz_to_omega(7.064);
        const double length = tline::length_for_pec_frequency(g, pec, tline::ResonatorMode::Half);
        const double ibc =
            tline::resonator_frequency(g, length, tline::ResonatorMode::Half, 0.01, tline::ConductorModel::IBC);
        const double shift = (pec - ibc) / pec;
        std::vector<double> T;
        for (double r = 0.02; r < 0.985; r += 0.02)
            T.push_back(r * g.film.Tc);
        const auto pts = tline::temperature_sweep(g, length, tline::ResonatorMode::Half, T, 4);
        bool monotone = true, plateau = true;
        double prev = 1.0;
        for (const auto& p : pts) {
            monotone = monotone && p.ok && p.shift_hz < prev;
            prev = p.shift_hz;
            if (p.reduced_T < 0.15)
                plateau = plateau && std::abs(p.shift_hz) < 1e-3 * c::to_hz(p.omega);
        }
        const double elapsed = seconds_since(t0);
        v.detail << " IBC " << c::omega_to_ghz(ibc) << " GHz, shift " << 100.0 * shift
                 << "% (band 1.1-3.3%), monotone " << monotone << ", plateau " << plateau << ", " << elapsed
                 << " s";
        v.require(shift >= 0.011 && shift <= 0.033, "shift band");
        v.require(monotone, "monotone");
        v.require(plateau, "low-T plateau");
        v.require(elapsed < 60.0, "runtime");
    });

    criterion(4, "two-qubit device resonator shift", [](Verdict& v) {
        const auto t0 = Clock::now();
        const auto net = testnet::two_qubit();
        const auto pec = tline::bare_resonator_frequencies(net, tline::ConductorModel::PEC);
        const auto ibc = tline::bare_resonator_frequencies(net, tline::ConductorModel::IBC);
        v.require(pec.size() == 2 && ibc.size() == 2, "two resonators");
        for (std::size_t i = 0; i < std::min(pec.size(), ibc.size()); ++i) {
            const double shift = (pec[i].omega - ibc[i].omega) / pec[i].omega;
            v.detail << " R" << i + 1 << " " << c::omega_to_ghz(pec[i].omega) << " -> "
                     << c::omega_to_ghz(ibc[i].omega) << " GHz (" << 100.0 * shift << "%)";
            v.require(shift >= 0.08 && shift <= 0.16, "shift band");
        }
        const double elapsed = seconds_since(t0);
        v.detail << ", " << elapsed << " s";
        v.require(elapsed < 60.0, "runtime");
    });

    criterion(5, "textbook LC zero-point fluctuation", [&](Verdict& v) {
        const double L = 5e-9, C = 2e-12;
        const double phi2 = 2.0 * oracle::e_charge * oracle::e_charge / oracle::hbar * std::sqrt(L / C);
        const auto m = quantize::bbq_extract(testnet::lc(L, C), tline::ConductorModel::PEC, lo, hi);
        v.require(m.mode_count() == 1, "one mode");
        const double got = m.phi_zpf(0, 0) * m.phi_zpf(0, 0);
        v.detail << " phi^2 " << got << " vs " << phi2 << ", rel " << rel(got, phi2) << " (tol 1e-6)";
        v.require(rel(got, phi2) < 1e-6, "accuracy");
    });

    criterion(6, "BBQ and EPR agree", [&](Verdict& v) {
        const double Lr = 1e-9;
        const std::vector<std::pair<std::string, tline::Netlist>> nets = {
            {"LC", testnet::lc(5e-9, 2e-12)},
            {"transmon+resonator", testnet::transmon_resonator(13e-9, 70e-15, 5e-15, Lr, 500e-15)},
            {"with kinetic", testnet::transmon_resonator(13e-9, 70e-15, 5e-15, Lr, 500e-15,
                                                         Lr * (1.0 / (0.88 * 0.88) - 1.0))}};
        for (const auto& [name, net] : nets) {
            const auto b = quantize::bbq_extract(net, tline::ConductorModel::IBC, lo, hi);
            const auto e = quantize::epr_extract(net, tline::ConductorModel::IBC, lo, hi).modes;
            v.require(b.mode_count() == e.mode_count(), name + " mode count");
            double dw = 0.0, dphi = 0.0;
            for (std::size_t m = 0; m < std::min(b.mode_count(), e.mode_count()); ++m) {
                dw = std::max(dw, rel(b.omegas[m], e.omegas[m]));
                dphi = std::max(dphi, rel(b.phi_zpf(0, m), e.phi_zpf(0, m)));
            }
            v.detail << " " << name << ": omega " << dw << ", phi " << dphi << ";";
            v.require(dw < 1e-3 && dphi < 1e-2, name);
        }
        v.detail << " (tol 1e-3, 1e-2)";
    });

    criterion(7, "transmon vs Cooper pair box at EJ/EC = 50", [](Verdict& v) {
        const double EC = 2.0 * oracle::pi * 250e6, EJ = 50.0 * EC;
        quantize::JunctionSpec j{"J", quantize::inductance_from_EJ(c::hbar * EJ),
                                 c::e_charge * c::e_charge / (2.0 * c::hbar * EC)};
        const double w = 1.0 / std::sqrt(j.L_J * j.C_J);
        quantize::ModeSet m;
        m.omegas = {w};
        m.junction_names = {"J"};
        m.phi_zpf.resize(1, 1);
        m.phi_zpf(0, 0) = std::sqrt(c::hbar * w / (2.0 * j.E_J()));
        const auto conv = fock::converge_truncation(quantize::assemble_hamiltonian(m, {j}, 6, 10));
        const auto cpb = oracle::cooper_pair_box(EJ, EC);
        const double w01 = cpb[1] - cpb[0], alpha = cpb[2] - 2.0 * cpb[1] + cpb[0];
        const double ew = rel(conv.report.omega_tilde[0], w01), ea = rel(conv.report.alpha[0], alpha);
        v.detail << " omega01 " << c::omega_to_ghz(conv.report.omega_tilde[0]) << " vs "
                 << c::omega_to_ghz(w01) << " GHz (" << ew << "), alpha "
                 << 1e3 * c::omega_to_ghz(conv.report.alpha[0]) << " vs " << 1e3 * c::omega_to_ghz(alpha)
                 << " MHz (" << ea << "), dims " << conv.dims[0];
        v.require(ew < 0.01, "omega within 1%");
        v.require(ea < 0.05, "alpha within 5%");
    });

    criterion(8, "junction fit round trip", [](Verdict& v) {
        const auto evaluate = fock::single_transmon_evaluator();
        for (const auto& [name, t] : measured_targets()) {
            const auto j = fock::fit_junction_to_measurement(t.omega, t.alpha, evaluate);
            const auto [w, a] = evaluate(j);
            const double ew = rel(w, t.omega), ea = rel(a, t.alpha);
            v.detail << " " << name << ": L_J " << j.L_J * 1e9 << " nH, C_J " << j.C_J * 1e15 << " fF, errors "
                     << ew << ", " << ea << ";";
            v.require(ew < 1e-4 && ea < 1e-4, name);
        }
        v.detail << " (tol 1e-4)";
    });

    criterion(9, "PEC vs IBC on the fitted two-qubit device", [](Verdict& v) {
        const auto net = testnet::two_qubit();
        pipeline::QuantizeOptions fit_opt;
        fit_opt.method = pipeline::Method::BBQ;
        fit_opt.model = tline::ConductorModel::IBC;
        fit_opt.workers = 2;
        const auto fitted = pipeline::fit_device_junctions(net, measured_targets(), fit_opt);
        pipeline::QuantizeOptions opt;
        opt.workers = 2;
        opt.model = tline::ConductorModel::PEC;
        const auto pec = pipeline::quantize_pairs(fitted, opt);
        opt.model = tline::ConductorModel::IBC;
        const auto ibc = pipeline::quantize_pairs(fitted, opt);
        v.require(pec.size() == 2 && ibc.size() == 2, "two pairs");
        for (std::size_t i = 0; i < std::min(pec.size(), ibc.size()); ++i) {
            const double dr = (pec[i].omega_r - ibc[i].omega_r) / pec[i].omega_r;
            const double dq = rel(ibc[i].omega_q, pec[i].omega_q);
            v.detail << " " << pec[i].junction << ": omega_R change " << 100.0 * dr << "%, omega_Q change "
                     << 100.0 * dq << "%, chi " << 1e3 * c::omega_to_ghz(pec[i].chi) << " -> "
                     << 1e3 * c::omega_to_ghz(ibc[i].chi) << " MHz;";
            v.require(dr >= 0.10 && dr <= 0.14, pec[i].junction + " omega_R band");
            v.require(dq < 0.01, pec[i].junction + " omega_Q");
            v.require(std::abs(ibc[i].chi) > std::abs(pec[i].chi), pec[i].junction + " |chi| increases");
        }
    });

    criterion(10, "byte-identical CSV across runs and worker counts", [](Verdict& v) {
        const fs::path root = fs::temp_directory_path() / ("scq_acceptance_" + std::to_string(::getpid()));
        fs::remove_all(root);
        const std::string net = testnet::config("two_qubit.json");
        const std::string measured = testnet::config("two_qubit_measured.json");
        const std::vector<std::pair<std::string, std::vector<std::string>>> jobs = {
            {"conductivity -m " + testnet::config("nb_100nm_material.json") + " -f 4:8:21 -T 0.01:8:9",
             {"conductivity.csv"}},
            {"temp-sweep -c " + testnet::config("nb_halfwave_resonator.json"), {"temp_sweep.csv"}},
            {"spectrum -n " + net + " --model ibc -f 6.4:7.8:401",
             {"spectrum.csv", "dips.csv", "bare_resonators.csv"}},
            {"quantize -n " + net + " --model ibc --measured " + measured, {"report.csv"}}};
        int k = 0, files = 0;
        for (const auto& [args, outputs] : jobs) {
            std::vector<fs::path> dirs;
            for (const char* w : {"1", "1", "6"}) {
                dirs.push_back(root / ("job" + std::to_string(k) + "_" + std::to_string(dirs.size())));
                v.require(run_cli(args + " -w " + w + " -o " + dirs.back().string()) == 0, args);
            }
            for (const auto& f : outputs) {
                const std::string ref = slurp(dirs[0] / f);
                v.require(!ref.empty(), f + " written");
                v.require(slurp(dirs[1] / f) == ref && slurp(dirs[2] / f) == ref, f + " identical");
                ++files;
            }
            ++k;
        }
        fs::remove_all(root);
        v.detail << " " << files << " CSV files compared over 3 runs each (workers 1, 1, 6)";
    });

    std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAIL") << std::endl;
    return failures == 0 ? 0 : 1;
}
