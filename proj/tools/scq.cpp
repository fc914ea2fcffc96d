// scq: command-line front end for the conductivity, line, quantization and
// reporting pipelines. Every run writes its artifacts plus manifest.json into
// the output directory; failures leave error.json there instead.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scq/constants.hpp"
#include "scq/cpw.hpp"
#include "scq/io.hpp"
#include "scq/materials.hpp"
#include "scq/network.hpp"
#include "scq/parallel.hpp"
#include "scq/pipeline.hpp"

namespace c = scq::constants;
namespace fs = std::filesystem;
using scq::Error;
using scq::ErrorKind;
using scq::io::format_number;
using scq::io::json;

namespace {

// "start:stop:count" or a comma-separated list.
std::vector<double> parse_grid(const std::string& spec, const std::string& what)
{
    const auto fail = [&] { throw Error(ErrorKind::InvalidInput, "bad " + what + " grid '" + spec + "'"); };
    std::vector<double> out;
    try {
        if (spec.find(':') != std::string::npos) {
            std::vector<std::string> parts;
            std::stringstream ss(spec);
            for (std::string p; std::getline(ss, p, ':');)
                parts.push_back(p);
            if (parts.size() != 3)
                fail();
            const double start = std::stod(parts[0]);
            const double stop = std::stod(parts[1]);
            const long count = std::stol(parts[2]);
            if (count < 1 || (count > 1 && !(start < stop)))
                fail();
            out = scq::numerics::linspace(start, stop, static_cast<std::size_t>(count));
        } else {
            std::stringstream ss(spec);
            for (std::string p; std::getline(ss, p, ',');)
                out.push_back(std::stod(p));
        }
    } catch (const std::logic_error&) {
        fail();
    }
    if (out.empty())
        fail();
    return out;
}

// Output directory, artifact bookkeeping and the manifest.
class Run {
public:
    Run(std::string command, fs::path out) : out_(std::move(out))
    {
        manifest_.command = std::move(command);
        start_ = std::chrono::steady_clock::now();
        fs::create_directories(out_);
    }

    void input(const fs::path& p)
    {
        if (!fs::exists(p))
            throw Error(ErrorKind::InvalidInput, "input file '" + p.string() + "' does not exist");
        manifest_.inputs.push_back(p);
    }
    void parameter(const std::string& key, const std::string& value) { manifest_.parameters[key] = value; }
    std::string hash() const { return scq::io::input_hash(manifest_); }

    void write(const std::string& name, const std::string& body)
    {
        scq::io::write_text(out_ / name, body);
        manifest_.outputs.push_back(name);
    }
    void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

    void finish()
    {
        manifest_.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        scq::io::write_text(out_ / "manifest.json", scq::io::manifest_json(manifest_).dump(2) + "\n");
    }

    const fs::path& dir() const { return out_; }

private:
    fs::path out_;
    scq::io::Manifest manifest_;
    std::chrono::steady_clock::time_point start_;
};

struct Common {
    std::string out = "out";
    unsigned workers = 1;
};

void add_common(CLI::App* sub, Common& common)
{
    sub->add_option("-o,--out", common.out, "Output directory")->capture_default_str();
    sub->add_option("-w,--workers", common.workers, "Worker threads")->capture_default_str()->check(CLI::Range(1u, 256u));
}

// --- conductivity / zs -------------------------------------------------------

struct MaterialJob {
    Common common;
    std::string material;
    std::string freq = "4:8:5";
    std::string temp = "0.01";
    bool bulk = false;
    std::string thickness_nm;
    std::string sigma_n;
};

scq::materials::SuperconductorSpec load_material(const std::string& path)
{
    const json j = scq::io::read_json(path);
    return scq::io::material_from_json(j, j.value("name", fs::path(path).stem().string()));
}

const std::vector<std::string> table_header{"f_GHz", "T_K", "sigma1", "sigma2", "Rs_ohm_per_sq",
                                            "Xs_ohm_per_sq"};

// One row per (f, T); failures become error rows so the grid stays complete.
std::vector<std::vector<std::string>> material_table(const scq::materials::SuperconductorSpec& spec,
                                                     const std::vector<double>& f_ghz,
                                                     const std::vector<double>& temps, bool bulk,
                                                     unsigned workers)
{
    const std::size_t n = f_ghz.size() * temps.size();
    std::vector<std::vector<std::string>> rows(n);
    scq::parallel_for(n, workers, [&](std::size_t k) {
        const double f = f_ghz[k / temps.size()];
        const double T = temps[k % temps.size()];
        const double w = c::ghz_to_omega(f);
        std::vector<std::string> row{format_number(f), format_number(T)};
        try {
            const auto sigma = scq::materials::complex_conductivity(spec, w, T);
            const bool lossless = scq::materials::lossless_by_default(T);
            const auto zs = (bulk || !spec.is_film())
                                ? scq::materials::surface_impedance_bulk(sigma, lossless)
                                : scq::materials::surface_impedance_film(sigma, *spec.thickness, lossless);
            for (double v : {sigma.sigma1, sigma.sigma2, zs.Rs, zs.Xs})
                row.push_back(format_number(v));
        } catch (const Error& err) {
            row.insert(row.end(), {"nan", "nan", "nan", "nan"});
        }
        rows[k] = std::move(row);
    });
    return rows;
}

void run_material(const std::string& command, const MaterialJob& job)
{
    Run run(command, job.common.out);
    run.input(job.material);
    run.parameter("freq_GHz", job.freq);
    run.parameter("temp_K", job.temp);
    run.parameter("bulk", job.bulk ? "1" : "0");
    auto spec = load_material(job.material);
    const auto f = parse_grid(job.freq, "frequency");
    const auto T = parse_grid(job.temp, "temperature");

    const auto rows = material_table(spec, f, T, job.bulk, job.common.workers);
    run.write(command + ".csv", scq::io::csv(table_header, rows));

    std::vector<double> x;
    std::vector<double> y;
    const std::size_t column = command == "zs" ? 5 : 3;
    for (const auto& r : rows) {
        if (r[1] == rows.front()[1] && r[column] != "nan") {
            x.push_back(std::stod(r[0]));
            y.push_back(std::stod(r[column]));
        }
    }
    run.write(command + ".dat", scq::io::plot_data(x, y));

    if (command == "zs" && !job.thickness_nm.empty()) {
        const auto d = parse_grid(job.thickness_nm, "thickness");
        std::vector<std::vector<std::string>> out(d.size());
        scq::parallel_for(d.size(), job.common.workers, [&](std::size_t k) {
            auto s = spec;
            s.thickness = d[k] * 1e-9;
            const auto z = scq::materials::surface_impedance(s, c::ghz_to_omega(f.front()), T.front());
            out[k] = {format_number(d[k]), format_number(z.Xs)};
        });
        run.parameter("thickness_nm", job.thickness_nm);
        run.write("zs_thickness.csv", scq::io::csv({"thickness_nm", "Xs_ohm_per_sq"}, out));
    }
    if (command == "zs" && !job.sigma_n.empty()) {
        const auto sn = parse_grid(job.sigma_n, "sigma_n");
        const auto pts = scq::materials::impedance_vs_purity(spec, c::ghz_to_omega(f.front()), T.front(), sn);
        std::vector<std::vector<std::string>> out;
        for (const auto& p : pts) {
            out.push_back({format_number(p.sigma_n), format_number(p.mean_free_path * 1e9),
                           p.ok ? format_number(p.Xs) : "nan"});
        }
        run.parameter("sigma_n", job.sigma_n);
        run.write("zs_purity.csv", scq::io::csv({"sigma_n_S_per_m", "mean_free_path_nm", "Xs_ohm_per_sq"}, out));
    }
    run.finish();
}

// --- resonator / temp-sweep --------------------------------------------------

struct ResonatorConfig {
    scq::tline::CpwGeometry geometry;
    scq::tline::ResonatorMode mode = scq::tline::ResonatorMode::Half;
    double length = 0.0;
    double temperature = 0.01;
};

ResonatorConfig load_resonator(const std::string& path)
{
    const json j = scq::io::read_json(path);
    if (!j.contains("material") || !j.contains("geometry") || !j.contains("resonator"))
        throw Error(ErrorKind::InvalidInput, "resonator config needs material, geometry and resonator");
    const auto& jm = j.at("material");
    const std::string mname = jm.value("name", std::string("film"));
    std::map<std::string, scq::materials::SuperconductorSpec> mats{
        {mname, scq::io::material_from_json(jm, mname)}};
    ResonatorConfig cfg;
    cfg.geometry = scq::io::geometry_from_json(j.at("geometry"), "cpw", mats);
    const auto& r = j.at("resonator");
    const std::string mode = r.value("mode", std::string("half"));
    if (mode == "half")
        cfg.mode = scq::tline::ResonatorMode::Half;
    else if (mode == "quarter")
        cfg.mode = scq::tline::ResonatorMode::Quarter;
    else
        throw Error(ErrorKind::InvalidInput, "resonator mode must be half or quarter");
    if (r.contains("length_um"))
        cfg.length = r.at("length_um").get<double>() * 1e-6;
    else if (r.contains("pec_frequency_GHz"))
        cfg.length = scq::tline::length_for_pec_frequency(
            cfg.geometry, c::ghz_to_omega(r.at("pec_frequency_GHz").get<double>()), cfg.mode);
    else
        throw Error(ErrorKind::InvalidInput, "resonator needs length_um or pec_frequency_GHz");
    cfg.temperature = j.value("temperature_K", 0.01);
    return cfg;
}

struct ResonatorJob {
    Common common;
    std::string config;
    std::string temps;
    std::string reduced = "0.05:0.95:19";
};

void run_resonator(const ResonatorJob& job)
{
    Run run("resonator", job.common.out);
    run.input(job.config);
    const auto cfg = load_resonator(job.config);
    const double f_pec = c::omega_to_ghz(scq::tline::resonator_frequency(
        cfg.geometry, cfg.length, cfg.mode, cfg.temperature, scq::tline::ConductorModel::PEC));
    const double f_ibc = c::omega_to_ghz(scq::tline::resonator_frequency(
        cfg.geometry, cfg.length, cfg.mode, cfg.temperature, scq::tline::ConductorModel::IBC));
    const auto p = scq::tline::cpw_line_params(cfg.geometry, c::ghz_to_omega(f_ibc), cfg.temperature);
    const std::vector<std::string> header{"length_um", "T_K", "pec_GHz", "ibc_GHz", "kinetic_shift_rel",
                                          "Z0_ohm", "L_kin_over_L_geo"};
    run.write("resonator.csv",
              scq::io::csv(header, {{format_number(cfg.length * 1e6), format_number(cfg.temperature),
                                     format_number(f_pec), format_number(f_ibc),
                                     format_number((f_pec - f_ibc) / f_pec), format_number(p.Z0()),
                                     format_number(p.L_kin / p.L_geo)}}));
    run.finish();
}

void run_temp_sweep(const ResonatorJob& job)
{
    Run run("temp-sweep", job.common.out);
    run.input(job.config);
    const auto cfg = load_resonator(job.config);
    std::vector<double> T;
    if (!job.temps.empty()) {
        T = parse_grid(job.temps, "temperature");
        run.parameter("temp_K", job.temps);
    } else {
        for (double t : parse_grid(job.reduced, "reduced temperature"))
            T.push_back(t * cfg.geometry.film.Tc);
        run.parameter("reduced_T", job.reduced);
    }
    const auto pts = scq::tline::temperature_sweep(cfg.geometry, cfg.length, cfg.mode, T, job.common.workers);
    const double f0 = c::omega_to_ghz(scq::tline::resonator_frequency(
        cfg.geometry, cfg.length, cfg.mode, 0.0, scq::tline::ConductorModel::IBC));
    const double f_pec = c::omega_to_ghz(scq::tline::resonator_frequency(
        cfg.geometry, cfg.length, cfg.mode, 0.0, scq::tline::ConductorModel::PEC));

    std::vector<std::vector<std::string>> rows;
    std::vector<double> x;
    std::vector<double> y;
    // T = 0 row first: the calibrated kinetic shift against PEC.
    rows.push_back({"0", "0", format_number(f0), "0", "0", format_number((f_pec - f0) / f_pec)});
    for (const auto& p : pts) {
        if (!p.ok) {
            rows.push_back({format_number(p.T), format_number(p.reduced_T), "nan", "nan", "nan", "nan"});
            continue;
        }
        const double f = c::omega_to_ghz(p.omega);
        rows.push_back({format_number(p.T), format_number(p.reduced_T), format_number(f),
                        format_number(p.shift_hz * 1e-6), format_number(p.shift_hz * 1e-9 / f0),
                        format_number((f_pec - f) / f_pec)});
        x.push_back(p.reduced_T);
        y.push_back(p.shift_hz * 1e-6);
    }
    run.write("temp_sweep.csv", scq::io::csv({"T_K", "T_over_Tc", "f_GHz", "shift_MHz", "shift_rel",
                                              "kinetic_shift_vs_pec_rel"},
                                             rows));
    run.write("temp_sweep.dat", scq::io::plot_data(x, y));
    run.finish();
}

// --- spectrum ------------------------------------------------------------------

struct NetlistJob {
    Common common;
    std::string netlist;
    std::string model = "ibc";
    std::string method = "epr";
    std::string measured;
    std::string in_port = "P1";
    std::string out_port = "P2";
    std::string freq = "6:8:2001";
    int order = 6;
};

void run_spectrum(const NetlistJob& job)
{
    Run run("spectrum", job.common.out);
    run.input(job.netlist);
    run.parameter("model", job.model);
    run.parameter("freq_GHz", job.freq);
    run.parameter("ports", job.in_port + "," + job.out_port);
    const auto nl = scq::io::netlist_from_json(scq::io::read_json(job.netlist));
    const auto model = scq::pipeline::parse_model(job.model);
    std::vector<double> grid;
    for (double f : parse_grid(job.freq, "frequency"))
        grid.push_back(c::ghz_to_omega(f));

    const auto resp = scq::tline::transmission_spectrum(nl, job.in_port, job.out_port, grid, model,
                                                        job.common.workers);
    std::vector<std::vector<std::string>> rows;
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double mag = std::abs(resp.S21[k]);
        const double f = c::omega_to_ghz(grid[k]);
        rows.push_back({format_number(f), format_number(mag), format_number(20.0 * std::log10(mag)),
                        format_number(std::abs(resp.S11[k]))});
        x.push_back(f);
        y.push_back(20.0 * std::log10(mag));
    }
    run.write("spectrum.csv", scq::io::csv({"f_GHz", "S21_mag", "S21_dB", "S11_mag"}, rows));
    run.write("spectrum.dat", scq::io::plot_data(x, y));

    const auto dips = scq::tline::resonance_dips(
        resp, scq::tline::s21_magnitude(nl, job.in_port, job.out_port, model));
    std::vector<std::vector<std::string>> drows;
    for (double w : dips)
        drows.push_back({format_number(c::omega_to_ghz(w))});
    run.write("dips.csv", scq::io::csv({"f_GHz"}, drows));

    std::vector<std::vector<std::string>> brows;
    for (const auto& r : scq::tline::bare_resonator_frequencies(nl, model))
        brows.push_back({r.element, format_number(c::omega_to_ghz(r.omega))});
    run.write("bare_resonators.csv", scq::io::csv({"element", "f_GHz"}, brows));
    run.finish();
}

// --- quantize / fit-junction / report -------------------------------------------

scq::pipeline::QuantizeOptions quantize_options(const NetlistJob& job)
{
    scq::pipeline::QuantizeOptions o;
    o.method = scq::pipeline::parse_method(job.method);
    o.model = scq::pipeline::parse_model(job.model);
    o.expansion_order = job.order;
    o.workers = job.common.workers;
    return o;
}

std::vector<scq::io::MeasuredPair> load_measured(Run& run, const std::string& path)
{
    if (path.empty())
        return {};
    run.input(path);
    return scq::io::measurements_from_json(scq::io::read_json(path));
}

void run_quantize(const NetlistJob& job)
{
    Run run("quantize", job.common.out);
    run.input(job.netlist);
    run.parameter("model", job.model);
    run.parameter("method", job.method);
    run.parameter("order", std::to_string(job.order));
    const auto measured = load_measured(run, job.measured);
    const auto nl = scq::io::netlist_from_json(scq::io::read_json(job.netlist));
    const auto opt = quantize_options(job);

    const auto modes = scq::pipeline::linear_modes(nl, opt);
    std::vector<std::string> junctions = modes.junction_names;
    std::vector<scq::pipeline::PairResult> pairs(junctions.size());
    scq::parallel_for(pairs.size(), opt.workers, [&](std::size_t k) {
        pairs[k] = scq::pipeline::quantize_pair(modes, nl, junctions[k], opt);
    });

    const std::string hash = run.hash();
    json mj = scq::io::modeset_to_json(modes);
    mj["input_hash"] = hash;
    run.write_json("modes.json", mj);
    run.write_json("report.json", scq::io::pair_report_json(pairs, job.model, job.method, hash));
    run.write("report.csv", scq::io::pair_report_csv(pairs, job.model, job.method, measured));
    run.finish();
}

std::map<std::string, scq::pipeline::QubitTarget> targets_of(const std::vector<scq::io::MeasuredPair>& measured)
{
    std::map<std::string, scq::pipeline::QubitTarget> t;
    for (const auto& m : measured)
        t[m.junction] = {c::ghz_to_omega(m.qubit_GHz), c::ghz_to_omega(m.anharmonicity_MHz * 1e-3)};
    return t;
}

void run_fit(const NetlistJob& job)
{
    Run run("fit-junction", job.common.out);
    run.input(job.netlist);
    run.parameter("model", job.model);
    run.parameter("method", job.method);
    run.parameter("order", std::to_string(job.order));
    if (job.measured.empty())
        throw Error(ErrorKind::InvalidInput, "fit-junction needs --measured");
    const auto measured = load_measured(run, job.measured);
    const auto nl = scq::io::netlist_from_json(scq::io::read_json(job.netlist));
    const auto opt = quantize_options(job);
    const auto fitted = scq::pipeline::fit_device_junctions(nl, targets_of(measured), opt);

    std::vector<std::vector<std::string>> rows;
    for (const auto& m : measured) {
        const auto& spec = fitted.junction_of(fitted.element(m.junction));
        const auto [w, a] = scq::pipeline::device_evaluator(fitted, m.junction, opt)(spec);
        const double fq = c::omega_to_ghz(w);
        const double am = c::omega_to_ghz(a) * 1e3;
        rows.push_back({m.label, m.junction, format_number(spec.L_J * 1e9), format_number(spec.C_J * 1e15),
                        format_number(spec.E_J() / (c::hbar * c::two_pi * c::GHz)), format_number(m.qubit_GHz),
                        format_number(fq), format_number(std::abs(fq / m.qubit_GHz - 1.0)),
                        format_number(m.anharmonicity_MHz), format_number(am),
                        format_number(std::abs(am / m.anharmonicity_MHz - 1.0))});
    }
    run.write("fit.csv", scq::io::csv({"label", "junction", "L_J_nH", "C_J_fF", "E_J_GHz", "target_qubit_GHz",
                                       "qubit_GHz", "qubit_rel_err", "target_anharmonicity_MHz",
                                       "anharmonicity_MHz", "anharmonicity_rel_err"},
                                      rows));
    json out = scq::io::netlist_to_json(fitted);
    out["input_hash"] = run.hash();
    run.write_json("fitted_netlist.json", out);
    run.finish();
}

// Junctions fitted once (IBC context), then both models side by side.
void run_report(const NetlistJob& job)
{
    Run run("report", job.common.out);
    run.input(job.netlist);
    run.parameter("method", job.method);
    run.parameter("order", std::to_string(job.order));
    if (job.measured.empty())
        throw Error(ErrorKind::InvalidInput, "report needs --measured");
    const auto measured = load_measured(run, job.measured);
    const auto nl = scq::io::netlist_from_json(scq::io::read_json(job.netlist));

    NetlistJob fit_job = job;
    fit_job.model = "ibc";
    fit_job.method = "bbq";
    const auto fitted = scq::pipeline::fit_device_junctions(nl, targets_of(measured), quantize_options(fit_job));

    const std::string hash = run.hash();
    json report;
    report["input_hash"] = hash;
    std::string table;
    for (const std::string model : {"pec", "ibc"}) {
        NetlistJob mj = job;
        mj.model = model;
        const auto pairs = scq::pipeline::quantize_pairs(fitted, quantize_options(mj));
        report[model] = scq::io::pair_report_json(pairs, model, job.method, hash);
        const std::string body = scq::io::pair_report_csv(pairs, model, job.method, measured);
        table += table.empty() ? body : body.substr(body.find('\n') + 1);
    }
    run.write("comparison.csv", table);
    run.write_json("comparison.json", report);
    json fj = scq::io::netlist_to_json(fitted);
    fj["input_hash"] = hash;
    run.write_json("fitted_netlist.json", fj);
    run.finish();
}

int exit_code(ErrorKind kind)
{
    return static_cast<int>(scq::classify(kind));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kinetic-inductance-aware circuit quantization toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(SCQ_VERSION));

    MaterialJob cond;
    auto* c_cond = app.add_subcommand("conductivity", "Complex conductivity and surface impedance table");
    c_cond->add_option("-m,--material", cond.material, "Material JSON")->required();
    c_cond->add_option("-f,--freq", cond.freq, "Frequency grid in GHz (start:stop:count or list)")->capture_default_str();
    c_cond->add_option("-T,--temp", cond.temp, "Temperature grid in K")->capture_default_str();
    add_common(c_cond, cond.common);

    MaterialJob zs;
    auto* c_zs = app.add_subcommand("zs", "Surface impedance table with thickness and purity sweeps");
    c_zs->add_option("-m,--material", zs.material, "Material JSON")->required();
    c_zs->add_option("-f,--freq", zs.freq, "Frequency grid in GHz")->capture_default_str();
    c_zs->add_option("-T,--temp", zs.temp, "Temperature grid in K")->capture_default_str();
    c_zs->add_flag("--bulk", zs.bulk, "Ignore the film thickness");
    c_zs->add_option("--thickness-nm", zs.thickness_nm, "Thickness sweep at the first (f, T)");
    c_zs->add_option("--sigma-n", zs.sigma_n, "Normal-state conductivity sweep (S/m) at the first (f, T)");
    add_common(c_zs, zs.common);

    ResonatorJob res;
    auto* c_res = app.add_subcommand("resonator", "PEC and IBC resonance of a CPW resonator");
    c_res->add_option("-c,--config", res.config, "Resonator JSON")->required();
    add_common(c_res, res.common);

    ResonatorJob sweep;
    auto* c_sweep = app.add_subcommand("temp-sweep", "Resonance shift versus temperature");
    c_sweep->add_option("-c,--config", sweep.config, "Resonator JSON")->required();
    c_sweep->add_option("-T,--temp", sweep.temps, "Temperature grid in K (overrides --reduced)");
    c_sweep->add_option("--reduced", sweep.reduced, "Grid in T/Tc")->capture_default_str();
    add_common(c_sweep, sweep.common);

    NetlistJob spec;
    auto* c_spec = app.add_subcommand("spectrum", "Feedline S21 of a netlist");
    c_spec->add_option("-n,--netlist", spec.netlist, "Netlist JSON")->required();
    c_spec->add_option("--model", spec.model, "pec|ibc")->capture_default_str();
    c_spec->add_option("-f,--freq", spec.freq, "Frequency grid in GHz")->capture_default_str();
    c_spec->add_option("--in", spec.in_port, "Input port element")->capture_default_str();
    c_spec->add_option("--out-port", spec.out_port, "Output port element")->capture_default_str();
    add_common(c_spec, spec.common);

    NetlistJob quant;
    auto* c_quant = app.add_subcommand("quantize", "Pairwise qubit/resonator quantization");
    c_quant->add_option("-n,--netlist", quant.netlist, "Netlist JSON")->required();
    c_quant->add_option("--model", quant.model, "pec|ibc")->capture_default_str();
    c_quant->add_option("--method", quant.method, "epr|bbq")->capture_default_str();
    c_quant->add_option("--order", quant.order, "Cosine expansion order")->capture_default_str();
    c_quant->add_option("--measured", quant.measured, "Measurement JSON for comparison columns");
    add_common(c_quant, quant.common);

    NetlistJob fit;
    fit.method = "bbq";
    auto* c_fit = app.add_subcommand("fit-junction", "Fit L_J, C_J to measured qubit frequency and anharmonicity");
    c_fit->add_option("-n,--netlist", fit.netlist, "Netlist JSON")->required();
    c_fit->add_option("--measured", fit.measured, "Measurement JSON")->required();
    c_fit->add_option("--model", fit.model, "pec|ibc")->capture_default_str();
    c_fit->add_option("--method", fit.method, "epr|bbq")->capture_default_str();
    c_fit->add_option("--order", fit.order, "Cosine expansion order")->capture_default_str();
    add_common(c_fit, fit.common);

    NetlistJob rep;
    auto* c_rep = app.add_subcommand("report", "Fit junctions, quantize under PEC and IBC, compare to measurement");
    c_rep->add_option("-n,--netlist", rep.netlist, "Netlist JSON")->required();
    c_rep->add_option("--measured", rep.measured, "Measurement JSON")->required();
    c_rep->add_option("--method", rep.method, "epr|bbq")->capture_default_str();
    c_rep->add_option("--order", rep.order, "Cosine expansion order")->capture_default_str();
    add_common(c_rep, rep.common);

    CLI11_PARSE(app, argc, argv);

    std::string out_dir = "out";
    for (const auto* common : {&cond.common, &zs.common, &res.common, &sweep.common, &spec.common,
                               &quant.common, &fit.common, &rep.common})
        if (common->out != "out")
            out_dir = common->out;

    try {
        if (c_cond->parsed())
            run_material("conductivity", cond);
        else if (c_zs->parsed())
            run_material("zs", zs);
        else if (c_res->parsed())
            run_resonator(res);
        else if (c_sweep->parsed())
            run_temp_sweep(sweep);
        else if (c_spec->parsed())
            run_spectrum(spec);
        else if (c_quant->parsed())
            run_quantize(quant);
        else if (c_fit->parsed())
            run_fit(fit);
        else if (c_rep->parsed())
            run_report(rep);
    } catch (const Error& err) {
        const int code = exit_code(err.kind());
        std::cerr << "scq: " << err.what() << "\n";
        try {
            scq::io::write_text(fs::path(out_dir) / "error.json", scq::io::error_json(err, code).dump(2) + "\n");
        } catch (...) {
        }
        return code;
    } catch (const std::exception& e) {
        std::cerr << "scq: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
