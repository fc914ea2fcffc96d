#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "scq/constants.hpp"
#include "scq/io.hpp"

namespace scq::io {

namespace c = scq::constants;

namespace {

[[noreturn]] void bad(const std::string& what)
{
    throw Error(ErrorKind::InvalidInput, what);
}

double number(const json& j, const char* key, const std::string& where)
{
    if (!j.contains(key))
        bad(where + ": missing '" + key + "'");
    if (!j.at(key).is_number())
        bad(where + ": '" + key + "' must be a number");
    return j.at(key).get<double>();
}

std::optional<double> optional_number(const json& j, const char* key, const std::string& where)
{
    if (!j.contains(key) || j.at(key).is_null())
        return std::nullopt;
    return number(j, key, where);
}

std::string text(const json& j, const char* key, const std::string& where)
{
    if (!j.contains(key) || !j.at(key).is_string())
        bad(where + ": missing string '" + key + "'");
    return j.at(key).get<std::string>();
}

}  // namespace

json read_json(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        bad("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        bad("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_text(const fs::path& path, const std::string& body)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        bad("cannot write '" + path.string() + "'");
    out << body;
}

materials::SuperconductorSpec material_from_json(const json& j, const std::string& name)
{
    const std::string where = "material '" + name + "'";
    const auto delta = optional_number(j, "delta0_meV", where);
    const auto mfp = optional_number(j, "mean_free_path_nm", where);
    const auto d = optional_number(j, "thickness_nm", where);
    return materials::make_superconductor(
        name, number(j, "tc_K", where), number(j, "lambda_L_nm", where) * 1e-9,
        number(j, "xi_nm", where) * 1e-9, number(j, "sigma_n_S_per_m", where),
        delta ? std::optional<double>(*delta * c::meV) : std::nullopt,
        mfp ? std::optional<double>(*mfp * 1e-9) : std::nullopt,
        d ? std::optional<double>(*d * 1e-9) : std::nullopt);
}

json material_to_json(const materials::SuperconductorSpec& spec)
{
    json j;
    j["tc_K"] = spec.Tc;
    j["delta0_meV"] = spec.Delta0 / c::meV;
    j["lambda_L_nm"] = spec.lambda_L * 1e9;
    j["xi_nm"] = spec.xi * 1e9;
    j["sigma_n_S_per_m"] = spec.sigma_n;
    if (spec.mean_free_path)
        j["mean_free_path_nm"] = *spec.mean_free_path * 1e9;
    if (spec.thickness)
        j["thickness_nm"] = *spec.thickness * 1e9;
    return j;
}

tline::CpwGeometry geometry_from_json(const json& j, const std::string& name,
                                      const std::map<std::string, materials::SuperconductorSpec>& mats)
{
    const std::string where = "geometry '" + name + "'";
    tline::CpwGeometry g;
    g.name = name;
    g.width = number(j, "width_um", where) * 1e-6;
    g.gap = number(j, "gap_um", where) * 1e-6;
    g.eps_r = number(j, "eps_r", where);
    g.substrate_thickness = number(j, "substrate_thickness_um", where) * 1e-6;
    g.g_factor = optional_number(j, "g_factor_per_m", where);
    const auto material = text(j, "material", where);
    const auto it = mats.find(material);
    if (it == mats.end())
        bad(where + ": unknown material '" + material + "'");
    g.film = it->second;
    g.validate();
    return g;
}

json geometry_to_json(const tline::CpwGeometry& g)
{
    json j;
    j["width_um"] = g.width * 1e6;
    j["gap_um"] = g.gap * 1e6;
    j["eps_r"] = g.eps_r;
    j["substrate_thickness_um"] = g.substrate_thickness * 1e6;
    j["material"] = g.film.name;
    if (g.g_factor)
        j["g_factor_per_m"] = *g.g_factor;
    return j;
}

tline::Netlist netlist_from_json(const json& j)
{
    using tline::ElementKind;
    tline::Netlist n;
    if (j.contains("temperature_K"))
        n.temperature = number(j, "temperature_K", "netlist");

    const json jm = j.value("materials", json::object());
    const json jg = j.value("geometries", json::object());
    const json jj_all = j.value("junctions", json::object());
    std::map<std::string, materials::SuperconductorSpec> mats;
    for (const auto& [name, m] : jm.items())
        mats.emplace(name, material_from_json(m, name));
    for (const auto& [name, g] : jg.items())
        n.geometries.emplace(name, geometry_from_json(g, name, mats));
    for (const auto& [name, jj] : jj_all.items()) {
        const std::string where = "junction '" + name + "'";
        n.junctions.emplace(name, quantize::JunctionSpec{name, number(jj, "L_J_nH", where) * 1e-9,
                                                         number(jj, "C_J_fF", where) * 1e-15});
    }
    if (!j.contains("nodes") || !j.at("nodes").is_array())
        bad("netlist: missing 'nodes' array");
    n.nodes = j.at("nodes").get<std::vector<std::string>>();
    if (!j.contains("elements") || !j.at("elements").is_array())
        bad("netlist: missing 'elements' array");

    for (const auto& e : j.at("elements")) {
        tline::Element el;
        el.name = text(e, "name", "element");
        const std::string where = "element '" + el.name + "'";
        const auto type = text(e, "type", where);
        el.node_a = text(e, "a", where);
        el.node_b = e.value("b", std::string());
        if (type == "capacitor" || type == "coupling_capacitor") {
            el.kind = ElementKind::Capacitor;
            el.value = number(e, "C_fF", where) * 1e-15;
        } else if (type == "inductor") {
            el.kind = ElementKind::Inductor;
            el.value = number(e, "L_nH", where) * 1e-9;
            el.kinetic = optional_number(e, "kinetic_nH", where).value_or(0.0) * 1e-9;
        } else if (type == "junction") {
            el.kind = ElementKind::Junction;
            el.ref = text(e, "junction", where);
        } else if (type == "tline") {
            el.kind = ElementKind::Tline;
            el.ref = text(e, "geometry", where);
            el.length = number(e, "length_um", where) * 1e-6;
            const auto mode = e.value("mode", std::string("through"));
            if (mode == "quarter") {
                if (!el.node_b.empty() && !tline::is_ground(el.node_b))
                    bad(where + ": a quarter-wave segment ends on ground");
                el.node_b = "gnd";
            } else if (mode == "half") {
                if (!el.node_b.empty() && !tline::is_open(el.node_b))
                    bad(where + ": a half-wave segment ends open");
                el.node_b = "open";
            } else if (mode != "through") {
                bad(where + ": mode must be quarter, half or through");
            }
        } else if (type == "port") {
            el.kind = ElementKind::Port;
            el.value = number(e, "Z0_ohm", where);
        } else {
            bad(where + ": unknown element type '" + type + "'");
        }
        if (el.node_b.empty())
            bad(where + ": missing node 'b'");
        n.elements.push_back(std::move(el));
    }
    n.validate();
    return n;
}

json netlist_to_json(const tline::Netlist& n)
{
    using tline::ElementKind;
    json j;
    j["temperature_K"] = n.temperature;
    json mats = json::object();
    json geoms = json::object();
    for (const auto& [name, g] : n.geometries) {
        geoms[name] = geometry_to_json(g);
        mats[g.film.name] = material_to_json(g.film);
    }
    j["materials"] = mats;
    j["geometries"] = geoms;
    json juncs = json::object();
    for (const auto& [name, s] : n.junctions)
        juncs[name] = {{"L_J_nH", s.L_J * 1e9}, {"C_J_fF", s.C_J * 1e15}};
    j["junctions"] = juncs;
    j["nodes"] = n.nodes;
    json elements = json::array();
    for (const auto& e : n.elements) {
        json x{{"name", e.name}, {"a", e.node_a}, {"b", e.node_b}};
        switch (e.kind) {
        case ElementKind::Capacitor:
            x["type"] = "capacitor";
            x["C_fF"] = e.value * 1e15;
            break;
        case ElementKind::Inductor:
            x["type"] = "inductor";
            x["L_nH"] = e.value * 1e9;
            x["kinetic_nH"] = e.kinetic * 1e9;
            break;
        case ElementKind::Junction:
            x["type"] = "junction";
            x["junction"] = e.ref;
            break;
        case ElementKind::Tline:
            x["type"] = "tline";
            x["geometry"] = e.ref;
            x["length_um"] = e.length * 1e6;
            switch (tline::segment_mode(e)) {
            case tline::SegmentMode::Quarter:
                x["mode"] = "quarter";
                break;
            case tline::SegmentMode::Half:
                x["mode"] = "half";
                break;
            case tline::SegmentMode::Through:
                x["mode"] = "through";
                break;
            }
            break;
        case ElementKind::Port:
            x["type"] = "port";
            x["Z0_ohm"] = e.value;
            break;
        }
        elements.push_back(std::move(x));
    }
    j["elements"] = elements;
    return j;
}

json modeset_to_json(const quantize::ModeSet& m)
{
    json j;
    json ghz = json::array();
    for (double w : m.omegas)
        ghz.push_back(c::omega_to_ghz(w));
    j["modes_GHz"] = ghz;
    j["junction_names"] = m.junction_names;
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.phi_zpf.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.phi_zpf.cols(); ++k)
            row.push_back(m.phi_zpf(r, k));
        rows.push_back(row);
    }
    j["phi_zpf"] = rows;
    return j;
}

quantize::ModeSet modeset_from_json(const json& j)
{
    quantize::ModeSet m;
    try {
        for (double f : j.at("modes_GHz").get<std::vector<double>>())
            m.omegas.push_back(c::ghz_to_omega(f));
        m.junction_names = j.at("junction_names").get<std::vector<std::string>>();
        const auto rows = j.at("phi_zpf").get<std::vector<std::vector<double>>>();
        m.phi_zpf.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m.omegas.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != m.omegas.size())
                bad("mode set: phi_zpf row length differs from the mode count");
            for (std::size_t k = 0; k < rows[r].size(); ++k)
                m.phi_zpf(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = rows[r][k];
        }
    } catch (const json::exception& e) {
        bad(std::string("mode set: ") + e.what());
    }
    m.validate();
    return m;
}

std::vector<MeasuredPair> measurements_from_json(const json& j)
{
    if (!j.contains("pairs") || !j.at("pairs").is_array())
        bad("measurement file: missing 'pairs' array");
    std::vector<MeasuredPair> out;
    for (const auto& p : j.at("pairs")) {
        MeasuredPair m;
        m.label = text(p, "label", "measurement");
        const std::string where = "measurement '" + m.label + "'";
        m.junction = text(p, "junction", where);
        m.qubit_GHz = number(p, "qubit_GHz", where);
        m.anharmonicity_MHz = number(p, "anharmonicity_MHz", where);
        m.resonator_GHz = optional_number(p, "resonator_GHz", where);
        m.dispersive_shift_MHz = optional_number(p, "dispersive_shift_MHz", where);
        m.bare_resonator_GHz = optional_number(p, "bare_resonator_GHz", where);
        out.push_back(std::move(m));
    }
    return out;
}

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows)
{
    std::string out;
    const auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k)
                out += ',';
            out += cells[k];
        }
        out += '\n';
    };
    line(header);
    for (const auto& r : rows)
        line(r);
    return out;
}

std::string plot_data(const std::vector<double>& x, const std::vector<double>& y)
{
    std::string out;
    for (std::size_t k = 0; k < x.size() && k < y.size(); ++k)
        out += format_number(x[k]) + ' ' + format_number(y[k]) + '\n';
    return out;
}

std::string sha256_hex(const std::string& bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorKind::InvalidInput, "SHA-256 digest failed");
    std::ostringstream s;
    for (unsigned int k = 0; k < len; ++k)
        s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
    return s.str();
}

std::string sha256_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        bad("cannot open '" + path.string() + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return sha256_hex(s.str());
}

std::string input_hash(const Manifest& m)
{
    std::string all = m.command + '\n';
    for (const auto& p : m.inputs)
        all += sha256_file(p) + '\n';
    for (const auto& [k, v] : m.parameters)
        all += k + '=' + v + '\n';
    return sha256_hex(all);
}

json manifest_json(const Manifest& m)
{
    json j;
    j["tool"] = "scq";
    j["version"] = SCQ_VERSION;
    j["command"] = m.command;
    json inputs = json::array();
    for (const auto& p : m.inputs)
        inputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
    j["inputs"] = inputs;
    j["parameters"] = m.parameters;
    j["input_hash"] = input_hash(m);
    j["outputs"] = m.outputs;
    j["wall_time_s"] = m.wall_time_s;
    return j;
}

json error_json(const Error& err, int exit_code)
{
    return {{"error", to_string(err.kind())}, {"message", err.what()}, {"exit_code", exit_code}};
}

json pair_report_json(const std::vector<pipeline::PairResult>& pairs, const std::string& model,
                      const std::string& method, const std::string& hash)
{
    json j;
    j["model"] = model;
    j["method"] = method;
    j["input_hash"] = hash;
    json rows = json::array();
    for (const auto& p : pairs) {
        rows.push_back({{"junction", p.junction},
                        {"qubit_mode", p.qubit_mode},
                        {"resonator_mode", p.resonator_mode},
                        {"fock_dims", p.dims},
                        {"qubit_GHz", c::omega_to_ghz(p.omega_q)},
                        {"anharmonicity_MHz", c::omega_to_ghz(p.alpha_q) * 1e3},
                        {"resonator_GHz", c::omega_to_ghz(p.omega_r)},
                        {"dispersive_shift_MHz", c::omega_to_ghz(p.chi) * 1e3}});
    }
    j["pairs"] = rows;
    return j;
}

std::string pair_report_csv(const std::vector<pipeline::PairResult>& pairs, const std::string& model,
                            const std::string& method, const std::vector<MeasuredPair>& measured)
{
    std::vector<std::string> header{"junction", "model", "method", "qubit_GHz", "anharmonicity_MHz",
                                    "resonator_GHz", "dispersive_shift_MHz"};
    const bool compare = !measured.empty();
    if (compare) {
        for (const char* k : {"label", "measured_qubit_GHz", "qubit_rel_err", "measured_anharmonicity_MHz",
                              "anharmonicity_rel_err", "measured_resonator_GHz", "resonator_rel_err",
                              "measured_dispersive_shift_MHz", "dispersive_shift_rel_err"})
            header.emplace_back(k);
    }
    const auto rel = [](double sim, std::optional<double> meas) -> std::pair<std::string, std::string> {
        if (!meas)
            return {"", ""};
        return {format_number(*meas), format_number(std::abs(sim - *meas) / std::abs(*meas))};
    };
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : pairs) {
        const double q = c::omega_to_ghz(p.omega_q);
        const double a = c::omega_to_ghz(p.alpha_q) * 1e3;
        const double r = c::omega_to_ghz(p.omega_r);
        const double x = c::omega_to_ghz(p.chi) * 1e3;
        std::vector<std::string> row{p.junction,       model,           method, format_number(q),
                                     format_number(a), format_number(r), format_number(x)};
        if (compare) {
            const auto it = std::find_if(measured.begin(), measured.end(),
                                         [&](const MeasuredPair& m) { return m.junction == p.junction; });
            if (it == measured.end()) {
                row.insert(row.end(), 9, "");
            } else {
                row.push_back(it->label);
                for (const auto& [s, m] : {std::pair{q, std::optional<double>(it->qubit_GHz)},
                                           std::pair{a, std::optional<double>(it->anharmonicity_MHz)},
                                           std::pair{r, it->resonator_GHz},
                                           std::pair{x, it->dispersive_shift_MHz}}) {
                    const auto [mv, ev] = rel(s, m);
                    row.push_back(mv);
                    row.push_back(ev);
                }
            }
        }
        rows.push_back(std::move(row));
    }
    return csv(header, rows);
}

}  // namespace scq::io
