#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scq/error.hpp"
#include "scq/fock.hpp"
#include "scq/materials.hpp"
#include "scq/netlist.hpp"
#include "scq/pipeline.hpp"
#include "scq/quantize.hpp"

// File formats. Units at the boundary: GHz, MHz, K, nm, um, fF, nH, S/m, meV.
namespace scq::io {

using json = nlohmann::json;
namespace fs = std::filesystem;

json read_json(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);

// {tc_K, lambda_L_nm, xi_nm, sigma_n_S_per_m, delta0_meV?, mean_free_path_nm?, thickness_nm?}
materials::SuperconductorSpec material_from_json(const json& j, const std::string& name);
json material_to_json(const materials::SuperconductorSpec& spec);

// {width_um, gap_um, material, eps_r, substrate_thickness_um, g_factor_per_m?}
tline::CpwGeometry geometry_from_json(const json& j, const std::string& name,
                                      const std::map<std::string, materials::SuperconductorSpec>& materials);
json geometry_to_json(const tline::CpwGeometry& geom);

// {temperature_K, materials{}, geometries{}, junctions{name: {L_J_nH, C_J_fF}}, nodes[],
//  elements[{name, type, a, b, ...}]}. Element types: capacitor and
// coupling_capacitor (C_fF), inductor (L_nH, kinetic_nH?), junction (junction),
// tline (geometry, length_um, mode quarter|half|through), port (Z0_ohm).
tline::Netlist netlist_from_json(const json& j);
json netlist_to_json(const tline::Netlist& netlist);

json modeset_to_json(const quantize::ModeSet& modes);
quantize::ModeSet modeset_from_json(const json& j);

// One measured qubit/resonator pair.
struct MeasuredPair {
    std::string label;
    std::string junction;  // junction element name in the netlist
    double qubit_GHz = 0.0;
    double anharmonicity_MHz = 0.0;
    std::optional<double> resonator_GHz;
    std::optional<double> dispersive_shift_MHz;
    std::optional<double> bare_resonator_GHz;
};

// {pairs: [{label, junction, qubit_GHz, anharmonicity_MHz, resonator_GHz?,
//  dispersive_shift_MHz?, bare_resonator_GHz?}]}
std::vector<MeasuredPair> measurements_from_json(const json& j);

std::string format_number(double v);

// Header line plus rows, comma separated, numbers via format_number.
std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);
std::string plot_data(const std::vector<double>& x, const std::vector<double>& y);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const fs::path& path);

struct Manifest {
    std::string command;
    std::vector<fs::path> inputs;
    std::vector<std::string> outputs;
    std::map<std::string, std::string> parameters;
    double wall_time_s = 0.0;
};

// Combined hash of the input files and parameters; stamped into every report.
std::string input_hash(const Manifest& m);
json manifest_json(const Manifest& m);

json error_json(const Error& err, int exit_code);
json pair_report_json(const std::vector<pipeline::PairResult>& pairs, const std::string& model,
                      const std::string& method, const std::string& input_hash);
std::string pair_report_csv(const std::vector<pipeline::PairResult>& pairs, const std::string& model,
                            const std::string& method, const std::vector<MeasuredPair>& measured);

}  // namespace scq::io
