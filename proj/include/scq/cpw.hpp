#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scq/materials.hpp"

namespace scq::tline {

enum class ConductorModel { PEC, IBC };

struct CpwGeometry {
    std::string name;
    double width = 0.0;  // center strip
    double gap = 0.0;
    materials::SuperconductorSpec film;
    double eps_r = 1.0;
    double substrate_thickness = 0.0;
    // Overrides the conformal-mapping kinetic inductance factor (1/m).
    std::optional<double> g_factor;

    void validate() const;
};

struct LineParams {
    double L_geo = 0.0;  // H/m
    double C = 0.0;      // F/m
    double L_kin = 0.0;  // H/m
    double omega_eval = 0.0;

    double L_total() const { return L_geo + L_kin; }
    double Z0() const;
    double phase_velocity() const;
};

double effective_permittivity(const CpwGeometry& geom);

// Current-crowding weight g with L_kin = L_sheet * g; center strip plus both
// ground edges, thin-film form valid for t << w and k < 0.8.
double kinetic_geometry_factor(const CpwGeometry& geom);

// Per-length parameters with the film's sheet reactance Xs supplied directly.
LineParams cpw_line_params_from_reactance(const CpwGeometry& geom, double omega, double Xs);

// PEC drops the kinetic term; IBC evaluates the film surface impedance at (omega, T).
LineParams cpw_line_params(const CpwGeometry& geom, double omega, double T,
                           ConductorModel model = ConductorModel::IBC,
                           const materials::ImpedanceOptions& options = {});

enum class ResonatorMode { Half, Quarter };

// Solves omega = m pi v_p(omega) / length with m = 1 (half) or 1/2 (quarter),
// re-evaluating the kinetic inductance at every trial frequency.
double resonator_frequency(const CpwGeometry& geom, double length, ResonatorMode mode, double T,
                           ConductorModel model = ConductorModel::IBC);

// Length that puts the PEC resonance at omega.
double length_for_pec_frequency(const CpwGeometry& geom, double omega, ResonatorMode mode);

struct TemperaturePoint {
    double T = 0.0;
    double reduced_T = 0.0;  // T / Tc
    double omega = 0.0;
    double shift_hz = 0.0;   // (omega(T) - omega(0)) / 2 pi
    bool ok = false;
    std::string error;
};

// Frequency shift relative to the T = 0 resonance; T_grid inside (0, Tc).
// `workers` > 1 spreads the grid over threads; results stay in grid order.
std::vector<TemperaturePoint> temperature_sweep(const CpwGeometry& geom, double length,
                                                ResonatorMode mode,
                                                const std::vector<double>& T_grid,
                                                unsigned workers = 1);

}  // namespace scq::tline
