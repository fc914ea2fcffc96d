#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scq/numerics.hpp"

namespace scq::materials {

// One superconducting film in SI units (energies in J).
struct SuperconductorSpec {
    std::string name;
    double Tc = 0.0;
    double Delta0 = 0.0;
    double lambda_L = 0.0;
    double xi = 0.0;
    double sigma_n = 0.0;
    std::optional<double> mean_free_path;  // explicit override; derived from sigma_n otherwise
    std::optional<double> thickness;       // absent means bulk

    // Relative mismatch allowed between an explicit mean free path and the one
    // derived from sigma_n before a warning is attached.
    double consistency_tolerance = 0.05;
    std::vector<std::string> warnings;

    // Fills Delta0 = 1.76 k_B Tc when it is zero, checks positivity and records
    // a warning when an explicit mean free path disagrees with sigma_n.
    // Throws InvalidInput.
    void validate();

    bool is_film() const { return thickness.has_value(); }
};

// Convenience constructor: validate() applied.
SuperconductorSpec make_superconductor(std::string name, double Tc, double lambda_L, double xi,
                                       double sigma_n, std::optional<double> Delta0 = std::nullopt,
                                       std::optional<double> mean_free_path = std::nullopt,
                                       std::optional<double> thickness = std::nullopt);

struct GapAtTemperature {
    double Delta = 0.0;
    double temperature = 0.0;
};

// Delta0 tanh(1.74 sqrt(Tc/T - 1)) below Tc, zero above.
GapAtTemperature gap_at_temperature(const SuperconductorSpec& spec, double T);

double fermi_velocity(const SuperconductorSpec& spec);
double derived_mean_free_path(const SuperconductorSpec& spec);
// Explicit value when present, otherwise derived from sigma_n.
double mean_free_path(const SuperconductorSpec& spec);
double relaxation_time(const SuperconductorSpec& spec);

// sigma_s = sigma1 - i sigma2
struct ComplexConductivity {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double omega = 0.0;
    double temperature = 0.0;

    numerics::cplx value() const { return {sigma1, -sigma2}; }
};

struct ConductivityOptions {
    numerics::QuadratureSpec quadrature{1e-10, 0.0, 4000};
    // Relative bound on the truncated tail of the semi-infinite integral.
    double tail_tolerance = 1e-8;
};

// Isotropic superconductor at arbitrary impurity concentration. Valid in the
// microwave regime hbar*omega < 2 Delta(T); the normal-state Drude value is
// returned for T >= Tc. Throws InvalidRegime, QuadratureNotConverged.
ComplexConductivity complex_conductivity(const SuperconductorSpec& spec, double omega, double T,
                                         const ConductivityOptions& options = {});

// lambda_eff = sqrt(1 / (mu0 omega sigma2)). InvalidRegime unless sigma2, omega > 0.
double effective_penetration_depth(double sigma2, double omega);

enum class Regime { Bulk, Film };

struct SurfaceImpedance {
    double Rs = 0.0;
    double Xs = 0.0;
    double omega = 0.0;
    double temperature = 0.0;
    Regime regime = Regime::Bulk;
    double thickness = 0.0;  // only meaningful for Regime::Film

    numerics::cplx value() const { return {Rs, Xs}; }
    // Equivalent sheet inductance Xs/omega (H per square).
    double sheet_inductance() const { return Xs / omega; }
};

struct ImpedanceOptions {
    ConductivityOptions conductivity;
    // Drop sigma1 before forming Z_s. Unset means on for T <= 100 mK.
    std::optional<bool> lossless;
};

bool lossless_by_default(double T);

SurfaceImpedance surface_impedance_bulk(const ComplexConductivity& sigma, bool lossless);
SurfaceImpedance surface_impedance_film(const ComplexConductivity& sigma, double thickness,
                                        bool lossless);

SurfaceImpedance surface_impedance_bulk(const SuperconductorSpec& spec, double omega, double T,
                                        const ImpedanceOptions& options = {});
// Needs spec.thickness; InvalidInput otherwise.
SurfaceImpedance surface_impedance_film(const SuperconductorSpec& spec, double omega, double T,
                                        const ImpedanceOptions& options = {});
// Film when the spec has a thickness, bulk otherwise.
SurfaceImpedance surface_impedance(const SuperconductorSpec& spec, double omega, double T,
                                   const ImpedanceOptions& options = {});

struct PurityPoint {
    double sigma_n = 0.0;
    double mean_free_path = 0.0;
    double Xs = 0.0;
    bool ok = false;
    std::string error;
};

// Xs across a normal-state conductivity grid, re-deriving the mean free path at
// every point. Per-point failures are marked rather than thrown.
std::vector<PurityPoint> impedance_vs_purity(const SuperconductorSpec& spec, double omega, double T,
                                             const std::vector<double>& sigma_n_grid,
                                             const ImpedanceOptions& options = {});

}  // namespace scq::materials
