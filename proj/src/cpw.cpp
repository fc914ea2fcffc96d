#include <cmath>

#include "scq/constants.hpp"
#include "scq/cpw.hpp"
#include "scq/error.hpp"
#include "scq/parallel.hpp"

namespace scq::tline {

namespace c = scq::constants;

void CpwGeometry::validate() const
{
    if (!(width > 0.0) || !(gap > 0.0))
        throw Error(ErrorKind::InvalidInput, "CPW '" + name + "': width and gap must be > 0");
    if (!(eps_r >= 1.0))
        throw Error(ErrorKind::InvalidInput, "CPW '" + name + "': eps_r must be >= 1");
    if (g_factor && !(*g_factor > 0.0))
        throw Error(ErrorKind::InvalidInput, "CPW '" + name + "': g_factor override must be > 0");
}

double LineParams::Z0() const { return std::sqrt(L_total() / C); }

double LineParams::phase_velocity() const { return 1.0 / std::sqrt(L_total() * C); }

double effective_permittivity(const CpwGeometry& geom) { return 0.5 * (geom.eps_r + 1.0); }

namespace {

double modulus(const CpwGeometry& geom) { return geom.width / (geom.width + 2.0 * geom.gap); }

}  // namespace

double kinetic_geometry_factor(const CpwGeometry& geom)
{
    if (geom.g_factor)
        return *geom.g_factor;
    if (!geom.film.thickness)
        throw Error(ErrorKind::InvalidInput,
                    "CPW '" + geom.name + "': film thickness needed for the kinetic geometry factor");
    const double t = *geom.film.thickness;
    const double k = modulus(geom);
    const double a = 0.5 * geom.width;   // center half-width
    const double b = a + geom.gap;       // ground edge
    const double K = numerics::elliptic_K(k);
    const double denom = 4.0 * a * (1.0 - k * k) * K * K;
    const double log_k = std::log((1.0 + k) / (1.0 - k));
    const double center = (c::pi + std::log(4.0 * c::pi * a / t) - k * log_k) / denom;
    const double ground = k * (c::pi + std::log(4.0 * c::pi * b / t) - log_k / k) / denom;
    return center + ground;
}

LineParams cpw_line_params_from_reactance(const CpwGeometry& geom, double omega, double Xs)
{
    geom.validate();
    if (!(omega > 0.0))
        throw Error(ErrorKind::InvalidRegime, "angular frequency must be > 0");
    const double k = modulus(geom);
    const double kp = std::sqrt(1.0 - k * k);
    const double ratio = numerics::elliptic_K(kp) / numerics::elliptic_K(k);
    LineParams p;
    p.C = 4.0 * c::eps0 * effective_permittivity(geom) / ratio;
    p.L_geo = 0.25 * c::mu0 * ratio;
    p.L_kin = Xs == 0.0 ? 0.0 : (Xs / omega) * kinetic_geometry_factor(geom);
    p.omega_eval = omega;
    return p;
}

LineParams cpw_line_params(const CpwGeometry& geom, double omega, double T, ConductorModel model,
                           const materials::ImpedanceOptions& options)
{
    if (model == ConductorModel::PEC)
        return cpw_line_params_from_reactance(geom, omega, 0.0);
    const auto zs = materials::surface_impedance(geom.film, omega, T, options);
    return cpw_line_params_from_reactance(geom, omega, zs.Xs);
}

namespace {

double mode_factor(ResonatorMode mode) { return mode == ResonatorMode::Half ? 1.0 : 0.5; }

}  // namespace

double length_for_pec_frequency(const CpwGeometry& geom, double omega, ResonatorMode mode)
{
    const auto p = cpw_line_params(geom, omega, 0.0, ConductorModel::PEC);
    return mode_factor(mode) * c::pi * p.phase_velocity() / omega;
}

double resonator_frequency(const CpwGeometry& geom, double length, ResonatorMode mode, double T,
                           ConductorModel model)
{
    if (!(length > 0.0))
        throw Error(ErrorKind::InvalidInput, "resonator length must be > 0");
    const double m = mode_factor(mode);
    // Geometric part is frequency independent, so the PEC solution is closed form.
    const auto pec = cpw_line_params_from_reactance(geom, 1.0, 0.0);
    const double omega_pec = m * c::pi * pec.phase_velocity() / length;
    if (model == ConductorModel::PEC)
        return omega_pec;

    const auto residual = [&](double omega) {
        const auto p = cpw_line_params(geom, omega, T, ConductorModel::IBC);
        return omega - m * c::pi * p.phase_velocity() / length;
    };
    return numerics::find_root_bracketed(residual, 0.05 * omega_pec, omega_pec,
                                         1e-13 * omega_pec);
}

std::vector<TemperaturePoint> temperature_sweep(const CpwGeometry& geom, double length,
                                                ResonatorMode mode,
                                                const std::vector<double>& T_grid,
                                                unsigned workers)
{
    const double omega0 = resonator_frequency(geom, length, mode, 0.0, ConductorModel::IBC);
    std::vector<TemperaturePoint> out(T_grid.size());
    parallel_for(T_grid.size(), workers, [&](std::size_t i) {
        TemperaturePoint& pt = out[i];
        pt.T = T_grid[i];
        pt.reduced_T = pt.T / geom.film.Tc;
        try {
            if (!(pt.T > 0.0 && pt.T < geom.film.Tc))
                throw Error(ErrorKind::InvalidInput, "temperature outside (0, Tc)");
            pt.omega = resonator_frequency(geom, length, mode, pt.T, ConductorModel::IBC);
            pt.shift_hz = c::to_hz(pt.omega - omega0);
            pt.ok = true;
        } catch (const Error& err) {
            pt.error = err.what();
        }
    });
    return out;
}

}  // namespace scq::tline
