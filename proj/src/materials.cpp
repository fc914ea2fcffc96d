#include <cmath>
#include <sstream>

#include "scq/constants.hpp"
#include "scq/error.hpp"
#include "scq/materials.hpp"

namespace scq::materials {

using numerics::cplx;
namespace c = scq::constants;

namespace {

constexpr double bcs_gap_ratio = 1.76;

void require_positive(double value, const char* what)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw Error(ErrorKind::InvalidInput, std::string(what) + " must be finite and > 0");
}

// Energies below are in units of the gap at temperature T:
//   e = E/Delta, w = hbar*omega/Delta, g = hbar/(tau*Delta), t = k_B T/Delta.
struct Scaled {
    double w;
    double g;
    double t;
};

// tanh(x / 2t) with t = 0 meaning x > 0 always saturates.
double thermal_tanh(double x, double t)
{
    if (t <= 0.0)
        return 1.0;
    return std::tanh(0.5 * x / t);
}

// tanh(a/2t) - tanh(b/2t) = 2 (f(b) - f(a)), f the Fermi function at e/t.
double thermal_tanh_difference(double a, double b, double t)
{
    if (t <= 0.0)
        return 0.0;
    const auto fermi = [t](double x) { return 1.0 / (std::exp(x / t) + 1.0); };
    return 2.0 * (fermi(b) - fermi(a));
}

// First integrand (E in [Delta, Delta + hbar omega]) multiplied by the
// Jacobian `jac`. p2 = sqrt(e^2-1), s4 = sqrt(1-(e-w)^2) are passed in from the
// substitution so that 1/p2 and 1/s4 stay finite after multiplying by jac.
cplx first_integrand(double e, double p2, double s4, double jac, const Scaled& s)
{
    const cplx ig(0.0, s.g);
    const cplx p4(0.0, s4);
    const double numer = 1.0 + e * (e - s.w);
    // (numer / (p2 p4)) * jac, with the jacobian cancelling one root
    const cplx ratio_jac = numer * jac / (p2 * p4);
    const cplx bracket = (jac - ratio_jac) / (p4 + p2 + ig) - (jac + ratio_jac) / (p4 - p2 + ig);
    return thermal_tanh(e, s.t) * bracket;
}

// Second integrand (E in [Delta, inf)) in the variable e = cosh(u), already
// multiplied by de/du = sinh(u) = p2.
cplx second_integrand(double u, const Scaled& s)
{
    const double e = std::cosh(u);
    const double p2 = std::sinh(u);
    const double ew = e + s.w;
    const double p1 = std::sqrt((ew - 1.0) * (ew + 1.0));
    const cplx ig(0.0, s.g);

    // r = (1 + e(e+w)) / (p1 p2) with 1 - r rewritten to avoid cancellation.
    const double x = 1.0 + e * ew;
    const double one_minus_r_times_p2 = -(2.0 * e + s.w) * (2.0 * e + s.w) / (p1 * (p1 * p2 + x));
    const double r_times_p2 = x / p1;
    const double one_plus_r_times_p2 = p2 + r_times_p2;
    const double p1_minus_p2 = s.w * (2.0 * e + s.w) / (p1 + p2);

    const double th_ew = thermal_tanh(ew, s.t);
    const double th_e = thermal_tanh(e, s.t);
    const double th_diff = thermal_tanh_difference(ew, e, s.t);

    // th(e+w)(1+r)/(p1-p2+ig) - th(e)(1+r)/(p1-p2+ig) collapses onto the
    // tanh difference; the remaining (1-r) pieces decay like e^-3.
    const cplx same_denominator = th_diff * one_plus_r_times_p2 / (p1_minus_p2 + ig);
    const cplx rest = -th_ew * one_minus_r_times_p2 / (-p1 - p2 + ig) +
                      th_e * one_minus_r_times_p2 / (p1 + p2 + ig);
    return same_denominator + rest;
}

cplx integrate_first(const Scaled& s, const ConductivityOptions& opt)
{
    const double mid = 1.0 + 0.5 * s.w;

    // Lower half: e = cosh(u) removes the p2 -> 0 root at e = 1.
    const numerics::ComplexIntegrand lower = [&s](double u) {
        const double e = std::cosh(u);
        const double p2 = std::sinh(u);
        const double d = e - s.w;
        const double s4 = std::sqrt(std::max(0.0, (1.0 - d) * (1.0 + d)));
        return first_integrand(e, p2, s4, p2, s);
    };
    // Upper half: e - w = cos(theta) removes the s4 -> 0 root at e = 1 + w.
    const numerics::ComplexIntegrand upper = [&s](double theta) {
        const double e = s.w + std::cos(theta);
        const double s4 = std::sin(theta);
        const double p2 = std::sqrt(std::max(0.0, (e - 1.0) * (e + 1.0)));
        return first_integrand(e, p2, s4, s4, s);
    };

    const cplx lo = numerics::integrate_adaptive(lower, 0.0, std::acosh(mid), opt.quadrature);
    const cplx hi = numerics::integrate_adaptive(upper, 0.0, std::acos(mid - s.w), opt.quadrature);
    return lo + hi;
}

cplx integrate_second(const Scaled& s, const ConductivityOptions& opt)
{
    const numerics::ComplexIntegrand f = [&s](double u) { return second_integrand(u, s); };

    // Thermal factors die off past a few k_B T above the gap; the algebraic
    // part decays like 1/E^2 once E exceeds the scattering energy, so start
    // well past both and keep doubling E_max until the added slice is small.
    const double thermal_cut = 1.0 + s.t * std::log(1.0 / opt.tail_tolerance);
    double e_max = 16.0 * std::max({thermal_cut, 1.0 + s.g, 1.0 + s.w});
    double u_max = std::acosh(e_max);
    cplx total = numerics::integrate_adaptive(f, 0.0, u_max, opt.quadrature);

    for (int i = 0; i < 80; ++i) {
        const double u_next = u_max + std::log(2.0);
        const cplx slice = numerics::integrate_adaptive(f, u_max, u_next, opt.quadrature);
        total += slice;
        u_max = u_next;
        if (std::abs(slice) <= opt.tail_tolerance * std::abs(total))
            return total;
    }
    throw Error(ErrorKind::QuadratureNotConverged, "semi-infinite tail did not settle");
}

}  // namespace

void SuperconductorSpec::validate()
{
    require_positive(Tc, "T_c");
    if (Delta0 == 0.0)
        Delta0 = bcs_gap_ratio * c::k_B * Tc;
    require_positive(Delta0, "Delta0");
    require_positive(lambda_L, "lambda_L");
    require_positive(xi, "xi");
    require_positive(sigma_n, "sigma_n");
    if (thickness)
        require_positive(*thickness, "thickness");
    if (mean_free_path) {
        require_positive(*mean_free_path, "mean_free_path");
        const double derived = derived_mean_free_path(*this);
        const double mismatch = std::abs(*mean_free_path - derived) / derived;
        if (mismatch > consistency_tolerance) {
            std::ostringstream msg;
            msg << "explicit mean free path " << *mean_free_path * 1e9 << " nm differs from "
                << derived * 1e9 << " nm derived from sigma_n (" << mismatch * 100.0
                << "%); the explicit value is used";
            warnings.push_back(msg.str());
        }
    }
}

SuperconductorSpec make_superconductor(std::string name, double Tc, double lambda_L, double xi,
                                       double sigma_n, std::optional<double> Delta0,
                                       std::optional<double> mean_free_path,
                                       std::optional<double> thickness)
{
    SuperconductorSpec spec;
    spec.name = std::move(name);
    spec.Tc = Tc;
    spec.Delta0 = Delta0.value_or(0.0);
    spec.lambda_L = lambda_L;
    spec.xi = xi;
    spec.sigma_n = sigma_n;
    spec.mean_free_path = mean_free_path;
    spec.thickness = thickness;
    spec.validate();
    return spec;
}

GapAtTemperature gap_at_temperature(const SuperconductorSpec& spec, double T)
{
    if (T < 0.0)
        throw Error(ErrorKind::InvalidInput, "temperature must be >= 0");
    if (T == 0.0)
        return {spec.Delta0, T};
    if (T >= spec.Tc)
        return {0.0, T};
    return {spec.Delta0 * std::tanh(1.74 * std::sqrt(spec.Tc / T - 1.0)), T};
}

double fermi_velocity(const SuperconductorSpec& spec)
{
    return c::pi * spec.xi * spec.Delta0 / c::hbar;
}

double derived_mean_free_path(const SuperconductorSpec& spec)
{
    return c::pi * c::mu0 * spec.Delta0 * spec.lambda_L * spec.lambda_L * spec.xi * spec.sigma_n /
           c::hbar;
}

double mean_free_path(const SuperconductorSpec& spec)
{
    return spec.mean_free_path ? *spec.mean_free_path : derived_mean_free_path(spec);
}

double relaxation_time(const SuperconductorSpec& spec)
{
    return mean_free_path(spec) / fermi_velocity(spec);
}

ComplexConductivity complex_conductivity(const SuperconductorSpec& spec, double omega, double T,
                                         const ConductivityOptions& options)
{
    if (!(omega > 0.0))
        throw Error(ErrorKind::InvalidRegime, "angular frequency must be > 0");
    if (T < 0.0)
        throw Error(ErrorKind::InvalidInput, "temperature must be >= 0");

    const double tau = relaxation_time(spec);
    const double Delta = gap_at_temperature(spec, T).Delta;

    if (Delta <= 0.0) {
        // Normal state: Drude response, sigma_n / (1 + i omega tau).
        const cplx sigma = spec.sigma_n / cplx(1.0, omega * tau);
        return {sigma.real(), -sigma.imag(), omega, T};
    }

    const Scaled s{c::hbar * omega / Delta, c::hbar / (tau * Delta), c::k_B * T / Delta};
    if (s.w >= 2.0) {
        std::ostringstream msg;
        msg << "hbar*omega = " << s.w << " Delta(T) reaches the pair-breaking edge 2 Delta";
        throw Error(ErrorKind::InvalidRegime, msg.str());
    }

    const cplx integral = integrate_first(s, options) + integrate_second(s, options);
    // i sigma_n / (2 omega tau) with omega*tau = w/g in scaled units.
    // The integrals give sigma1 + i sigma2; ComplexConductivity::value()
    // returns the sigma1 - i sigma2 form used by the surface impedance.
    const cplx sigma = cplx(0.0, spec.sigma_n * s.g / (2.0 * s.w)) * integral;
    return {sigma.real(), sigma.imag(), omega, T};
}

double effective_penetration_depth(double sigma2, double omega)
{
    if (!(omega > 0.0))
        throw Error(ErrorKind::InvalidRegime, "angular frequency must be > 0");
    if (!(sigma2 > 0.0))
        throw Error(ErrorKind::InvalidRegime, "sigma2 must be > 0 (superconducting state)");
    return std::sqrt(1.0 / (c::mu0 * omega * sigma2));
}

bool lossless_by_default(double T) { return T <= 0.1; }

namespace {

cplx conductivity_for_impedance(const ComplexConductivity& sigma, bool lossless)
{
    return lossless ? cplx(0.0, -sigma.sigma2) : sigma.value();
}

}  // namespace

SurfaceImpedance surface_impedance_bulk(const ComplexConductivity& sigma, bool lossless)
{
    const cplx s = conductivity_for_impedance(sigma, lossless);
    const cplx z = std::sqrt(cplx(0.0, c::mu0 * sigma.omega) / s);
    return {z.real(), z.imag(), sigma.omega, sigma.temperature, Regime::Bulk, 0.0};
}

SurfaceImpedance surface_impedance_film(const ComplexConductivity& sigma, double thickness,
                                        bool lossless)
{
    require_positive(thickness, "film thickness");
    const cplx s = conductivity_for_impedance(sigma, lossless);
    const cplx z_bulk = std::sqrt(cplx(0.0, c::mu0 * sigma.omega) / s);
    const cplx k = std::sqrt(cplx(0.0, c::mu0 * sigma.omega) * s);
    const cplx z = z_bulk / std::tanh(k * thickness);
    return {z.real(), z.imag(), sigma.omega, sigma.temperature, Regime::Film, thickness};
}

SurfaceImpedance surface_impedance_bulk(const SuperconductorSpec& spec, double omega, double T,
                                        const ImpedanceOptions& options)
{
    const auto sigma = complex_conductivity(spec, omega, T, options.conductivity);
    return surface_impedance_bulk(sigma, options.lossless.value_or(lossless_by_default(T)));
}

SurfaceImpedance surface_impedance_film(const SuperconductorSpec& spec, double omega, double T,
                                        const ImpedanceOptions& options)
{
    if (!spec.thickness)
        throw Error(ErrorKind::InvalidInput, "film impedance requested for a spec without thickness");
    const auto sigma = complex_conductivity(spec, omega, T, options.conductivity);
    return surface_impedance_film(sigma, *spec.thickness,
                                  options.lossless.value_or(lossless_by_default(T)));
}

SurfaceImpedance surface_impedance(const SuperconductorSpec& spec, double omega, double T,
                                   const ImpedanceOptions& options)
{
    return spec.is_film() ? surface_impedance_film(spec, omega, T, options)
                          : surface_impedance_bulk(spec, omega, T, options);
}

std::vector<PurityPoint> impedance_vs_purity(const SuperconductorSpec& spec, double omega, double T,
                                             const std::vector<double>& sigma_n_grid,
                                             const ImpedanceOptions& options)
{
    std::vector<PurityPoint> table;
    table.reserve(sigma_n_grid.size());
    for (double sigma_n : sigma_n_grid) {
        PurityPoint point;
        point.sigma_n = sigma_n;
        try {
            SuperconductorSpec local = spec;
            local.sigma_n = sigma_n;
            local.mean_free_path.reset();
            local.warnings.clear();
            local.validate();
            point.mean_free_path = derived_mean_free_path(local);
            point.Xs = surface_impedance(local, omega, T, options).Xs;
            point.ok = true;
        } catch (const Error& err) {
            point.error = err.what();
        }
        table.push_back(std::move(point));
    }
    return table;
}

}  // namespace scq::materials
