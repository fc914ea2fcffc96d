#pragma once

#include <numbers>

namespace scq::constants {

// CODATA 2018 (exact where the SI fixes them).
inline constexpr double e_charge = 1.602176634e-19;    // C
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double k_B = 1.380649e-23;            // J/K
inline constexpr double mu0 = 1.25663706212e-6;        // H/m
inline constexpr double eps0 = 8.8541878128e-12;       // F/m
inline constexpr double c_light = 299792458.0;         // m/s
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Reduced flux quantum hbar/2e, so E_J = phi0_reduced^2 / L_J.
inline constexpr double phi0_reduced = hbar / (2.0 * e_charge);

inline constexpr double eV = e_charge;
inline constexpr double meV = 1e-3 * e_charge;
inline constexpr double GHz = 1e9;

// Angular frequency <-> ordinary frequency helpers.
constexpr double to_angular(double f_hz) { return two_pi * f_hz; }
constexpr double to_hz(double omega) { return omega / two_pi; }
constexpr double ghz_to_omega(double f_ghz) { return two_pi * f_ghz * GHz; }
constexpr double omega_to_ghz(double omega) { return omega / (two_pi * GHz); }

}  // namespace scq::constants
