#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace scq::numerics {

using cplx = std::complex<double>;

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_subdivisions = 4000;
};

struct QuadratureResult {
    cplx value;
    double error_estimate = 0.0;
    int subdivisions = 0;
    int evaluations = 0;
};

using ComplexIntegrand = std::function<cplx(double)>;

// Globally adaptive 7/15-point Gauss-Kronrod. An infinite upper limit is
// handled by mapping x = a + t/(1-t) onto [0, 1). Endpoint singularities are
// the caller's job: substitute them away before calling (see the helpers below).
QuadratureResult integrate_adaptive_detailed(const ComplexIntegrand& f, double a, double b,
                                             const QuadratureSpec& spec = {});

cplx integrate_adaptive(const ComplexIntegrand& f, double a, double b,
                        const QuadratureSpec& spec = {});

// Integrand with an inverse-square-root singularity at the lower limit:
// x = a + u^2 turns it into a regular integral over u in [0, sqrt(b-a)].
cplx integrate_sqrt_singular_lower(const ComplexIntegrand& f, double a, double b,
                                   const QuadratureSpec& spec = {});

// Same at the upper limit, x = b - u^2.
cplx integrate_sqrt_singular_upper(const ComplexIntegrand& f, double a, double b,
                                   const QuadratureSpec& spec = {});

/// Complete elliptic integral of the first kind K(k), modulus convention.
/// Throws DomainError for k outside [0, 1).
double elliptic_K(double k);

/// Root of f inside [lo, hi]. Requires a sign change, otherwise NoSignChange.
/// Converges until the bracket is below `tol` (absolute) or f(root) is exactly 0.
double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                           double tol);

struct EigenResult {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXcd eigenvectors; // columns, orthonormal
};

struct RealEigenResult {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
};

/// Dense Hermitian eigendecomposition. NotHermitian if ||H - H^dag|| exceeds
/// 1e-12 ||H||; NoConvergence if the backing solver fails.
EigenResult eigh(const Eigen::MatrixXcd& H);

/// Real-symmetric overload, used by the Fock-space solver.
RealEigenResult eigh(const Eigen::MatrixXd& H);

/// Evenly spaced grid [start, stop] with `count` points (count >= 2), or a
/// single point when count == 1.
std::vector<double> linspace(double start, double stop, std::size_t count);

}  // namespace scq::numerics
