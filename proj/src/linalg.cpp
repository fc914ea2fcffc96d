#include <cmath>

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/tools/roots.hpp>

#include "scq/error.hpp"
#include "scq/numerics.hpp"

namespace scq::numerics {

double elliptic_K(double k)
{
    if (!(k >= 0.0 && k < 1.0))
        throw Error(ErrorKind::DomainError, "elliptic_K needs 0 <= k < 1, got " + std::to_string(k));
    return boost::math::ellint_1(k);
}

double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi, double tol)
{
    if (lo > hi)
        std::swap(lo, hi);
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw Error(ErrorKind::NoSignChange, "f(lo) and f(hi) have the same sign on [" +
                                                 std::to_string(lo) + ", " + std::to_string(hi) + "]");

    const auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
    std::uintmax_t max_iter = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, max_iter);
    if (max_iter >= 200 && !stop(a, b))
        throw Error(ErrorKind::NoConvergence, "bracketed root search did not converge");
    return 0.5 * (a + b);
}

EigenResult eigh(const Eigen::MatrixXcd& H)
{
    if (H.rows() != H.cols())
        throw Error(ErrorKind::InvalidInput, "eigh needs a square matrix");
    const double norm = H.norm();
    if ((H - H.adjoint()).norm() > 1e-12 * std::max(norm, 1e-300))
        throw Error(ErrorKind::NotHermitian, "matrix asymmetry exceeds 1e-12 relative");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::NoConvergence, "Hermitian eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

RealEigenResult eigh(const Eigen::MatrixXd& H)
{
    if (H.rows() != H.cols())
        throw Error(ErrorKind::InvalidInput, "eigh needs a square matrix");
    const double norm = H.norm();
    if ((H - H.transpose()).norm() > 1e-12 * std::max(norm, 1e-300))
        throw Error(ErrorKind::NotHermitian, "matrix asymmetry exceeds 1e-12 relative");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::NoConvergence, "symmetric eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace scq::numerics
