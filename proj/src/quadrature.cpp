#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>

#include "scq/error.hpp"
#include "scq/numerics.hpp"

namespace scq::numerics {

namespace {

// Kronrod nodes on [0, 1] of the symmetric rule; xgk[1], xgk[3], xgk[5], xgk[7]
// are the 7-point Gauss nodes.
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    cplx value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const ComplexIntegrand& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const cplx fc = f(center);
    cplx kronrod = fc * wgk[7];
    cplx gauss = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        const cplx sum = f(center - dx) + f(center + dx);
        kronrod += wgk[j] * sum;
        if (j % 2 == 1)
            gauss += wg[j / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_adaptive_detailed(const ComplexIntegrand& f, double a, double b,
                                             const QuadratureSpec& spec)
{
    if (!(spec.rel_tol > 0.0) || spec.max_subdivisions < 1)
        throw Error(ErrorKind::InvalidInput, "quadrature spec needs rel_tol > 0 and max_subdivisions >= 1");
    if (!(a < b))
        throw Error(ErrorKind::InvalidInput, "integration limits must satisfy a < b");

    if (std::isinf(b)) {
        const ComplexIntegrand mapped = [&f, a](double t) {
            const double s = 1.0 - t;
            return f(a + t / s) / (s * s);
        };
        return integrate_adaptive_detailed(mapped, 0.0, 1.0, spec);
    }

    std::priority_queue<Segment> heap;
    Segment first = gauss_kronrod(f, a, b);
    cplx total = first.value;
    double total_error = first.error;
    heap.push(first);
    int evaluations = 15;
    int subdivisions = 1;

    auto converged = [&] {
        return total_error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    };

    while (!converged()) {
        if (subdivisions >= spec.max_subdivisions)
            throw Error(ErrorKind::QuadratureNotConverged,
                        "error estimate " + std::to_string(total_error) + " after " +
                            std::to_string(subdivisions) + " subdivisions");
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw Error(ErrorKind::QuadratureNotConverged, "interval shrank below machine resolution");
        Segment left = gauss_kronrod(f, worst.a, mid);
        Segment right = gauss_kronrod(f, mid, worst.b);
        evaluations += 30;
        ++subdivisions;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to drop the drift from incremental updates.
    cplx resummed = 0.0;
    double err = 0.0;
    while (!heap.empty()) {
        resummed += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {resummed, err, subdivisions, evaluations};
}

cplx integrate_adaptive(const ComplexIntegrand& f, double a, double b, const QuadratureSpec& spec)
{
    return integrate_adaptive_detailed(f, a, b, spec).value;
}

cplx integrate_sqrt_singular_lower(const ComplexIntegrand& f, double a, double b,
                                   const QuadratureSpec& spec)
{
    const ComplexIntegrand g = [&f, a](double u) { return 2.0 * u * f(a + u * u); };
    return integrate_adaptive(g, 0.0, std::sqrt(b - a), spec);
}

cplx integrate_sqrt_singular_upper(const ComplexIntegrand& f, double a, double b,
                                   const QuadratureSpec& spec)
{
    const ComplexIntegrand g = [&f, b](double u) { return 2.0 * u * f(b - u * u); };
    return integrate_adaptive(g, 0.0, std::sqrt(b - a), spec);
}

std::vector<double> linspace(double start, double stop, std::size_t count)
{
    std::vector<double> out;
    if (count == 0)
        return out;
    if (count == 1)
        return {start};
    out.reserve(count);
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(start + step * static_cast<double>(i));
    out.back() = stop;
    return out;
}

}  // namespace scq::numerics
