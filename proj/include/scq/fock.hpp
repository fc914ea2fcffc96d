#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "scq/numerics.hpp"
#include "scq/quantize.hpp"

namespace scq::fock {

// Product Fock basis, mode 0 most significant in the flat index.
class FockBasis {
public:
    explicit FockBasis(std::vector<int> dims);

    const std::vector<int>& dims() const { return dims_; }
    std::size_t modes() const { return dims_.size(); }
    std::size_t size() const { return size_; }

    std::size_t index(const std::vector<int>& occupation) const;
    std::vector<int> occupation(std::size_t index) const;

private:
    std::vector<int> dims_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 1;
};

inline constexpr std::size_t default_dimension_cap = 4096;

// Hamiltonian matrix in rad/s (hbar = 1). Nonlinear terms are built in a
// basis padded by expansion_order/2 levels per mode and then projected, so
// every retained matrix element is exact. DimensionOverflow above `cap`.
Eigen::MatrixXd build_matrix(const quantize::HamiltonianSpec& h, const FockBasis& basis,
                             std::size_t cap = default_dimension_cap);

struct DispersiveShift {
    int mode_a = 0;
    int mode_b = 0;
    double value = 0.0;  // rad/s: (E11 - E10) - (E01 - E00)
};

struct NormalModeReport {
    std::vector<double> omega_tilde;  // rad/s
    std::vector<double> alpha;        // rad/s
    Eigen::MatrixXd chi;              // rad/s, zero diagonal
    std::vector<DispersiveShift> dispersive_shifts;
    std::vector<int> dims;
    // Largest weight a labeled state puts on the top Fock level of any mode.
    double tail_weight = 0.0;
};

struct ReportOptions {
    double label_threshold = 0.5;
    double tail_tolerance = 1e-2;
};

// Labels eigenstates by maximum overlap with bare Fock states and reads off
// renormalized frequencies, self-Kerr and cross-Kerr. LabelingAmbiguous when a
// required state has no eigenvector with overlap above the threshold,
// TruncationTooSmall when the labeled states lean on the top Fock level.
NormalModeReport extract_report(const numerics::RealEigenResult& eig, const FockBasis& basis,
                                const ReportOptions& options = {});

// build_matrix + eigh + extract_report.
NormalModeReport solve(const quantize::HamiltonianSpec& h, const ReportOptions& options = {},
                       std::size_t cap = default_dimension_cap);

struct ConvergenceOptions {
    double tolerance = 2.0 * 3.141592653589793 * 1e4;  // rad/s (10 kHz)
    int step = 2;
    int max_steps = 12;
    std::size_t cap = default_dimension_cap;
    ReportOptions report;
};

struct ConvergedReport {
    std::vector<int> dims;
    NormalModeReport report;
    std::vector<double> deltas;  // largest change between successive sizes, rad/s
};

// Grows every mode by `step` levels until omega_tilde, alpha and chi all move
// less than the tolerance. Starts from h.truncation. NoConvergence after
// max_steps; expected for orders 4 and 8, whose truncated potential is
// unbounded below.
ConvergedReport converge_truncation(const quantize::HamiltonianSpec& h, const ConvergenceOptions& options = {});

// (omega_tilde, alpha) of the qubit for a trial junction, rad/s.
using FitEvaluator = std::function<std::pair<double, double>(const quantize::JunctionSpec&)>;

// Transmon alone: one mode, omega = 1/sqrt(L C), phi^2 = hbar omega / (2 E_J).
FitEvaluator single_transmon_evaluator(int expansion_order = 6, int dims = 15);

struct FitOptions {
    double tolerance = 1e-8;  // on the relative residuals
    int max_iterations = 60;
};

// Newton solve in (log L_J, log C_J) so the evaluator reproduces the targets.
// Starts from transmon estimates unless an initial guess is given.
quantize::JunctionSpec fit_junction_to_measurement(double target_omega, double target_alpha,
                                                   const FitEvaluator& evaluate,
                                                   const FitOptions& options = {},
                                                   std::optional<quantize::JunctionSpec> initial = {});

}  // namespace scq::fock
