#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace idereg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Thrown on malformed inputs (non-finite entries, shape mismatches,
// violated construction invariants). Carries no numeric payload.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ToleranceConfig {
    double rank_tol_rel = 1e-10;  // singular values below rank_tol_rel * sigma_max count as zero
    double solve_tol = 1e-8;      // absolute residual threshold for solvability verdicts

    void validate() const {
        if (!(rank_tol_rel > 0.0 && rank_tol_rel < 1.0))
            throw InvalidInput("rank_tol_rel must lie in (0, 1)");
        if (!(solve_tol > 0.0) || !std::isfinite(solve_tol))
            throw InvalidInput("solve_tol must be positive and finite");
    }
};

// Moore-Penrose pseudoinverse via SVD. Singular values >= rank_tol_rel * sigma_max
// are inverted, the rest dropped. Zero-sized matrices map to their transposed shape.
Matrix pseudoinverse(const Matrix& m, const ToleranceConfig& tol = {});

// Number of singular values above the relative threshold.
Eigen::Index numerical_rank(const Matrix& m, const ToleranceConfig& tol = {});

// P_M = I - M^+ M : orthoprojector onto ker M (cols x cols).
Matrix null_projector(const Matrix& m, const ToleranceConfig& tol = {});

// P_M* = I - M M^+ : orthoprojector onto coker M (rows x rows).
Matrix conull_projector(const Matrix& m, const ToleranceConfig& tol = {});

// r linearly independent columns of an orthoprojector P of rank r, selected by
// column-pivoted QR (ties by lowest index). Throws if rank(P) != r.
Matrix independent_columns(const Matrix& p, Eigen::Index r, const ToleranceConfig& tol = {});

// Dual of independent_columns: d independent rows of P.
Matrix independent_rows(const Matrix& p, Eigen::Index d, const ToleranceConfig& tol = {});

// Minimum-norm least-squares solution M^+ y.
Vector least_squares_min_norm(const Matrix& m, const Vector& y, const ToleranceConfig& tol = {});

}  // namespace idereg
