#pragma once

#include "piecewise.hpp"

#include <optional>
#include <vector>

namespace idereg {

// Finite sum of one-sided point evaluations plus an optional integral term:
//   x |-> sum_j M_j x(t_j, side_j) + integral_a^b W(t) x(t) dt
struct PointTerm {
    double t;
    Side side;
    Matrix coeff;  // out_dim x n
};

class LinearVectorFunctional {
public:
    LinearVectorFunctional(double a, double b, Eigen::Index out_dim, Eigen::Index width,
                           std::vector<PointTerm> point_terms,
                           std::optional<PiecewiseMatrixFunction> integral_weight);

    double a() const { return a_; }
    double b() const { return b_; }
    Eigen::Index out_dim() const { return out_dim_; }
    Eigen::Index width() const { return width_; }
    const std::vector<PointTerm>& point_terms() const { return point_terms_; }
    const std::optional<PiecewiseMatrixFunction>& integral_weight() const { return integral_weight_; }

    // Columnwise application to an n x w piecewise function.
    Matrix apply(const PiecewiseMatrixFunction& x, const QuadratureConfig& q = {}) const;

private:
    double a_, b_;
    Eigen::Index out_dim_, width_;
    std::vector<PointTerm> point_terms_;
    std::optional<PiecewiseMatrixFunction> integral_weight_;
};

// Impulse record of the jump condition E_i (x(tau+) - x(tau-)) = S_i x(tau-) + gamma_i.
// Construction enforces rank(E + S) = k_i < n.
struct ImpulseRecord {
    double tau;
    Matrix e;      // k_i x n
    Matrix s;      // k_i x n
    Vector gamma;  // k_i

    ImpulseRecord(double tau, Matrix e, Matrix s, Vector gamma, const ToleranceConfig& tol = {});
    Eigen::Index k() const { return e.rows(); }
    Eigen::Index n() const { return e.cols(); }
};

// Interface functional phi_i x = E_i x(tau+) - (E_i + S_i) x(tau-).
LinearVectorFunctional impulse_functional(double a, double b, const ImpulseRecord& imp);

// Row concatenation; empty list with explicit width yields a 0-row functional.
LinearVectorFunctional stack(double a, double b, Eigen::Index width,
                             const std::vector<LinearVectorFunctional>& parts);

// delta = col(gamma_1, ..., gamma_p, alpha), matching stack(phi..., ell).
Vector build_delta(const std::vector<ImpulseRecord>& imps, const Vector& alpha);

}  // namespace idereg
