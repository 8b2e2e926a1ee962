#pragma once

#include "problem.hpp"

namespace idereg {

// Everything the solvability criterion and the solution family are built from.
// Reduction: with c1 = integral of (A x + B xdot), the equation becomes
// xdot = Phi c1 + f, so x = Psi(t) c1 + c2 (+ jumps) + ftilde(t), and
// substituting back gives the finite system D [c1; c2; h...] = btilde.
struct AlgebraicCore {
    double a, b;
    Eigen::Index m, n, n_param;

    PiecewiseMatrixFunction psi;     // n x m, Psi(t) = integral_a^t Phi
    PiecewiseMatrixFunction psi0;    // n x n_param, [Psi, I_n (, H_1..H_p)]
    PiecewiseMatrixFunction ftilde;  // n x 1
    Vector btilde;                   // R^m

    Matrix D;             // m x n_param
    Matrix D_pinv;
    Matrix P_D;           // n_param x n_param, onto ker D
    Matrix P_Dstar;       // m x m, onto coker D
    Matrix P_D_r1;        // n_param x r1
    Matrix P_Dstar_d1;    // d1 x m

    PiecewiseMatrixFunction F;     // n x 1
    PiecewiseMatrixFunction X_r1;  // n x r1

    LinearVectorFunctional L;  // stacked [phi_1..phi_p; ell], (k+q) rows

    Matrix Q;             // (k+q) x r1
    Matrix Q_pinv;
    Matrix P_Q;           // r1 x r1
    Matrix P_Qstar;       // (k+q) x (k+q)
    Matrix P_Q_r2;        // r1 x r2
    Matrix P_Qstar_d2;    // d2 x (k+q)

    Eigen::Index rank_D, r1, d1, n2, r2, d2;

    ToleranceConfig tol;
    QuadratureConfig quad;
};

struct SolvabilityReport {
    double cond1_residual;  // ||P_Dstar_d1 btilde||_inf
    double cond2_residual;  // ||P_Qstar_d2 (delta - L F)||_inf
    bool solvable;
};

// Affine family x(t, c) = particular + basis * c, c in R^{r2}.
struct SolutionFamily {
    PiecewiseMatrixFunction particular;  // n x 1
    PiecewiseMatrixFunction basis;       // n x r2
    Eigen::Index r2;

    PiecewiseMatrixFunction member(const Vector& c) const;
};

struct ResidualNorms {
    double ide_residual;   // L2 norm of xdot - Phi * moment(x) - f
    double cond_residual;  // inf norm of L x - delta
};

class UnsolvableError : public std::runtime_error {
public:
    explicit UnsolvableError(const SolvabilityReport& report);
    SolvabilityReport report;
};

PiecewiseMatrixFunction build_psi0(const ProblemSpec& p);
Matrix build_D(const ProblemSpec& p, const PiecewiseMatrixFunction& psi);
Vector build_btilde(const ProblemSpec& p, const PiecewiseMatrixFunction& f,
                    const PiecewiseMatrixFunction& ftilde);

AlgebraicCore build_core(const ProblemSpec& p);

SolvabilityReport check_solvability(const AlgebraicCore& core, const Vector& delta);

// Constructs the r2-parameter family; throws UnsolvableError when either condition fails.
SolutionFamily solve_family(const AlgebraicCore& core, const Vector& delta);

ResidualNorms residual_norms(const ProblemSpec& p, const PiecewiseMatrixFunction& x,
                             const Vector& delta);

}  // namespace idereg
