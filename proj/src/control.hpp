#pragma once

#include "solver.hpp"

namespace idereg {

struct ControlMoments {
    PiecewiseMatrixFunction k;       // n x n, collapsed kernel
    PiecewiseMatrixFunction ktilde;  // n x n, antiderivative of k
    Matrix W1;                       // m x n, integral of A ktilde + B k
    PiecewiseMatrixFunction G;       // n x n, ktilde + Psi0 D^+ W1
};

struct RegularizationSystem {
    Matrix U;        // (d1 + d2) x n
    Vector g;        // R^{d1 + d2}
    Matrix P_U;      // n x n
    Matrix P_Ustar;  // (d1+d2) x (d1+d2)
    double criterion_residual;  // ||P_Ustar g||_inf
};

struct ControlFamily {
    Vector u0;    // U^+ g
    Matrix P_U;   // n x n
    Eigen::Index dim;  // rank(P_U)
};

class NotRegularizableError : public std::runtime_error {
public:
    explicit NotRegularizableError(double residual);
    double criterion_residual;
};

class NoControlKernelError : public InvalidInput {
public:
    NoControlKernelError() : InvalidInput("problem has no control kernel") {}
};

struct RegularizeResult {
    Vector u;
    SolutionFamily family;
    SolvabilityReport report;
    RegularizationSystem system;
};

ControlMoments build_moments(const ProblemSpec& p, const AlgebraicCore& core);

RegularizationSystem build_system(const AlgebraicCore& core, const ControlMoments& moments,
                                  const Vector& delta);

bool check_regularizability(const RegularizationSystem& sys, const ToleranceConfig& tol);

// Throws NotRegularizableError when the criterion fails.
ControlFamily control_family(const RegularizationSystem& sys, const ToleranceConfig& tol);

Vector select_min_norm(const ControlFamily& fam);

// Unique member minimizing (u - u_ref)^T Wt (u - u_ref); Wt symmetric positive definite.
Vector select_weighted(const ControlFamily& fam, const Matrix& wt, const Vector& u_ref,
                       const ToleranceConfig& tol = {});

// Replace f by f + k(.) u and drop the kernel.
ProblemSpec apply_control(const ProblemSpec& p, const Vector& u);

// Full regularization pipeline with the min-norm control.
RegularizeResult regularize(const ProblemSpec& p, const Vector& delta);

}  // namespace idereg
