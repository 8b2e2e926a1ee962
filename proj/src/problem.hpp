#pragma once

#include "functionals.hpp"

#include <optional>

namespace idereg {

enum class JumpModel {
    None,  // solutions continuous across impulse instants
    Free   // a free jump vector h_i in R^n joins the parameters at each tau_i
};

struct ProblemSpec {
    double a, b;
    Eigen::Index m, n;
    PiecewiseMatrixFunction A;    // m x n
    PiecewiseMatrixFunction B;    // m x n
    PiecewiseMatrixFunction Phi;  // n x m
    PiecewiseMatrixFunction f;    // n x 1
    std::vector<ImpulseRecord> impulses;
    LinearVectorFunctional ell;   // q rows, width n
    Vector alpha;                 // R^q
    std::optional<BivariateKernel> control_kernel;  // n x n
    JumpModel jump_model = JumpModel::Free;
    ToleranceConfig tol;
    QuadratureConfig quad;

    Eigen::Index q() const { return ell.out_dim(); }
    Eigen::Index k_total() const;
    Vector delta() const { return build_delta(impulses, alpha); }

    void validate() const;
};

// The stacked functional L = [phi_1; ...; phi_p; ell].
LinearVectorFunctional stacked_functional(const ProblemSpec& p);

}  // namespace idereg
