#include "control.hpp"

#include <Eigen/Cholesky>

#include <sstream>

namespace idereg {

namespace {

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

NotRegularizableError::NotRegularizableError(double residual)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "control criterion fails (residual " << residual << ")";
          return os.str();
      }()),
      criterion_residual(residual) {}

ControlMoments build_moments(const ProblemSpec& p, const AlgebraicCore& core) {
    if (!p.control_kernel) throw NoControlKernelError();
    PiecewiseMatrixFunction k = p.control_kernel->collapse();
    PiecewiseMatrixFunction ktilde = k.antiderivative();
    PiecewiseMatrixFunction integrand =
        combine(1.0, matmul(p.A, ktilde), 1.0, matmul(p.B, k));
    Matrix W1 = integrand.integrate(p.a, p.b, p.quad);
    PiecewiseMatrixFunction G = combine(1.0, ktilde, 1.0, core.psi0 * (core.D_pinv * W1));
    return ControlMoments{std::move(k), std::move(ktilde), std::move(W1), std::move(G)};
}

RegularizationSystem build_system(const AlgebraicCore& core, const ControlMoments& moments,
                                  const Vector& delta) {
    const Eigen::Index n = core.n;
    Matrix U(core.d1 + core.d2, n);
    U.topRows(core.d1) = core.P_Dstar_d1 * moments.W1;
    U.bottomRows(core.d2) = core.P_Qstar_d2 * core.L.apply(moments.G, core.quad);
    Vector g(core.d1 + core.d2);
    g.head(core.d1) = -(core.P_Dstar_d1 * core.btilde);
    Vector gap = delta - core.L.apply(core.F, core.quad).col(0);
    g.tail(core.d2) = core.P_Qstar_d2 * gap;
    Matrix P_U = null_projector(U, core.tol);
    Matrix P_Ustar = conull_projector(U, core.tol);
    double residual = inf_norm(P_Ustar * g);
    return RegularizationSystem{std::move(U), std::move(g), std::move(P_U), std::move(P_Ustar),
                                residual};
}

bool check_regularizability(const RegularizationSystem& sys, const ToleranceConfig& tol) {
    return sys.criterion_residual < tol.solve_tol;
}

ControlFamily control_family(const RegularizationSystem& sys, const ToleranceConfig& tol) {
    if (!check_regularizability(sys, tol)) throw NotRegularizableError(sys.criterion_residual);
    Vector u0 = pseudoinverse(sys.U, tol) * sys.g;
    Eigen::Index dim = numerical_rank(sys.P_U, tol);
    return ControlFamily{std::move(u0), sys.P_U, dim};
}

Vector select_min_norm(const ControlFamily& fam) { return fam.u0; }

Vector select_weighted(const ControlFamily& fam, const Matrix& wt, const Vector& u_ref,
                       const ToleranceConfig& tol) {
    const Eigen::Index n = fam.u0.size();
    if (wt.rows() != n || wt.cols() != n || u_ref.size() != n)
        throw InvalidInput("weight and reference must match the control dimension");
    if (!wt.isApprox(wt.transpose(), 1e-12)) throw InvalidInput("weight must be symmetric");
    Eigen::LLT<Matrix> llt(wt);
    if (llt.info() != Eigen::Success) throw InvalidInput("weight must be positive definite");
    if (fam.dim == 0) return fam.u0;
    Matrix chol = llt.matrixL().transpose();  // wt = chol^T chol
    Matrix Z = independent_columns(fam.P_U, fam.dim, tol);
    Vector y = least_squares_min_norm(chol * Z, chol * (u_ref - fam.u0), tol);
    return fam.u0 + Z * y;
}

ProblemSpec apply_control(const ProblemSpec& p, const Vector& u) {
    if (!p.control_kernel) throw NoControlKernelError();
    if (u.size() != p.n) throw InvalidInput("control length must equal n");
    PiecewiseMatrixFunction k = p.control_kernel->collapse();
    ProblemSpec out = p;
    out.f = combine(1.0, p.f, 1.0, k * Matrix(u));
    out.control_kernel.reset();
    return out;
}

RegularizeResult regularize(const ProblemSpec& p, const Vector& delta) {
    AlgebraicCore core = build_core(p);
    ControlMoments moments = build_moments(p, core);
    RegularizationSystem sys = build_system(core, moments, delta);
    ControlFamily fam = control_family(sys, p.tol);  // throws when not regularizable
    Vector u = select_min_norm(fam);
    ProblemSpec controlled = apply_control(p, u);
    AlgebraicCore core2 = build_core(controlled);
    SolvabilityReport report = check_solvability(core2, delta);
    SolutionFamily family = solve_family(core2, delta);
    return RegularizeResult{std::move(u), std::move(family), report, std::move(sys)};
}

}  // namespace idereg
