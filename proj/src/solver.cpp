#include "solver.hpp"

#include <cmath>
#include <sstream>

namespace idereg {

namespace {

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

UnsolvableError::UnsolvableError(const SolvabilityReport& rep)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "generating problem unsolvable (cond1 " << rep.cond1_residual << ", cond2 "
             << rep.cond2_residual << ")";
          return os.str();
      }()),
      report(rep) {}

PiecewiseMatrixFunction build_psi0(const ProblemSpec& p) {
    PiecewiseMatrixFunction psi0 =
        p.Phi.antiderivative().hcat(PiecewiseMatrixFunction::identity(p.a, p.b, p.n));
    if (p.jump_model == JumpModel::Free) {
        for (const auto& imp : p.impulses)
            psi0 = psi0.hcat(PiecewiseMatrixFunction::step_basis(p.a, p.b, imp.tau, p.n));
    }
    return psi0;
}

Matrix build_D(const ProblemSpec& p, const PiecewiseMatrixFunction& psi) {
    const Eigen::Index jumps =
        (p.jump_model == JumpModel::Free) ? Eigen::Index(p.impulses.size()) : 0;
    Matrix D(p.m, p.m + p.n + jumps * p.n);
    PiecewiseMatrixFunction moment = combine(1.0, matmul(p.A, psi), 1.0, matmul(p.B, p.Phi));
    D.leftCols(p.m) = Matrix::Identity(p.m, p.m) - moment.integrate(p.a, p.b, p.quad);
    D.middleCols(p.m, p.n) = -p.A.integrate(p.a, p.b, p.quad);
    for (Eigen::Index i = 0; i < jumps; ++i)
        D.middleCols(p.m + p.n + i * p.n, p.n) = -p.A.integrate(p.impulses[i].tau, p.b, p.quad);
    return D;
}

Vector build_btilde(const ProblemSpec& p, const PiecewiseMatrixFunction& f,
                    const PiecewiseMatrixFunction& ftilde) {
    PiecewiseMatrixFunction integrand = combine(1.0, matmul(p.A, ftilde), 1.0, matmul(p.B, f));
    return integrand.integrate(p.a, p.b, p.quad).col(0);
}

AlgebraicCore build_core(const ProblemSpec& p) {
    p.validate();

    PiecewiseMatrixFunction psi = p.Phi.antiderivative();
    PiecewiseMatrixFunction psi0 = build_psi0(p);
    PiecewiseMatrixFunction ftilde = p.f.antiderivative();
    const Eigen::Index n_param = psi0.cols();
    Vector btilde = build_btilde(p, p.f, ftilde);

    Matrix D = build_D(p, psi);
    Matrix D_pinv = pseudoinverse(D, p.tol);
    Matrix P_D = null_projector(D, p.tol);
    Matrix P_Dstar = conull_projector(D, p.tol);
    const Eigen::Index rank_D = numerical_rank(D, p.tol);
    const Eigen::Index r1 = n_param - rank_D;
    const Eigen::Index d1 = p.m - rank_D;
    Matrix P_D_r1 = independent_columns(P_D, r1, p.tol);
    Matrix P_Dstar_d1 = independent_rows(P_Dstar, d1, p.tol);

    PiecewiseMatrixFunction F = combine(1.0, ftilde, 1.0, psi0 * (D_pinv * btilde));
    PiecewiseMatrixFunction X_r1 = psi0 * P_D_r1;

    LinearVectorFunctional L = stacked_functional(p);
    Matrix Q = L.apply(X_r1, p.quad);
    Matrix Q_pinv = pseudoinverse(Q, p.tol);
    Matrix P_Q = null_projector(Q, p.tol);
    Matrix P_Qstar = conull_projector(Q, p.tol);
    const Eigen::Index n2 = numerical_rank(Q, p.tol);
    const Eigen::Index r2 = r1 - n2;
    const Eigen::Index d2 = Q.rows() - n2;
    Matrix P_Q_r2 = independent_columns(P_Q, r2, p.tol);
    Matrix P_Qstar_d2 = independent_rows(P_Qstar, d2, p.tol);

    return AlgebraicCore{p.a, p.b, p.m, p.n, n_param,
                         std::move(psi), std::move(psi0), std::move(ftilde), std::move(btilde),
                         std::move(D), std::move(D_pinv), std::move(P_D), std::move(P_Dstar),
                         std::move(P_D_r1), std::move(P_Dstar_d1),
                         std::move(F), std::move(X_r1), std::move(L),
                         std::move(Q), std::move(Q_pinv), std::move(P_Q), std::move(P_Qstar),
                         std::move(P_Q_r2), std::move(P_Qstar_d2),
                         rank_D, r1, d1, n2, r2, d2,
                         p.tol, p.quad};
}

SolvabilityReport check_solvability(const AlgebraicCore& core, const Vector& delta) {
    if (delta.size() != core.Q.rows())
        throw InvalidInput("delta length must equal k + q");
    SolvabilityReport rep{};
    rep.cond1_residual = inf_norm(core.P_Dstar_d1 * core.btilde);
    Vector gap = delta - core.L.apply(core.F, core.quad).col(0);
    rep.cond2_residual = inf_norm(core.P_Qstar_d2 * gap);
    rep.solvable = rep.cond1_residual < core.tol.solve_tol && rep.cond2_residual < core.tol.solve_tol;
    return rep;
}

SolutionFamily solve_family(const AlgebraicCore& core, const Vector& delta) {
    SolvabilityReport rep = check_solvability(core, delta);
    if (!rep.solvable) throw UnsolvableError(rep);
    Vector gap = delta - core.L.apply(core.F, core.quad).col(0);
    PiecewiseMatrixFunction particular =
        combine(1.0, core.X_r1 * (core.Q_pinv * gap), 1.0, core.F);
    PiecewiseMatrixFunction basis = core.X_r1 * core.P_Q_r2;
    return SolutionFamily{std::move(particular), std::move(basis), core.r2};
}

PiecewiseMatrixFunction SolutionFamily::member(const Vector& c) const {
    if (c.size() != r2) throw InvalidInput("family parameter length must equal r2");
    if (r2 == 0) return particular;
    return combine(1.0, particular, 1.0, basis * Matrix(c));
}

ResidualNorms residual_norms(const ProblemSpec& p, const PiecewiseMatrixFunction& x,
                             const Vector& delta) {
    if (x.rows() != p.n || x.cols() != 1) throw InvalidInput("solution must be n x 1");
    PiecewiseMatrixFunction xdot = x.derivative();
    PiecewiseMatrixFunction moment_fn = combine(1.0, matmul(p.A, x), 1.0, matmul(p.B, xdot));
    Matrix c1 = moment_fn.integrate(p.a, p.b, p.quad);
    PiecewiseMatrixFunction r =
        combine(1.0, xdot, -1.0, combine(1.0, p.Phi * c1, 1.0, p.f));
    Matrix sq = matmul(r.transpose(), r).integrate(p.a, p.b, p.quad);
    ResidualNorms out{};
    out.ide_residual = std::sqrt(std::max(0.0, sq(0, 0)));
    LinearVectorFunctional L = stacked_functional(p);
    out.cond_residual = inf_norm(Vector(L.apply(x, p.quad).col(0) - delta));
    return out;
}

}  // namespace idereg
