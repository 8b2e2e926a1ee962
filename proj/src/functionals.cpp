#include "functionals.hpp"

namespace idereg {

LinearVectorFunctional::LinearVectorFunctional(
    double a, double b, Eigen::Index out_dim, Eigen::Index width,
    std::vector<PointTerm> point_terms, std::optional<PiecewiseMatrixFunction> integral_weight)
    : a_(a), b_(b), out_dim_(out_dim), width_(width),
      point_terms_(std::move(point_terms)), integral_weight_(std::move(integral_weight)) {
    if (!(a_ < b_)) throw InvalidInput("functional domain requires a < b");
    if (out_dim_ < 0 || width_ <= 0) throw InvalidInput("functional dimensions must be positive");
    for (const auto& term : point_terms_) {
        if (term.t < a_ || term.t > b_) throw InvalidInput("point term outside the domain");
        if (term.coeff.rows() != out_dim_ || term.coeff.cols() != width_)
            throw InvalidInput("point term matrix shape mismatch");
        if (!term.coeff.allFinite()) throw InvalidInput("non-finite point term matrix");
    }
    if (integral_weight_) {
        if (integral_weight_->rows() != out_dim_ || integral_weight_->cols() != width_)
            throw InvalidInput("integral weight shape mismatch");
        if (integral_weight_->a() != a_ || integral_weight_->b() != b_)
            throw InvalidInput("integral weight domain mismatch");
    }
}

Matrix LinearVectorFunctional::apply(const PiecewiseMatrixFunction& x,
                                     const QuadratureConfig& q) const {
    if (x.rows() != width_) throw InvalidInput("functional width does not match function rows");
    Matrix out = Matrix::Zero(out_dim_, x.cols());
    for (const auto& term : point_terms_) out += term.coeff * x.eval(term.t, term.side);
    if (integral_weight_) {
        PiecewiseMatrixFunction wx = matmul(*integral_weight_, x);
        out += wx.integrate(a_, b_, q);
    }
    return out;
}

ImpulseRecord::ImpulseRecord(double tau_, Matrix e_, Matrix s_, Vector gamma_,
                             const ToleranceConfig& tol)
    : tau(tau_), e(std::move(e_)), s(std::move(s_)), gamma(std::move(gamma_)) {
    if (e.rows() != s.rows() || e.cols() != s.cols())
        throw InvalidInput("impulse matrices E and S must share a shape");
    if (gamma.size() != e.rows()) throw InvalidInput("impulse gamma length must equal k_i");
    if (!e.allFinite() || !s.allFinite() || !gamma.allFinite())
        throw InvalidInput("non-finite impulse data");
    const Eigen::Index ki = e.rows();
    if (ki >= e.cols()) throw InvalidInput("impulse requires k_i < n");
    if (numerical_rank(e + s, tol) != ki)
        throw InvalidInput("impulse requires rank(E + S) = k_i");
}

LinearVectorFunctional impulse_functional(double a, double b, const ImpulseRecord& imp) {
    if (!(imp.tau > a && imp.tau < b))
        throw InvalidInput("impulse instant must lie strictly inside (a, b)");
    std::vector<PointTerm> terms;
    terms.push_back({imp.tau, Side::Right, imp.e});
    terms.push_back({imp.tau, Side::Left, -(imp.e + imp.s)});
    return LinearVectorFunctional(a, b, imp.k(), imp.n(), std::move(terms), std::nullopt);
}

LinearVectorFunctional stack(double a, double b, Eigen::Index width,
                             const std::vector<LinearVectorFunctional>& parts) {
    Eigen::Index out_dim = 0;
    bool any_weight = false;
    for (const auto& part : parts) {
        if (part.width() != width) throw InvalidInput("stack width mismatch");
        out_dim += part.out_dim();
        any_weight = any_weight || part.integral_weight().has_value();
    }
    std::vector<PointTerm> terms;
    std::optional<PiecewiseMatrixFunction> weight;
    Eigen::Index row = 0;
    for (const auto& part : parts) {
        for (const auto& term : part.point_terms()) {
            Matrix coeff = Matrix::Zero(out_dim, width);
            coeff.middleRows(row, part.out_dim()) = term.coeff;
            terms.push_back({term.t, term.side, std::move(coeff)});
        }
        row += part.out_dim();
    }
    if (any_weight && out_dim > 0) {
        // stack the weights vertically, zero where a part has none
        PiecewiseMatrixFunction acc = PiecewiseMatrixFunction::zero(a, b, out_dim, width);
        row = 0;
        for (const auto& part : parts) {
            if (part.integral_weight()) {
                Matrix embed = Matrix::Zero(out_dim, part.out_dim());
                embed.middleRows(row, part.out_dim()) = Matrix::Identity(part.out_dim(), part.out_dim());
                PiecewiseMatrixFunction lifted =
                    PiecewiseMatrixFunction::constant(a, b, embed);
                acc = combine(1.0, acc, 1.0, matmul(lifted, *part.integral_weight()));
            }
            row += part.out_dim();
        }
        weight = std::move(acc);
    }
    return LinearVectorFunctional(a, b, out_dim, width, std::move(terms), std::move(weight));
}

Vector build_delta(const std::vector<ImpulseRecord>& imps, const Vector& alpha) {
    Eigen::Index k = 0;
    for (const auto& imp : imps) k += imp.k();
    Vector delta(k + alpha.size());
    Eigen::Index row = 0;
    for (const auto& imp : imps) {
        delta.segment(row, imp.k()) = imp.gamma;
        row += imp.k();
    }
    delta.segment(row, alpha.size()) = alpha;
    return delta;
}

}  // namespace idereg
