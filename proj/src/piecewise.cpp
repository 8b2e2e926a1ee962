#include "piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace idereg {

double poly_eval(const Poly& p, double t) {
    double v = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * t + *it;
    return v;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()), 0.0);
    for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

Poly poly_scale(const Poly& a, double s) {
    Poly out = a;
    for (double& c : out) c *= s;
    return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

Poly poly_antiderivative(const Poly& p) {
    Poly out(p.size() + 1, 0.0);
    for (size_t i = 0; i < p.size(); ++i) out[i + 1] = p[i] / double(i + 1);
    return out;
}

Poly poly_derivative(const Poly& p) {
    if (p.size() <= 1) return {};
    Poly out(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) out[i - 1] = p[i] * double(i);
    return out;
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(order);
    weights.resize(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < order; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            dp = order * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

PiecewiseMatrixFunction::PiecewiseMatrixFunction(double a, double b,
                                                 std::vector<double> breakpoints,
                                                 std::vector<PolyMatrix> pieces)
    : a_(a), b_(b), breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
    if (!(a_ < b_)) throw InvalidInput("domain requires a < b");
    if (pieces_.size() != breakpoints_.size() + 1)
        throw InvalidInput("piece count must equal breakpoint count + 1");
    for (size_t i = 0; i < breakpoints_.size(); ++i) {
        if (!(breakpoints_[i] > a_ && breakpoints_[i] < b_))
            throw InvalidInput("breakpoints must lie strictly inside (a, b)");
        if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1]))
            throw InvalidInput("breakpoints must be strictly increasing");
    }
    if (pieces_.empty() || pieces_[0].empty())
        throw InvalidInput("pieces must have at least one row");
    rows_ = Eigen::Index(pieces_[0].size());
    cols_ = Eigen::Index(pieces_[0][0].size());
    for (const auto& piece : pieces_) {
        if (Eigen::Index(piece.size()) != rows_)
            throw InvalidInput("all pieces must share the same shape");
        for (const auto& row : piece) {
            if (Eigen::Index(row.size()) != cols_)
                throw InvalidInput("all pieces must share the same shape");
            for (const auto& poly : row)
                for (double c : poly)
                    if (!std::isfinite(c)) throw InvalidInput("non-finite polynomial coefficient");
        }
    }
}

PiecewiseMatrixFunction PiecewiseMatrixFunction::constant(double a, double b, const Matrix& value) {
    PolyMatrix piece(value.rows(), std::vector<Poly>(value.cols()));
    for (Eigen::Index i = 0; i < value.rows(); ++i)
        for (Eigen::Index j = 0; j < value.cols(); ++j) piece[i][j] = {value(i, j)};
    return PiecewiseMatrixFunction(a, b, {}, {std::move(piece)});
}

PiecewiseMatrixFunction PiecewiseMatrixFunction::zero(double a, double b, Eigen::Index rows,
                                                       Eigen::Index cols) {
    return constant(a, b, Matrix::Zero(rows, cols));
}

PiecewiseMatrixFunction PiecewiseMatrixFunction::identity(double a, double b, Eigen::Index n) {
    return constant(a, b, Matrix::Identity(n, n));
}

PiecewiseMatrixFunction PiecewiseMatrixFunction::single_piece(double a, double b, PolyMatrix piece) {
    return PiecewiseMatrixFunction(a, b, {}, {std::move(piece)});
}

PiecewiseMatrixFunction PiecewiseMatrixFunction::step_basis(double a, double b, double tau,
                                                             Eigen::Index n) {
    if (!(tau > a && tau < b)) throw InvalidInput("step instant must lie strictly inside (a, b)");
    PolyMatrix lo(n, std::vector<Poly>(n, Poly{0.0}));
    PolyMatrix hi(n, std::vector<Poly>(n, Poly{0.0}));
    for (Eigen::Index i = 0; i < n; ++i) hi[i][i] = {1.0};
    return PiecewiseMatrixFunction(a, b, {tau}, {std::move(lo), std::move(hi)});
}

Eigen::Index PiecewiseMatrixFunction::piece_index(double t, Side side) const {
    if (t < a_ || t > b_) throw InvalidInput("evaluation point outside the domain");
    if (t == a_) return 0;                                  // side forced right
    if (t == b_) return Eigen::Index(pieces_.size()) - 1;   // side forced left
    // piece k covers (x_k, x_{k+1}); at an interior breakpoint the side decides
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    Eigen::Index idx = Eigen::Index(it - breakpoints_.begin());
    if (side == Side::Left && idx > 0 && breakpoints_[idx - 1] == t) --idx;
    return idx;
}

Matrix PiecewiseMatrixFunction::eval(double t, Side side) const {
    Eigen::Index idx = piece_index(t, side);
    const PolyMatrix& piece = pieces_[idx];
    Matrix out(rows_, cols_);
    for (Eigen::Index i = 0; i < rows_; ++i)
        for (Eigen::Index j = 0; j < cols_; ++j) out(i, j) = poly_eval(piece[i][j], t);
    return out;
}

Matrix PiecewiseMatrixFunction::integrate(double lo, double hi, const QuadratureConfig& q) const {
    q.validate();
    if (lo > hi) throw InvalidInput("reversed integration bounds");
    if (lo < a_ || hi > b_) throw InvalidInput("integration bounds outside the domain");
    std::vector<double> cuts{lo};
    for (double bp : breakpoints_)
        if (bp > lo && bp < hi) cuts.push_back(bp);
    cuts.push_back(hi);
    std::vector<double> nodes, weights;
    gauss_legendre(q.gauss_order, nodes, weights);
    Matrix out = Matrix::Zero(rows_, cols_);
    for (size_t panel = 0; panel + 1 < cuts.size(); ++panel) {
        const double mid = 0.5 * (cuts[panel] + cuts[panel + 1]);
        const double half = 0.5 * (cuts[panel + 1] - cuts[panel]);
        if (half == 0.0) continue;
        // all quadrature points are strictly inside the panel, sides agree
        const PolyMatrix& piece = pieces_[piece_index(mid, Side::Right)];
        for (int g = 0; g < q.gauss_order; ++g) {
            const double t = mid + half * nodes[g];
            for (Eigen::Index i = 0; i < rows_; ++i)
                for (Eigen::Index j = 0; j < cols_; ++j)
                    out(i, j) += half * weights[g] * poly_eval(piece[i][j], t);
        }
    }
    return out;
}

PiecewiseMatrixFunction PiecewiseMatrixFunction::antiderivative() const {
    std::vector<PolyMatrix> out_pieces;
    out_pieces.reserve(pieces_.size());
    // running value of the antiderivative at each piece's left endpoint
    Matrix carry = Matrix::Zero(rows_, cols_);
    for (size_t k = 0; k < pieces_.size(); ++k) {
        const double left = (k == 0) ? a_ : breakpoints_[k - 1];
        PolyMatrix piece(rows_, std::vector<Poly>(cols_));
        for (Eigen::Index i = 0; i < rows_; ++i) {
            for (Eigen::Index j = 0; j < cols_; ++j) {
                Poly anti = poly_antiderivative(pieces_[k][i][j]);
                anti[0] += carry(i, j) - poly_eval(anti, left);
                piece[i][j] = std::move(anti);
            }
        }
        const double right = (k + 1 < pieces_.size()) ? breakpoints_[k] : b_;
        for (Eigen::Index i = 0; i < rows_; ++i)
            for (Eigen::Index j = 0; j < cols_; ++j) carry(i, j) = poly_eval(piece[i][j], right);
        out_pieces.push_back(std::move(piece));
    }
    return PiecewiseMatrixFunction(a_, b_, breakpoints_, std::move(out_pieces));
}

PiecewiseMatrixFunction PiecewiseMatrixFunction::derivative() const {
    std::vector<PolyMatrix> out_pieces;
    for (const auto& piece : pieces_) {
        PolyMatrix dp(rows_, std::vector<Poly>(cols_));
        for (Eigen::Index i = 0; i < rows_; ++i)
            for (Eigen::Index j = 0; j < cols_; ++j) {
                dp[i][j] = poly_derivative(piece[i][j]);
                if (dp[i][j].empty()) dp[i][j] = {0.0};
            }
        out_pieces.push_back(std::move(dp));
    }
    return PiecewiseMatrixFunction(a_, b_, breakpoints_, std::move(out_pieces));
}

PiecewiseMatrixFunction PiecewiseMatrixFunction::transpose() const {
    std::vector<PolyMatrix> out_pieces;
    for (const auto& piece : pieces_) {
        PolyMatrix tp(cols_, std::vector<Poly>(rows_));
        for (Eigen::Index i = 0; i < rows_; ++i)
            for (Eigen::Index j = 0; j < cols_; ++j) tp[j][i] = piece[i][j];
        out_pieces.push_back(std::move(tp));
    }
    return PiecewiseMatrixFunction(a_, b_, breakpoints_, std::move(out_pieces));
}

PiecewiseMatrixFunction PiecewiseMatrixFunction::with_breakpoints(
    const std::vector<double>& extra) const {
    std::set<double> merged(breakpoints_.begin(), breakpoints_.end());
    for (double t : extra) {
        if (!(t > a_ && t < b_)) throw InvalidInput("breakpoint outside (a, b)");
        merged.insert(t);
    }
    std::vector<double> bps(merged.begin(), merged.end());
    std::vector<PolyMatrix> out_pieces;
    for (size_t k = 0; k <= bps.size(); ++k) {
        const double left = (k == 0) ? a_ : bps[k - 1];
        const double right = (k == bps.size()) ? b_ : bps[k];
        const double mid = 0.5 * (left + right);
        out_pieces.push_back(pieces_[piece_index(mid, Side::Right)]);
    }
    return PiecewiseMatrixFunction(a_, b_, std::move(bps), std::move(out_pieces));
}

PiecewiseMatrixFunction PiecewiseMatrixFunction::hcat(const PiecewiseMatrixFunction& other) const {
    if (rows_ != other.rows_ || a_ != other.a_ || b_ != other.b_)
        throw InvalidInput("hcat requires equal row counts and domains");
    std::vector<double> extra_self(other.breakpoints_), extra_other(breakpoints_);
    PiecewiseMatrixFunction lhs = with_breakpoints(extra_self);
    PiecewiseMatrixFunction rhs = other.with_breakpoints(extra_other);
    std::vector<PolyMatrix> out_pieces;
    for (size_t k = 0; k < lhs.pieces_.size(); ++k) {
        PolyMatrix piece(rows_);
        for (Eigen::Index i = 0; i < rows_; ++i) {
            piece[i] = lhs.pieces_[k][i];
            piece[i].insert(piece[i].end(), rhs.pieces_[k][i].begin(), rhs.pieces_[k][i].end());
        }
        out_pieces.push_back(std::move(piece));
    }
    return PiecewiseMatrixFunction(a_, b_, lhs.breakpoints_, std::move(out_pieces));
}

PiecewiseMatrixFunction combine(double alpha, const PiecewiseMatrixFunction& f, double beta,
                                const PiecewiseMatrixFunction& g) {
    if (f.rows_ != g.rows_ || f.cols_ != g.cols_) throw InvalidInput("combine shape mismatch");
    if (f.a_ != g.a_ || f.b_ != g.b_) throw InvalidInput("combine domain mismatch");
    PiecewiseMatrixFunction lhs = f.with_breakpoints(g.breakpoints_);
    PiecewiseMatrixFunction rhs = g.with_breakpoints(f.breakpoints_);
    std::vector<PiecewiseMatrixFunction::PolyMatrix> out_pieces;
    for (size_t k = 0; k < lhs.pieces_.size(); ++k) {
        PiecewiseMatrixFunction::PolyMatrix piece(f.rows_, std::vector<Poly>(f.cols_));
        for (Eigen::Index i = 0; i < f.rows_; ++i)
            for (Eigen::Index j = 0; j < f.cols_; ++j)
                piece[i][j] = poly_add(poly_scale(lhs.pieces_[k][i][j], alpha),
                                       poly_scale(rhs.pieces_[k][i][j], beta));
        out_pieces.push_back(std::move(piece));
    }
    return PiecewiseMatrixFunction(f.a_, f.b_, lhs.breakpoints_, std::move(out_pieces));
}

PiecewiseMatrixFunction matmul(const PiecewiseMatrixFunction& f, const PiecewiseMatrixFunction& g) {
    if (f.cols_ != g.rows_) throw InvalidInput("matmul inner dimension mismatch");
    if (f.a_ != g.a_ || f.b_ != g.b_) throw InvalidInput("matmul domain mismatch");
    PiecewiseMatrixFunction lhs = f.with_breakpoints(g.breakpoints_);
    PiecewiseMatrixFunction rhs = g.with_breakpoints(f.breakpoints_);
    std::vector<PiecewiseMatrixFunction::PolyMatrix> out_pieces;
    for (size_t k = 0; k < lhs.pieces_.size(); ++k) {
        PiecewiseMatrixFunction::PolyMatrix piece(f.rows_, std::vector<Poly>(g.cols_, Poly{0.0}));
        for (Eigen::Index i = 0; i < f.rows_; ++i)
            for (Eigen::Index j = 0; j < g.cols_; ++j)
                for (Eigen::Index l = 0; l < f.cols_; ++l)
                    piece[i][j] = poly_add(piece[i][j],
                                           poly_mul(lhs.pieces_[k][i][l], rhs.pieces_[k][l][j]));
        out_pieces.push_back(std::move(piece));
    }
    return PiecewiseMatrixFunction(f.a_, f.b_, lhs.breakpoints_, std::move(out_pieces));
}

PiecewiseMatrixFunction PiecewiseMatrixFunction::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows()) throw InvalidInput("matrix product inner dimension mismatch");
    std::vector<PolyMatrix> out_pieces;
    for (const auto& piece : pieces_) {
        PolyMatrix out(rows_, std::vector<Poly>(rhs.cols(), Poly{0.0}));
        for (Eigen::Index i = 0; i < rows_; ++i)
            for (Eigen::Index j = 0; j < rhs.cols(); ++j)
                for (Eigen::Index l = 0; l < cols_; ++l)
                    out[i][j] = poly_add(out[i][j], poly_scale(piece[i][l], rhs(l, j)));
        out_pieces.push_back(std::move(out));
    }
    return PiecewiseMatrixFunction(a_, b_, breakpoints_, std::move(out_pieces));
}

BivariateKernel::BivariateKernel(double a, double b, Eigen::Index rows, Eigen::Index cols,
                                 std::vector<std::vector<CoeffGrid>> entries)
    : a_(a), b_(b), rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (!(a_ < b_)) throw InvalidInput("domain requires a < b");
    if (Eigen::Index(entries_.size()) != rows_) throw InvalidInput("kernel entry grid shape mismatch");
    for (const auto& row : entries_) {
        if (Eigen::Index(row.size()) != cols_) throw InvalidInput("kernel entry grid shape mismatch");
        for (const auto& grid : row)
            for (const auto& trow : grid)
                for (double c : trow)
                    if (!std::isfinite(c)) throw InvalidInput("non-finite kernel coefficient");
    }
}

Matrix BivariateKernel::eval(double t, double s) const {
    Matrix out = Matrix::Zero(rows_, cols_);
    for (Eigen::Index i = 0; i < rows_; ++i)
        for (Eigen::Index j = 0; j < cols_; ++j)
            for (size_t k = 0; k < entries_[i][j].size(); ++k)
                for (size_t l = 0; l < entries_[i][j][k].size(); ++l)
                    out(i, j) += entries_[i][j][k][l] * std::pow(t, double(k)) * std::pow(s, double(l));
    return out;
}

PiecewiseMatrixFunction BivariateKernel::collapse() const {
    PiecewiseMatrixFunction::PolyMatrix piece(rows_, std::vector<Poly>(cols_, Poly{0.0}));
    for (Eigen::Index i = 0; i < rows_; ++i) {
        for (Eigen::Index j = 0; j < cols_; ++j) {
            for (size_t k = 0; k < entries_[i][j].size(); ++k) {
                double coeff = 0.0;
                for (size_t l = 0; l < entries_[i][j][k].size(); ++l)
                    coeff += entries_[i][j][k][l] *
                             (std::pow(b_, double(l + 1)) - std::pow(a_, double(l + 1))) / double(l + 1);
                Poly term(k + 1, 0.0);
                term[k] = coeff;
                piece[i][j] = poly_add(piece[i][j], term);
            }
        }
    }
    return PiecewiseMatrixFunction::single_piece(a_, b_, std::move(piece));
}

BivariateKernel BivariateKernel::scaled(double factor) const {
    auto entries = entries_;
    for (auto& row : entries)
        for (auto& grid : row)
            for (auto& trow : grid)
                for (double& c : trow) c *= factor;
    return BivariateKernel(a_, b_, rows_, cols_, std::move(entries));
}

}  // namespace idereg
