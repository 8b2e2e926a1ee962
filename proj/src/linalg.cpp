#include "linalg.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <vector>

namespace idereg {

namespace {

void require_finite(const Matrix& m) {
    if (!m.allFinite()) throw InvalidInput("matrix has non-finite entries");
}

struct Svd {
    Matrix u, v;
    Vector sigma;
    Eigen::Index rank;
};

Svd svd_with_rank(const Matrix& m, const ToleranceConfig& tol) {
    tol.validate();
    require_finite(m);
    if (m.rows() == 0 || m.cols() == 0)
        return {Matrix::Zero(m.rows(), 0), Matrix::Zero(m.cols(), 0), Vector(), 0};
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    // Relative threshold with an absolute floor at rank_tol_rel: matrices whose
    // largest singular value is itself below the tolerance (cancellation noise,
    // e.g. I - integral of data that sums to I) count as zero.
    const double cutoff = tol.rank_tol_rel * std::max(s(0), 1.0);
    Eigen::Index r = 0;
    while (r < s.size() && s(r) >= cutoff && s(r) > 0.0) ++r;
    return {svd.matrixU(), svd.matrixV(), s, r};
}

}  // namespace

Matrix pseudoinverse(const Matrix& m, const ToleranceConfig& tol) {
    Svd d = svd_with_rank(m, tol);
    Matrix result = Matrix::Zero(m.cols(), m.rows());
    for (Eigen::Index i = 0; i < d.rank; ++i)
        result += d.v.col(i) * d.u.col(i).transpose() / d.sigma(i);
    return result;
}

Eigen::Index numerical_rank(const Matrix& m, const ToleranceConfig& tol) {
    return svd_with_rank(m, tol).rank;
}

Matrix null_projector(const Matrix& m, const ToleranceConfig& tol) {
    Svd d = svd_with_rank(m, tol);
    Matrix p = Matrix::Identity(m.cols(), m.cols());
    for (Eigen::Index i = 0; i < d.rank; ++i)
        p -= d.v.col(i) * d.v.col(i).transpose();
    return p;
}

Matrix conull_projector(const Matrix& m, const ToleranceConfig& tol) {
    Svd d = svd_with_rank(m, tol);
    Matrix p = Matrix::Identity(m.rows(), m.rows());
    for (Eigen::Index i = 0; i < d.rank; ++i)
        p -= d.u.col(i) * d.u.col(i).transpose();
    return p;
}

Matrix independent_columns(const Matrix& p, Eigen::Index r, const ToleranceConfig& tol) {
    if (numerical_rank(p, tol) != r)
        throw InvalidInput("projector rank does not match requested column count");
    Matrix out(p.rows(), r);
    if (r == 0) return out;
    Eigen::ColPivHouseholderQR<Matrix> qr(p);
    auto perm = qr.colsPermutation().indices();
    std::vector<Eigen::Index> picked(perm.data(), perm.data() + r);
    std::sort(picked.begin(), picked.end());
    for (Eigen::Index i = 0; i < r; ++i) out.col(i) = p.col(picked[i]);
    return out;
}

Matrix independent_rows(const Matrix& p, Eigen::Index d, const ToleranceConfig& tol) {
    return independent_columns(p.transpose(), d, tol).transpose();
}

Vector least_squares_min_norm(const Matrix& m, const Vector& y, const ToleranceConfig& tol) {
    if (y.size() != m.rows()) throw InvalidInput("right-hand side length does not match row count");
    return pseudoinverse(m, tol) * y;
}

}  // namespace idereg
