#include "problem.hpp"

namespace idereg {

Eigen::Index ProblemSpec::k_total() const {
    Eigen::Index k = 0;
    for (const auto& imp : impulses) k += imp.k();
    return k;
}

void ProblemSpec::validate() const {
    if (!(a < b)) throw InvalidInput("interval requires a < b");
    if (m <= 0 || n <= 0) throw InvalidInput("dimensions m, n must be positive");
    auto check_shape = [](const PiecewiseMatrixFunction& fn, Eigen::Index r, Eigen::Index c,
                          const char* what) {
        if (fn.rows() != r || fn.cols() != c)
            throw InvalidInput(std::string(what) + ": shape mismatch");
    };
    check_shape(A, m, n, "A");
    check_shape(B, m, n, "B");
    check_shape(Phi, n, m, "Phi");
    check_shape(f, n, 1, "f");
    if (ell.width() != n) throw InvalidInput("boundary functional width must equal n");
    if (alpha.size() != ell.out_dim())
        throw InvalidInput("alpha length must equal the boundary functional dimension");
    double prev = a;
    for (const auto& imp : impulses) {
        if (!(imp.tau > prev && imp.tau < b))
            throw InvalidInput("impulse instants must be strictly increasing inside (a, b)");
        if (imp.n() != n) throw InvalidInput("impulse matrices must have n columns");
        prev = imp.tau;
    }
    if (control_kernel && (control_kernel->rows() != n || control_kernel->cols() != n))
        throw InvalidInput("control kernel must be n x n");
    tol.validate();
    quad.validate();
}

LinearVectorFunctional stacked_functional(const ProblemSpec& p) {
    std::vector<LinearVectorFunctional> parts;
    parts.reserve(p.impulses.size() + 1);
    for (const auto& imp : p.impulses) parts.push_back(impulse_functional(p.a, p.b, imp));
    parts.push_back(p.ell);
    return stack(p.a, p.b, p.n, parts);
}

}  // namespace idereg
