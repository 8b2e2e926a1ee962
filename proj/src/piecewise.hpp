#pragma once

#include "linalg.hpp"

#include <vector>

namespace idereg {

// Univariate polynomial in the global variable t, coefficients ascending in degree.
using Poly = std::vector<double>;

double poly_eval(const Poly& p, double t);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, double s);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_antiderivative(const Poly& p);  // constant term zero
Poly poly_derivative(const Poly& p);

enum class Side { Left, Right };

struct QuadratureConfig {
    int gauss_order = 8;

    void validate() const {
        if (gauss_order < 1) throw InvalidInput("gauss_order must be >= 1");
    }
};

// Gauss-Legendre nodes/weights on [-1, 1], exact for degree <= 2*order - 1.
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

// Matrix-valued function of t on [a, b], polynomial on each subinterval between
// strictly increasing interior breakpoints. Values at a breakpoint are one-sided.
class PiecewiseMatrixFunction {
public:
    using PolyMatrix = std::vector<std::vector<Poly>>;  // rows x cols of Poly

    PiecewiseMatrixFunction(double a, double b, std::vector<double> breakpoints,
                            std::vector<PolyMatrix> pieces);

    // Constant-free helpers.
    static PiecewiseMatrixFunction constant(double a, double b, const Matrix& value);
    static PiecewiseMatrixFunction zero(double a, double b, Eigen::Index rows, Eigen::Index cols);
    static PiecewiseMatrixFunction identity(double a, double b, Eigen::Index n);
    static PiecewiseMatrixFunction single_piece(double a, double b, PolyMatrix piece);
    // n x n step: zero for t <= tau (left limit), identity for t > tau.
    static PiecewiseMatrixFunction step_basis(double a, double b, double tau, Eigen::Index n);

    double a() const { return a_; }
    double b() const { return b_; }
    Eigen::Index rows() const { return rows_; }
    Eigen::Index cols() const { return cols_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<PolyMatrix>& pieces() const { return pieces_; }

    Matrix eval(double t, Side side = Side::Right) const;

    Matrix integrate(double lo, double hi, const QuadratureConfig& q = {}) const;

    // G with G(a) = 0, continuous across breakpoints, G' = this piecewise.
    PiecewiseMatrixFunction antiderivative() const;

    // Piecewise derivative; breakpoint jumps are dropped (derivative a.e.).
    PiecewiseMatrixFunction derivative() const;

    PiecewiseMatrixFunction transpose() const;

    // Horizontal concatenation [this, other].
    PiecewiseMatrixFunction hcat(const PiecewiseMatrixFunction& other) const;

    // Insert extra breakpoints (pieces unchanged as functions).
    PiecewiseMatrixFunction with_breakpoints(const std::vector<double>& extra) const;

    friend PiecewiseMatrixFunction combine(double alpha, const PiecewiseMatrixFunction& f,
                                           double beta, const PiecewiseMatrixFunction& g);
    friend PiecewiseMatrixFunction matmul(const PiecewiseMatrixFunction& f,
                                          const PiecewiseMatrixFunction& g);
    // this * constant matrix
    PiecewiseMatrixFunction operator*(const Matrix& rhs) const;

private:
    Eigen::Index piece_index(double t, Side side) const;

    double a_, b_;
    std::vector<double> breakpoints_;
    std::vector<PolyMatrix> pieces_;
    Eigen::Index rows_, cols_;
};

PiecewiseMatrixFunction combine(double alpha, const PiecewiseMatrixFunction& f,
                                double beta, const PiecewiseMatrixFunction& g);
PiecewiseMatrixFunction matmul(const PiecewiseMatrixFunction& f, const PiecewiseMatrixFunction& g);

// Bivariate polynomial kernel K(t, s) on [a,b]^2. Entry (i, j) holds the
// coefficient grid c[k][l] of t^k s^l.
class BivariateKernel {
public:
    using CoeffGrid = std::vector<std::vector<double>>;

    BivariateKernel(double a, double b, Eigen::Index rows, Eigen::Index cols,
                    std::vector<std::vector<CoeffGrid>> entries);

    double a() const { return a_; }
    double b() const { return b_; }
    Eigen::Index rows() const { return rows_; }
    Eigen::Index cols() const { return cols_; }

    Matrix eval(double t, double s) const;

    // k(t) = integral of K(t, s) ds over [a, b]; exact coefficient integration.
    PiecewiseMatrixFunction collapse() const;

    BivariateKernel scaled(double factor) const;

private:
    double a_, b_;
    Eigen::Index rows_, cols_;
    std::vector<std::vector<CoeffGrid>> entries_;
};

}  // namespace idereg
