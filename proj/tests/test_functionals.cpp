#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "functionals.hpp"

#include <random>

using namespace idereg;

namespace {

// x(t) = (t, 1) for t < 0.5 and (t+1, 1) for t >= 0.5, as a 2 x 1 function
PiecewiseMatrixFunction jump_solution() {
    PiecewiseMatrixFunction::PolyMatrix lo{{Poly{0.0, 1.0}}, {Poly{1.0}}};
    PiecewiseMatrixFunction::PolyMatrix hi{{Poly{1.0, 1.0}}, {Poly{1.0}}};
    return PiecewiseMatrixFunction(0, 1, {0.5}, {lo, hi});
}

PiecewiseMatrixFunction continuous_solution() {
    PiecewiseMatrixFunction::PolyMatrix piece{{Poly{0.0, 1.0}}, {Poly{1.0}}};
    return PiecewiseMatrixFunction::single_piece(0, 1, piece);
}

}  // namespace

TEST_CASE("impulse functional evaluates the jump condition") {
    Matrix e(1, 2), s(1, 2);
    e << 1, 0;
    s << 0, 0;
    ImpulseRecord imp(0.5, e, s, Vector::Zero(1));
    auto phi = impulse_functional(0, 1, imp);
    CHECK(phi.apply(jump_solution())(0, 0) == doctest::Approx(1.0));
    CHECK(phi.apply(continuous_solution())(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("impulse rank validation") {
    Matrix e(1, 2), s(1, 2);
    e << 1, 0;
    s << -1, 0;  // E + S = 0, rank 0 != declared k = 1
    CHECK_THROWS_AS(ImpulseRecord(0.5, e, s, Vector::Zero(1)), InvalidInput);
    // k_i must stay below n
    Matrix e2 = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(ImpulseRecord(0.5, e2, Matrix::Zero(2, 2), Vector::Zero(2)), InvalidInput);
}

TEST_CASE("stack concatenates rows in order") {
    Matrix m1 = Matrix::Ones(1, 2), m2 = Matrix::Constant(2, 2, 3.0);
    LinearVectorFunctional f1(0, 1, 1, 2, {{0.0, Side::Right, m1}}, std::nullopt);
    LinearVectorFunctional f2(0, 1, 2, 2, {{1.0, Side::Left, m2}}, std::nullopt);
    auto stacked = stack(0, 1, 2, {f1, f2});
    CHECK(stacked.out_dim() == 3);

    auto x = continuous_solution();
    Matrix parts(3, 1);
    parts.topRows(1) = f1.apply(x);
    parts.bottomRows(2) = f2.apply(x);
    CHECK((stacked.apply(x) - parts).cwiseAbs().maxCoeff() < 1e-12);

    CHECK(stack(0, 1, 2, {}).out_dim() == 0);

    LinearVectorFunctional wide(0, 1, 1, 3, {{0.0, Side::Right, Matrix::Ones(1, 3)}},
                                std::nullopt);
    CHECK_THROWS_AS(stack(0, 1, 2, {f1, wide}), InvalidInput);
}

TEST_CASE("apply with point and integral terms") {
    // ell x = x(0) applied to X(t) = [t, 1]
    LinearVectorFunctional ell(0, 1, 1, 1, {{0.0, Side::Right, Matrix::Identity(1, 1)}},
                               std::nullopt);
    PiecewiseMatrixFunction X =
        PiecewiseMatrixFunction::single_piece(0, 1, {{Poly{0.0, 1.0}, Poly{1.0}}});
    Matrix applied = ell.apply(X);
    CHECK(applied(0, 0) == doctest::Approx(0.0));
    CHECK(applied(0, 1) == doctest::Approx(1.0));

    // integral mean of x(t) = t
    LinearVectorFunctional mean(0, 1, 1, 1, {},
                                PiecewiseMatrixFunction::identity(0, 1, 1));
    auto t = PiecewiseMatrixFunction::single_piece(0, 1, {{Poly{0.0, 1.0}}});
    CHECK(mean.apply(t)(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("impulse functional applied columnwise") {
    Matrix e(1, 2), s(1, 2);
    e << 1, 0;
    s << 0, 0;
    auto phi = impulse_functional(0, 1, ImpulseRecord(0.5, e, s, Vector::Zero(1)));
    auto both = jump_solution().hcat(continuous_solution());
    Matrix applied = phi.apply(both);
    CHECK(applied(0, 0) == doctest::Approx(1.0));
    CHECK(applied(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("build_delta ordering") {
    Vector alpha0 = Vector::Zero(1);
    CHECK(build_delta({}, alpha0).size() == 1);

    Matrix e(1, 2), s(1, 2);
    e << 1, 0;
    s << 0, 1;
    ImpulseRecord imp(0.5, e, s, Vector::Constant(1, 1.0));
    Vector alpha(2);
    alpha << 2, 3;
    Vector delta = build_delta({imp}, alpha);
    REQUIRE(delta.size() == 3);
    CHECK(delta(0) == 1.0);
    CHECK(delta(1) == 2.0);
    CHECK(delta(2) == 3.0);
}

TEST_CASE("linearity of apply") {
    std::mt19937 rng(404);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    Matrix ma = Matrix::Random(2, 2), mb = Matrix::Random(2, 2);
    LinearVectorFunctional L(0, 1, 2, 2,
                             {{0.0, Side::Right, ma}, {1.0, Side::Left, mb}},
                             PiecewiseMatrixFunction::constant(0, 1, Matrix::Random(2, 2)));
    for (int iter = 0; iter < 10; ++iter) {
        PiecewiseMatrixFunction::PolyMatrix p1(2, std::vector<Poly>(1)), p2(2, std::vector<Poly>(1));
        for (int i = 0; i < 2; ++i) {
            p1[i][0] = {coeff(rng), coeff(rng), coeff(rng)};
            p2[i][0] = {coeff(rng), coeff(rng)};
        }
        auto x = PiecewiseMatrixFunction::single_piece(0, 1, p1);
        auto y = PiecewiseMatrixFunction::single_piece(0, 1, p2);
        const double al = coeff(rng), be = coeff(rng);
        Matrix lhs = L.apply(combine(al, x, be, y));
        Matrix rhs = al * L.apply(x) + be * L.apply(y);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
}
