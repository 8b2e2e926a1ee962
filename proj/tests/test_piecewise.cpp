#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "piecewise.hpp"

#include <random>

using namespace idereg;

namespace {

PiecewiseMatrixFunction scalar_poly(double a, double b, Poly p) {
    return PiecewiseMatrixFunction::single_piece(a, b, {{std::move(p)}});
}

// closed-form integral of a polynomial piece
double exact_poly_integral(const Poly& p, double lo, double hi) {
    Poly anti = poly_antiderivative(p);
    return poly_eval(anti, hi) - poly_eval(anti, lo);
}

}  // namespace

TEST_CASE("eval sides") {
    auto f = scalar_poly(0, 1, {0.0, 1.0});  // t
    CHECK(f.eval(0.5, Side::Left)(0, 0) == doctest::Approx(0.5));
    CHECK(f.eval(0.5, Side::Right)(0, 0) == doctest::Approx(0.5));

    // unit step at 0.5
    PiecewiseMatrixFunction step(0, 1, {0.5}, {{{Poly{0.0}}}, {{Poly{1.0}}}});
    CHECK(step.eval(0.5, Side::Left)(0, 0) == doctest::Approx(0.0));
    CHECK(step.eval(0.5, Side::Right)(0, 0) == doctest::Approx(1.0));

    // pieces t and t+1 split at 0.5
    PiecewiseMatrixFunction split(0, 1, {0.5}, {{{Poly{0.0, 1.0}}}, {{Poly{1.0, 1.0}}}});
    CHECK(split.eval(0.5, Side::Right)(0, 0) == doctest::Approx(1.5));

    CHECK_THROWS_AS(f.eval(1.5), InvalidInput);
}

TEST_CASE("integrate fixed examples") {
    auto t2 = scalar_poly(0, 1, {0.0, 0.0, 1.0});
    CHECK(t2.integrate(0, 1)(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    PiecewiseMatrixFunction step(0, 1, {0.5}, {{{Poly{0.0}}}, {{Poly{1.0}}}});
    CHECK(step.integrate(0, 1)(0, 0) == doctest::Approx(0.5));

    PiecewiseMatrixFunction::PolyMatrix piece{{Poly{1.0}, Poly{0.0, 1.0}},
                                              {Poly{0.0}, Poly{0.0, 2.0}}};
    auto mat = PiecewiseMatrixFunction::single_piece(0, 1, piece);
    Matrix val = mat.integrate(0, 1);
    CHECK(val(0, 0) == doctest::Approx(1.0));
    CHECK(val(0, 1) == doctest::Approx(0.5));
    CHECK(val(1, 0) == doctest::Approx(0.0));
    CHECK(val(1, 1) == doctest::Approx(1.0));

    CHECK_THROWS_AS(t2.integrate(0.7, 0.3), InvalidInput);
}

TEST_CASE("antiderivative") {
    auto one = scalar_poly(0, 1, {1.0});
    auto t = one.antiderivative();
    CHECK(t.eval(0.0)(0, 0) == doctest::Approx(0.0));
    CHECK(t.eval(0.7)(0, 0) == doctest::Approx(0.7));

    PiecewiseMatrixFunction step(0, 1, {0.5}, {{{Poly{0.0}}}, {{Poly{1.0}}}});
    auto ramp = step.antiderivative();
    CHECK(ramp.eval(0.3)(0, 0) == doctest::Approx(0.0));
    CHECK(ramp.eval(0.5, Side::Left)(0, 0) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(ramp.eval(0.5, Side::Right)(0, 0) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(ramp.eval(1.0)(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("step basis") {
    auto h = PiecewiseMatrixFunction::step_basis(0, 1, 0.5, 1);
    CHECK(h.eval(0.4)(0, 0) == doctest::Approx(0.0));
    CHECK(h.eval(0.6)(0, 0) == doctest::Approx(1.0));
    CHECK(h.eval(0.5, Side::Left)(0, 0) == doctest::Approx(0.0));
    CHECK(h.antiderivative().eval(1.0)(0, 0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(PiecewiseMatrixFunction::step_basis(0, 1, 1.0, 1), InvalidInput);
}

TEST_CASE("combine and matmul") {
    auto t = scalar_poly(0, 1, {0.0, 1.0});
    auto one = scalar_poly(0, 1, {1.0});
    auto sum = combine(1.0, t, 1.0, one);
    CHECK(sum.eval(0.25)(0, 0) == doctest::Approx(1.25));

    auto t2 = matmul(t, t);
    CHECK(t2.eval(0.5)(0, 0) == doctest::Approx(0.25));

    auto wide = PiecewiseMatrixFunction::zero(0, 1, 1, 2);
    CHECK_THROWS_AS(combine(1.0, t, 1.0, wide), InvalidInput);
}

TEST_CASE("collapse kernel") {
    using Grid = BivariateKernel::CoeffGrid;
    BivariateKernel constant(0, 1, 1, 1, {{Grid{{1.0}}}});
    CHECK(constant.collapse().eval(0.3)(0, 0) == doctest::Approx(1.0));

    BivariateKernel ts(0, 1, 1, 1, {{Grid{{0.0, 0.0}, {0.0, 1.0}}}});  // t*s
    CHECK(ts.collapse().eval(0.8)(0, 0) == doctest::Approx(0.4));

    BivariateKernel s2(0, 1, 1, 1, {{Grid{{0.0, 0.0, 1.0}}}});  // s^2
    CHECK(s2.collapse().eval(0.1)(0, 0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("quadrature exactness for degree 2G-1") {
    std::mt19937 rng(2211);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (int order : {2, 4, 8}) {
        for (int iter = 0; iter < 20; ++iter) {
            Poly p(2 * order);  // degree exactly 2G-1
            for (double& c : p) c = coeff(rng);
            if (p.back() == 0.0) p.back() = 0.5;
            auto f = scalar_poly(0, 1, p);
            QuadratureConfig q{order};
            const double got = f.integrate(0, 1, q)(0, 0);
            const double want = exact_poly_integral(p, 0, 1);
            CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("quadrature additivity and antiderivative consistency") {
    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_real_distribution<double> cut(0.2, 0.8);
    for (int iter = 0; iter < 30; ++iter) {
        double bp = cut(rng);
        Poly p1(4), p2(3);
        for (double& c : p1) c = coeff(rng);
        for (double& c : p2) c = coeff(rng);
        PiecewiseMatrixFunction f(0, 1, {bp}, {{{p1}}, {{p2}}});
        double mid = cut(rng);
        double whole = f.integrate(0, 1)(0, 0);
        double split = f.integrate(0, mid)(0, 0) + f.integrate(mid, 1)(0, 0);
        CHECK(whole == doctest::Approx(split).epsilon(1e-12));

        auto anti = f.antiderivative();
        CHECK(anti.eval(1.0)(0, 0) == doctest::Approx(whole).epsilon(1e-12));
        CHECK(anti.eval(bp, Side::Left)(0, 0) ==
              doctest::Approx(anti.eval(bp, Side::Right)(0, 0)).epsilon(1e-13));
        // derivative of the antiderivative recovers the function away from the cut
        CHECK(anti.derivative().eval(0.11)(0, 0) == doctest::Approx(f.eval(0.11)(0, 0)));
    }
}

TEST_CASE("construction invariants") {
    CHECK_THROWS_AS(PiecewiseMatrixFunction(1, 0, {}, {{{Poly{1.0}}}}), InvalidInput);
    CHECK_THROWS_AS(PiecewiseMatrixFunction(0, 1, {1.5}, {{{Poly{1.0}}}, {{Poly{1.0}}}}),
                    InvalidInput);
    CHECK_THROWS_AS(PiecewiseMatrixFunction(0, 1, {0.5}, {{{Poly{1.0}}}}), InvalidInput);
}
