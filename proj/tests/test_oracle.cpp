#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "control.hpp"
#include "oracle.hpp"
#include "random_instances.hpp"

using namespace idereg;
using namespace idereg::testing;

TEST_CASE("S1 oracle residuals and verdicts") {
    // unsolvable problem: discrete residual sits near the analytic defect 1
    auto bad = s1_problem(1.0);
    auto sol = oracle_solve(bad, bad.delta(), std::nullopt);
    CHECK(sol.min_residual == doctest::Approx(1.0).epsilon(0.02));
    CHECK(oracle_solvable(bad, bad.delta(), std::nullopt) == OracleVerdict::Unsolvable);

    // solvable counterpart: f = 0 admits x = c t
    auto good = s1_problem(0.0);
    auto sol2 = oracle_solve(good, good.delta(), std::nullopt);
    CHECK(sol2.min_residual < 1e-8);
    CHECK(oracle_solvable(good, good.delta(), std::nullopt) == OracleVerdict::Solvable);

    // the regularizing control flips the verdict
    CHECK(oracle_solvable(bad, bad.delta(), Vector::Constant(1, -1.0)) ==
          OracleVerdict::Solvable);
    CHECK(oracle_solvable(bad, bad.delta(), Vector::Zero(1)) == OracleVerdict::Unsolvable);
}

TEST_CASE("verdict bands") {
    OracleConfig cfg;
    auto check_band = [&](double fval, OracleVerdict expect) {
        auto p = s1_problem(fval);
        CHECK(oracle_solvable(p, p.delta(), std::nullopt, cfg) == expect);
    };
    check_band(0.0, OracleVerdict::Solvable);
    check_band(1.0, OracleVerdict::Unsolvable);
    // defect between the bands (residual ~ fval) is indeterminate
    check_band(5e-6, OracleVerdict::Indeterminate);
}

TEST_CASE("grid layout") {
    std::mt19937 rng(7);
    InstanceOptions opt;
    opt.max_n = 3;
    opt.max_p = 2;
    ProblemSpec p = random_instance(rng, opt);
    while (p.impulses.size() != 2) p = random_instance(rng, opt);
    OracleConfig cfg;
    cfg.nodes_per_subinterval = 16;
    auto sol = oracle_solve(p, p.delta(), std::nullopt, cfg);
    REQUIRE(sol.grid.ts.size() == 3);
    for (size_t blk = 0; blk < 3; ++blk) {
        CHECK(sol.grid.ts[blk].size() == 16);
        CHECK(sol.grid.values[blk].rows() == p.n);
        CHECK(sol.grid.values[blk].cols() == 16);
    }
    CHECK(sol.grid.ts[0].front() == doctest::Approx(p.a));
    CHECK(sol.grid.ts[0].back() == doctest::Approx(p.impulses[0].tau));
    CHECK(sol.grid.ts[1].front() == doctest::Approx(p.impulses[0].tau));
    CHECK(sol.grid.ts[2].back() == doctest::Approx(p.b));
}

TEST_CASE("family_distance") {
    auto p = s1_problem(0.0);
    auto fam = solve_family(build_core(p), p.delta());
    auto sol = oracle_solve(p, p.delta(), std::nullopt);
    CHECK(family_distance(fam, sol.grid) < 1e-6);

    // a family that misses the oracle solution by a constant shows the gap
    SolutionFamily off{combine(1.0, fam.particular, 1.0,
                               PiecewiseMatrixFunction::constant(0, 1, Matrix::Ones(1, 1))),
                       fam.basis, fam.r2};
    CHECK(family_distance(off, sol.grid) > 0.4);

    // zero-parameter family
    SolutionFamily fixed{fam.particular, PiecewiseMatrixFunction::zero(0, 1, 1, 0), 0};
    CHECK(family_distance(fixed, sol.grid) >= 0.0);
}

TEST_CASE("residual decreases under refinement") {
    std::mt19937 rng(88);
    int checked = 0, attempts = 0;
    while (checked < 3 && attempts < 200) {
        ++attempts;
        ProblemSpec p = random_instance(rng);
        AlgebraicCore core = build_core(p);
        if (!well_scaled(core)) continue;
        Vector delta = p.delta();
        if (!check_solvability(core, delta).solvable) continue;
        OracleConfig coarse, fine;
        coarse.nodes_per_subinterval = 32;
        fine.nodes_per_subinterval = 128;
        double rc = oracle_solve(p, delta, std::nullopt, coarse).min_residual;
        double rf = oracle_solve(p, delta, std::nullopt, fine).min_residual;
        CHECK(rc < 1e-5);
        CHECK(rf < rc * 10.0 + 1e-9);  // refinement never blows the residual up
        ++checked;
    }
    CHECK(checked == 3);
}

TEST_CASE("oracle agrees with the solver") {
    std::mt19937 rng(2468);
    int agreed = 0, attempts = 0;
    while (agreed < 25 && attempts < 600) {
        ++attempts;
        ProblemSpec p = random_instance(rng);
        AlgebraicCore core = build_core(p);
        if (!well_scaled(core)) continue;
        Vector delta = p.delta();
        auto rep = check_solvability(core, delta);
        auto verdict = oracle_solvable(p, delta, std::nullopt);
        if (verdict == OracleVerdict::Indeterminate) continue;
        CHECK(rep.solvable == (verdict == OracleVerdict::Solvable));
        if (rep.solvable && verdict == OracleVerdict::Solvable) {
            auto fam = solve_family(core, delta);
            auto sol = oracle_solve(p, delta, std::nullopt);
            CHECK(family_distance(fam, sol.grid) < 1e-4);
        }
        ++agreed;
    }
    CHECK(agreed == 25);
}

TEST_CASE("configuration validation") {
    auto p = s1_problem();
    OracleConfig cfg;
    cfg.nodes_per_subinterval = 4;
    CHECK_THROWS_AS(oracle_solve(p, p.delta(), std::nullopt, cfg), InvalidInput);
    cfg = OracleConfig{};
    cfg.margin_band = 0.5;
    CHECK_THROWS_AS(oracle_solve(p, p.delta(), std::nullopt, cfg), InvalidInput);
    CHECK_THROWS_AS(oracle_solve(p, Vector::Zero(3), std::nullopt), InvalidInput);
}
