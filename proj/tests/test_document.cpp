#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "runner.hpp"

using namespace idereg;

namespace {

const char* kS1 = R"({
  "interval": [0, 1],
  "m": 1,
  "n": 1,
  "A": {"kind": "poly", "coeffs": [[[0]]]},
  "B": {"kind": "poly", "coeffs": [[[1]]]},
  "Phi": {"kind": "poly", "coeffs": [[[1]]]},
  "f": {"kind": "poly", "coeffs": [[[1]]]},
  "K": {"kind": "poly2", "coeffs": [[[[1]]]]},
  "functional": {"points": [{"t": 0, "side": "right", "matrix": [[1]]}]},
  "alpha": [0]
})";

std::string patched(const std::string& doc, const std::string& from, const std::string& to) {
    std::string out = doc;
    out.replace(out.find(from), from.size(), to);
    return out;
}

}  // namespace

TEST_CASE("parse the S1 document") {
    ProblemSpec p = parse_problem_document(kS1);
    CHECK(p.m == 1);
    CHECK(p.n == 1);
    CHECK(p.Phi.eval(0.5)(0, 0) == doctest::Approx(1.0));
    CHECK(p.f.eval(0.5)(0, 0) == doctest::Approx(1.0));
    CHECK(p.control_kernel.has_value());
    CHECK(p.control_kernel->eval(0.3, 0.7)(0, 0) == doctest::Approx(1.0));
    CHECK(p.alpha.size() == 1);
    CHECK(p.jump_model == JumpModel::Free);
}

TEST_CASE("document options and overrides") {
    std::string doc = patched(kS1, "\"alpha\": [0]",
                              "\"alpha\": [0], \"options\": {\"jump_model\": \"none\", "
                              "\"gauss_order\": 4, \"solve_tol\": 1e-6}");
    ProblemSpec p = parse_problem_document(doc);
    CHECK(p.jump_model == JumpModel::None);
    CHECK(p.quad.gauss_order == 4);
    CHECK(p.tol.solve_tol == doctest::Approx(1e-6));

    // flag override wins over the document
    RunOptions opts;
    opts.solve_tol = 10.0;
    auto res = run_analyze(doc, opts);
    CHECK(res.status == kOk);  // cond1 = 1 < 10 counts as solvable
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_problem_document("{"), InvalidInput);
    CHECK_THROWS_AS(parse_problem_document("[1, 2]"), InvalidInput);
    CHECK_THROWS_AS(parse_problem_document(std::string(kS1) + " x"), InvalidInput);
    // wrong matrix shape: B declared 1x1 but given 2 rows
    CHECK_THROWS_AS(
        parse_problem_document(patched(kS1, "\"B\": {\"kind\": \"poly\", \"coeffs\": [[[1]]]}",
                                       "\"B\": {\"kind\": \"poly\", \"coeffs\": [[[1]], [[1]]]}")),
        InvalidInput);
    CHECK_THROWS_AS(parse_problem_document(patched(kS1, "\"m\": 1", "\"m\": -1")), InvalidInput);
    CHECK_THROWS_AS(
        parse_problem_document(patched(kS1, "\"kind\": \"poly2\"", "\"kind\": \"weird\"")),
        InvalidInput);
}

TEST_CASE("point terms at impulse instants need a side") {
    const char* doc = R"({
      "interval": [0, 1], "m": 1, "n": 2,
      "A": {"kind": "poly", "coeffs": [[[0], [0]]]},
      "B": {"kind": "poly", "coeffs": [[[1], [0]]]},
      "Phi": {"kind": "poly", "coeffs": [[[1]], [[0]]]},
      "f": {"kind": "poly", "coeffs": [[[0]], [[0]]]},
      "impulses": [{"tau": 0.5, "E": [[1, 0]], "S": [[0, 0]], "gamma": [0]}],
      "functional": {"points": [{"t": 0.5, "matrix": [[1, 0]]}]},
      "alpha": [0]
    })";
    CHECK_THROWS_AS(parse_problem_document(doc), InvalidInput);
    ProblemSpec p = parse_problem_document(
        patched(doc, "{\"t\": 0.5,", "{\"t\": 0.5, \"side\": \"left\","));
    CHECK(p.ell.point_terms()[0].side == Side::Left);
}

TEST_CASE("grid inputs are fit by least squares") {
    // samples of t^2 on 9 nodes, quadratic fit reproduces it
    std::string doc = patched(
        kS1, "\"f\": {\"kind\": \"poly\", \"coeffs\": [[[1]]]}",
        "\"f\": {\"kind\": \"grid\", \"fit_degree\": 2, "
        "\"ts\": [0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1], "
        "\"values\": [[[0]], [[0.015625]], [[0.0625]], [[0.140625]], [[0.25]], [[0.390625]], "
        "[[0.5625]], [[0.765625]], [[1]]]}");
    ProblemSpec p = parse_problem_document(doc);
    CHECK(p.f.eval(0.3)(0, 0) == doctest::Approx(0.09).epsilon(1e-10));
    CHECK_THROWS_AS(
        parse_problem_document(patched(doc, "\"fit_degree\": 2", "\"fit_degree\": 20")),
        InvalidInput);
}

TEST_CASE("auxiliary matrix and vector files") {
    Matrix w = parse_matrix_file(R"({"matrix": [[2, 0], [0, 3]]})");
    CHECK(w(1, 1) == 3.0);
    Vector v = parse_vector_file(R"({"vector": [1.5, -2]})");
    CHECK(v(1) == -2.0);
    CHECK_THROWS_AS(parse_matrix_file(R"({"vector": [1]})"), InvalidInput);
}

TEST_CASE("report serialization") {
    AnalysisReport r;
    r.rank_D = 0;
    r.r1 = 2;
    r.d1 = 1;
    r.r2 = 1;
    r.cond1 = 1.0;
    r.solvable = false;
    r.has_control = true;
    r.regularizable = true;
    r.u_min_norm = Vector::Constant(1, -1.0);
    std::string json = to_json(r);
    CHECK(json.find("\"solvable\": false") != std::string::npos);
    CHECK(json.find("\"u_min_norm\": [-1]") != std::string::npos);
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("run_analyze statuses and determinism") {
    auto res = run_analyze(kS1);
    CHECK(res.status == kUnsolvable);
    CHECK(res.report.find("\"regularizable\": true") != std::string::npos);
    CHECK(run_analyze(kS1).report == res.report);

    auto solvable = run_analyze(patched(kS1, "\"f\": {\"kind\": \"poly\", \"coeffs\": [[[1]]]}",
                                        "\"f\": {\"kind\": \"poly\", \"coeffs\": [[[0]]]}"));
    CHECK(solvable.status == kOk);

    // kernel scaled to zero: unsolvable and not regularizable
    auto dead = run_analyze(patched(kS1, "\"coeffs\": [[[[1]]]]", "\"coeffs\": [[[[0]]]]"));
    CHECK(dead.status == kNotRegularizable);
}

TEST_CASE("run_solve") {
    std::string solvable = patched(kS1, "\"f\": {\"kind\": \"poly\", \"coeffs\": [[[1]]]}",
                                   "\"f\": {\"kind\": \"poly\", \"coeffs\": [[[0]]]}");
    RunOptions opts;
    opts.params = {2.0};
    opts.samples = 3;
    auto res = run_solve(solvable, opts);
    CHECK(res.status == kOk);
    CHECK(res.report == "t,side,x1\n0,right,0\n0.5,right,1\n1,left,2\n");

    auto zeros = run_solve(solvable);
    CHECK(zeros.report.find("0.5,right,0") != std::string::npos);

    opts.params = {1.0, 2.0};
    CHECK_THROWS_AS(run_solve(solvable, opts), InvalidInput);

    auto unsolvable = run_solve(kS1);
    CHECK(unsolvable.status == kUnsolvable);
    CHECK(unsolvable.report.find("regularize") != std::string::npos);
}

TEST_CASE("run_regularize") {
    auto res = run_regularize(kS1);
    CHECK(res.status == kOk);
    CHECK(res.report.find("\"u\": [-1]") != std::string::npos);
    CHECK(res.report.find("\"r2\": 1") != std::string::npos);

    auto dead = run_regularize(patched(kS1, "\"coeffs\": [[[[1]]]]", "\"coeffs\": [[[[0]]]]"));
    CHECK(dead.status == kNotRegularizable);
    CHECK(dead.report.find("\"criterion_residual\": 1") != std::string::npos);

    // missing kernel is invalid input
    CHECK_THROWS_AS(
        run_regularize(patched(kS1, "\"K\": {\"kind\": \"poly2\", \"coeffs\": [[[[1]]]]},", "")),
        InvalidInput);

    // weighted objective with a pinned control matches minnorm
    RunOptions w;
    w.weighted = true;
    w.weight = Matrix::Constant(1, 1, 4.0);
    w.uref = Vector::Constant(1, 7.0);
    CHECK(run_regularize(kS1, w).report.find("\"u\": [-1]") != std::string::npos);
}

TEST_CASE("run_verify") {
    auto res = run_verify(kS1);
    CHECK(res.status == kOk);
    CHECK(res.report.find("\"agreement\": true") != std::string::npos);
    CHECK(res.report.find("\"verdict\": \"unsolvable\"") != std::string::npos);

    // absurd solve_tol makes the solver accept while the oracle refuses
    RunOptions opts;
    opts.solve_tol = 10.0;
    auto forced = run_verify(kS1, opts);
    CHECK(forced.status == kOracleDisagreement);

    std::string solvable = patched(kS1, "\"f\": {\"kind\": \"poly\", \"coeffs\": [[[1]]]}",
                                   "\"f\": {\"kind\": \"poly\", \"coeffs\": [[[0]]]}");
    auto both = run_verify(solvable);
    CHECK(both.status == kOk);
    CHECK(both.report.find("\"family_distance\"") != std::string::npos);
}
