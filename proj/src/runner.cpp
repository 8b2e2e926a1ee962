#include "runner.hpp"

#include "control.hpp"
#include "oracle.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

namespace idereg {

namespace {

enum class LogLevel { Off = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
    const char* env = std::getenv("IDEREG_LOG");
    if (!env) return LogLevel::Off;
    std::string v(env);
    if (v == "debug") return LogLevel::Debug;
    if (v == "info") return LogLevel::Info;
    return LogLevel::Off;
}

void log(LogLevel min, const std::string& msg) {
    static const LogLevel level = log_level();
    if (int(level) >= int(min)) std::cerr << "[idereg] " << msg << "\n";
}

ProblemSpec load(const std::string& document, const RunOptions& opts) {
    ProblemSpec p = parse_problem_document(document);
    if (opts.rank_tol_rel) p.tol.rank_tol_rel = *opts.rank_tol_rel;
    if (opts.solve_tol) p.tol.solve_tol = *opts.solve_tol;
    if (opts.gauss_order) p.quad.gauss_order = *opts.gauss_order;
    if (opts.jump_model) p.jump_model = *opts.jump_model;
    p.validate();
    {
        std::ostringstream os;
        os << "problem loaded: m=" << p.m << " n=" << p.n << " impulses=" << p.impulses.size()
           << " q=" << p.q() << (p.control_kernel ? " with kernel" : "");
        log(LogLevel::Info, os.str());
    }
    return p;
}

AnalysisReport analyze(const ProblemSpec& p) {
    AlgebraicCore core = build_core(p);
    Vector delta = p.delta();
    SolvabilityReport rep = check_solvability(core, delta);
    AnalysisReport out;
    out.rank_D = core.rank_D;
    out.r1 = core.r1;
    out.d1 = core.d1;
    out.rank_Q = core.n2;
    out.r2 = core.r2;
    out.d2 = core.d2;
    out.cond1 = rep.cond1_residual;
    out.cond2 = rep.cond2_residual;
    out.solvable = rep.solvable;
    if (p.control_kernel) {
        out.has_control = true;
        RegularizationSystem sys = build_system(core, build_moments(p, core), delta);
        out.criterion_residual = sys.criterion_residual;
        out.regularizable = check_regularizability(sys, p.tol);
        if (out.regularizable) {
            ControlFamily fam = control_family(sys, p.tol);
            out.u_min_norm = fam.u0;
            out.control_dim = fam.dim;
        }
    }
    {
        std::ostringstream os;
        os << "analysis: rank_D=" << out.rank_D << " r1=" << out.r1 << " d1=" << out.d1
           << " r2=" << out.r2 << " d2=" << out.d2 << " solvable=" << out.solvable;
        log(LogLevel::Debug, os.str());
    }
    return out;
}

std::string sample_csv(const ProblemSpec& p, const PiecewiseMatrixFunction& x, int samples) {
    std::ostringstream os;
    os << "t,side";
    for (Eigen::Index i = 0; i < p.n; ++i) os << ",x" << (i + 1);
    os << "\n";
    auto emit = [&](double t, Side side) {
        os << format_double(t) << "," << (side == Side::Left ? "left" : "right");
        Matrix v = x.eval(t, side);
        for (Eigen::Index i = 0; i < p.n; ++i) os << "," << format_double(v(i, 0));
        os << "\n";
    };
    for (int j = 0; j < samples; ++j) {
        const double t =
            (samples == 1) ? p.a : p.a + (p.b - p.a) * double(j) / double(samples - 1);
        bool at_impulse = false;
        for (const auto& imp : p.impulses) at_impulse = at_impulse || (t == imp.tau);
        if (at_impulse) {
            emit(t, Side::Left);
            emit(t, Side::Right);
        } else {
            emit(t, j + 1 == samples ? Side::Left : Side::Right);
        }
    }
    return os.str();
}

const char* verdict_name(OracleVerdict v) {
    switch (v) {
        case OracleVerdict::Solvable: return "solvable";
        case OracleVerdict::Unsolvable: return "unsolvable";
        default: return "indeterminate";
    }
}

}  // namespace

RunResult run_analyze(const std::string& document, const RunOptions& opts) {
    ProblemSpec p = load(document, opts);
    AnalysisReport rep = analyze(p);
    int status = kOk;
    if (!rep.solvable) status = (rep.has_control && !rep.regularizable) ? kNotRegularizable : kUnsolvable;
    return RunResult{status, to_json(rep)};
}

RunResult run_solve(const std::string& document, const RunOptions& opts) {
    if (opts.samples < 1) throw InvalidInput("samples must be >= 1");
    ProblemSpec p = load(document, opts);
    AlgebraicCore core = build_core(p);
    Vector delta = p.delta();
    SolvabilityReport rep = check_solvability(core, delta);
    if (!rep.solvable) {
        std::ostringstream os;
        os << "problem is unsolvable (cond1 " << format_double(rep.cond1_residual) << ", cond2 "
           << format_double(rep.cond2_residual) << "); run `idereg regularize` to obtain a control\n";
        return RunResult{kUnsolvable, os.str()};
    }
    SolutionFamily fam = solve_family(core, delta);
    Vector c = Vector::Zero(fam.r2);
    if (opts.params) {
        if (Eigen::Index(opts.params->size()) != fam.r2)
            throw InvalidInput("params length must equal the family dimension r2");
        for (size_t i = 0; i < opts.params->size(); ++i) c(Eigen::Index(i)) = (*opts.params)[i];
    }
    return RunResult{kOk, sample_csv(p, fam.member(c), opts.samples)};
}

RunResult run_regularize(const std::string& document, const RunOptions& opts) {
    ProblemSpec p = load(document, opts);
    AlgebraicCore core = build_core(p);
    Vector delta = p.delta();
    RegularizationSystem sys = build_system(core, build_moments(p, core), delta);
    if (!check_regularizability(sys, p.tol)) {
        std::ostringstream os;
        os << "{\n  \"regularizable\": false,\n  \"criterion_residual\": "
           << format_double(sys.criterion_residual) << "\n}\n";
        return RunResult{kNotRegularizable, os.str()};
    }
    ControlFamily fam = control_family(sys, p.tol);
    Vector u;
    if (opts.weighted) {
        const Eigen::Index n = p.n;
        Matrix wt = opts.weight ? *opts.weight : Matrix(Matrix::Identity(n, n));
        Vector uref = opts.uref ? *opts.uref : Vector(Vector::Zero(n));
        u = select_weighted(fam, wt, uref, p.tol);
    } else {
        u = select_min_norm(fam);
    }
    ProblemSpec controlled = apply_control(p, u);
    AlgebraicCore core2 = build_core(controlled);
    SolutionFamily family = solve_family(core2, delta);
    std::ostringstream os;
    os << "{\n";
    os << "  \"regularizable\": true,\n";
    os << "  \"criterion_residual\": " << format_double(sys.criterion_residual) << ",\n";
    os << "  \"u\": " << json_vector(u) << ",\n";
    os << "  \"control_dim\": " << fam.dim << ",\n";
    os << "  \"family\": {\"r2\": " << family.r2 << "}\n";
    os << "}\n";
    return RunResult{kOk, os.str()};
}

RunResult run_verify(const std::string& document, const RunOptions& opts) {
    ProblemSpec p = load(document, opts);
    AlgebraicCore core = build_core(p);
    Vector delta = p.delta();
    SolvabilityReport rep = check_solvability(core, delta);
    OracleConfig cfg;
    cfg.nodes_per_subinterval = opts.oracle_nodes;
    OracleSolution oracle = oracle_solve(p, delta, std::nullopt, cfg);
    OracleVerdict verdict;
    if (oracle.min_residual < cfg.residual_tol)
        verdict = OracleVerdict::Solvable;
    else if (oracle.min_residual > cfg.margin_band * cfg.residual_tol)
        verdict = OracleVerdict::Unsolvable;
    else
        verdict = OracleVerdict::Indeterminate;

    const bool indeterminate = verdict == OracleVerdict::Indeterminate;
    const bool agree =
        indeterminate || (rep.solvable == (verdict == OracleVerdict::Solvable));
    std::optional<double> distance;
    if (rep.solvable && verdict == OracleVerdict::Solvable)
        distance = family_distance(solve_family(core, delta), oracle.grid);

    std::ostringstream os;
    os << "{\n";
    os << "  \"solver\": {\"solvable\": " << (rep.solvable ? "true" : "false")
       << ", \"cond1\": " << format_double(rep.cond1_residual)
       << ", \"cond2\": " << format_double(rep.cond2_residual) << "},\n";
    os << "  \"oracle\": {\"verdict\": \"" << verdict_name(verdict)
       << "\", \"min_residual\": " << format_double(oracle.min_residual) << "},\n";
    if (distance) os << "  \"family_distance\": " << format_double(*distance) << ",\n";
    os << "  \"indeterminate\": " << (indeterminate ? "true" : "false") << ",\n";
    os << "  \"agreement\": " << (agree ? "true" : "false") << "\n";
    os << "}\n";
    return RunResult{agree ? kOk : kOracleDisagreement, os.str()};
}

}  // namespace idereg
