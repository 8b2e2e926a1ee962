#pragma once

#include "document.hpp"

#include <optional>
#include <string>
#include <vector>

namespace idereg {

// Pipeline entry points shared by the C API and the CLI. Each returns the
// report text plus the process-level status code:
//   0 ok, 2 invalid input, 3 unsolvable, 4 not regularizable, 5 oracle disagreement.
enum Status {
    kOk = 0,
    kInvalidInput = 2,
    kUnsolvable = 3,
    kNotRegularizable = 4,
    kOracleDisagreement = 5,
};

struct RunOptions {
    // document-level option overrides (flag wins over document)
    std::optional<double> rank_tol_rel;
    std::optional<double> solve_tol;
    std::optional<int> gauss_order;
    std::optional<JumpModel> jump_model;
    // solve
    std::optional<std::vector<double>> params;
    int samples = 11;
    // regularize
    bool weighted = false;
    std::optional<Matrix> weight;
    std::optional<Vector> uref;
    // verify
    int oracle_nodes = 64;
};

struct RunResult {
    int status = kOk;
    std::string report;
};

// Parse errors and validation failures surface as InvalidInput from these.
RunResult run_analyze(const std::string& document, const RunOptions& opts = {});
RunResult run_solve(const std::string& document, const RunOptions& opts = {});
RunResult run_regularize(const std::string& document, const RunOptions& opts = {});
RunResult run_verify(const std::string& document, const RunOptions& opts = {});

}  // namespace idereg
