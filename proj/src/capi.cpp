#include "idereg/idereg.h"

#include "document.hpp"
#include "runner.hpp"

#include <cstring>
#include <exception>
#include <new>
#include <string>

using namespace idereg;

struct idereg_options {
    RunOptions run;
    bool valid = true;  // sticky parse failure from the json setters
    std::string error;
};

struct idereg_result {
    int status = IDEREG_OK;
    std::string report;
    std::string error;
};

namespace {

idereg_result* run_command(const char* document_json, const idereg_options* opts,
                           RunResult (*command)(const std::string&, const RunOptions&)) {
    auto* res = new (std::nothrow) idereg_result;
    if (!res) return nullptr;
    try {
        if (!document_json) throw InvalidInput("document is null");
        RunOptions run = opts ? opts->run : RunOptions{};
        if (opts && !opts->valid) throw InvalidInput(opts->error);
        RunResult out = command(document_json, run);
        res->status = out.status;
        res->report = std::move(out.report);
    } catch (const InvalidInput& e) {
        res->status = IDEREG_INVALID_INPUT;
        res->error = e.what();
    } catch (const std::exception& e) {
        res->status = IDEREG_INTERNAL_ERROR;
        res->error = e.what();
    }
    return res;
}

}  // namespace

extern "C" {

idereg_options* idereg_options_new(void) { return new (std::nothrow) idereg_options; }

void idereg_options_free(idereg_options* opts) { delete opts; }

idereg_status idereg_options_set_double(idereg_options* opts, const char* key, double value) {
    if (!opts || !key) return IDEREG_INVALID_INPUT;
    std::string k(key);
    if (k == "rank_tol_rel")
        opts->run.rank_tol_rel = value;
    else if (k == "solve_tol")
        opts->run.solve_tol = value;
    else
        return IDEREG_INVALID_INPUT;
    return IDEREG_OK;
}

idereg_status idereg_options_set_int(idereg_options* opts, const char* key, long value) {
    if (!opts || !key) return IDEREG_INVALID_INPUT;
    std::string k(key);
    if (k == "gauss_order")
        opts->run.gauss_order = int(value);
    else if (k == "samples")
        opts->run.samples = int(value);
    else if (k == "oracle_nodes")
        opts->run.oracle_nodes = int(value);
    else
        return IDEREG_INVALID_INPUT;
    return IDEREG_OK;
}

idereg_status idereg_options_set_string(idereg_options* opts, const char* key,
                                        const char* value) {
    if (!opts || !key || !value) return IDEREG_INVALID_INPUT;
    std::string k(key), v(value);
    if (k == "jump_model") {
        if (v == "free")
            opts->run.jump_model = JumpModel::Free;
        else if (v == "none")
            opts->run.jump_model = JumpModel::None;
        else
            return IDEREG_INVALID_INPUT;
    } else if (k == "objective") {
        if (v == "minnorm")
            opts->run.weighted = false;
        else if (v == "weighted")
            opts->run.weighted = true;
        else
            return IDEREG_INVALID_INPUT;
    } else {
        return IDEREG_INVALID_INPUT;
    }
    return IDEREG_OK;
}

idereg_status idereg_options_set_params(idereg_options* opts, const double* c, size_t len) {
    if (!opts || (!c && len > 0)) return IDEREG_INVALID_INPUT;
    opts->run.params = std::vector<double>(c, c + len);
    return IDEREG_OK;
}

idereg_status idereg_options_set_weight_json(idereg_options* opts, const char* json) {
    if (!opts || !json) return IDEREG_INVALID_INPUT;
    try {
        opts->run.weight = parse_matrix_file(json);
    } catch (const std::exception& e) {
        opts->valid = false;
        opts->error = e.what();
        return IDEREG_INVALID_INPUT;
    }
    return IDEREG_OK;
}

idereg_status idereg_options_set_uref_json(idereg_options* opts, const char* json) {
    if (!opts || !json) return IDEREG_INVALID_INPUT;
    try {
        opts->run.uref = parse_vector_file(json);
    } catch (const std::exception& e) {
        opts->valid = false;
        opts->error = e.what();
        return IDEREG_INVALID_INPUT;
    }
    return IDEREG_OK;
}

idereg_result* idereg_analyze(const char* document_json, const idereg_options* opts) {
    return run_command(document_json, opts, &run_analyze);
}

idereg_result* idereg_solve(const char* document_json, const idereg_options* opts) {
    return run_command(document_json, opts, &run_solve);
}

idereg_result* idereg_regularize(const char* document_json, const idereg_options* opts) {
    return run_command(document_json, opts, &run_regularize);
}

idereg_result* idereg_verify(const char* document_json, const idereg_options* opts) {
    return run_command(document_json, opts, &run_verify);
}

int idereg_result_status(const idereg_result* res) {
    return res ? res->status : IDEREG_INTERNAL_ERROR;
}

const char* idereg_result_report(const idereg_result* res) {
    return res ? res->report.c_str() : "";
}

const char* idereg_result_error(const idereg_result* res) {
    return res ? res->error.c_str() : "result allocation failed";
}

void idereg_result_free(idereg_result* res) { delete res; }

const char* idereg_version(void) { return "idereg 1.0.0"; }

}  // extern "C"
