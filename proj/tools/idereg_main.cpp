// Command-line front end; all solver access goes through the C API.
#include "idereg/idereg.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr const char* kUsage =
    "usage: idereg analyze|solve|regularize|verify <file> [flags]\n"
    "\n"
    "flags:\n"
    "  --tol-rank R          relative rank threshold override\n"
    "  --tol-solve S         solvability residual threshold override\n"
    "  --quad-order G        Gauss-Legendre order override\n"
    "  --jump-model free|none\n"
    "  --samples N           sample count for solve (default 11)\n"
    "  --params c1,c2,...    family parameters for solve (default zeros)\n"
    "  --objective minnorm|weighted\n"
    "  --weight W.json       weight matrix for the weighted objective\n"
    "  --uref u.json         reference control for the weighted objective\n"
    "  --oracle-nodes M      oracle grid nodes per subinterval (default 64)\n"
    "  --output json|csv     report format sanity check (analyze/regularize/verify\n"
    "                        emit json, solve emits csv)\n"
    "\n"
    "environment: IDEREG_LOG=off|info|debug\n"
    "exit codes: 0 ok, 2 invalid input, 3 unsolvable, 4 not regularizable,\n"
    "            5 oracle disagreement\n";

int fail_usage(const std::string& msg) {
    std::cerr << "idereg: " << msg << "\n" << kUsage;
    return IDEREG_INVALID_INPUT;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bool parse_long(const std::string& s, long& out) {
    try {
        size_t used = 0;
        out = std::stol(s, &used);
        return used == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_double(const std::string& s, double& out) {
    try {
        size_t used = 0;
        out = std::stod(s, &used);
        return used == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_params(const std::string& s, std::vector<double>& out) {
    out.clear();
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v;
        if (!parse_double(item, v)) return false;
        out.push_back(v);
    }
    return !out.empty() || s.empty();
}

struct OptionsGuard {
    idereg_options* ptr;
    explicit OptionsGuard(idereg_options* p) : ptr(p) {}
    ~OptionsGuard() { idereg_options_free(ptr); }
};

struct ResultGuard {
    idereg_result* ptr;
    explicit ResultGuard(idereg_result* p) : ptr(p) {}
    ~ResultGuard() { idereg_result_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
    if (argc >= 2 && (std::strcmp(argv[1], "--help") == 0 || std::strcmp(argv[1], "-h") == 0)) {
        std::cout << kUsage;
        return 0;
    }
    if (argc >= 2 && std::strcmp(argv[1], "--version") == 0) {
        std::cout << idereg_version() << "\n";
        return 0;
    }
    if (argc < 3) return fail_usage("expected a command and a problem file");

    const std::string command = argv[1];
    const std::string path = argv[2];
    if (command != "analyze" && command != "solve" && command != "regularize" &&
        command != "verify")
        return fail_usage("unknown command \"" + command + "\"");

    idereg_options* opts = idereg_options_new();
    if (!opts) {
        std::cerr << "idereg: out of memory\n";
        return IDEREG_INTERNAL_ERROR;
    }
    OptionsGuard opts_guard(opts);

    std::string output_format = command == "solve" ? "csv" : "json";
    for (int i = 3; i < argc; ++i) {
        const std::string flag = argv[i];
        if (i + 1 >= argc) return fail_usage("flag " + flag + " needs a value");
        const std::string value = argv[++i];
        if (flag == "--tol-rank" || flag == "--tol-solve") {
            double v;
            if (!parse_double(value, v)) return fail_usage(flag + " expects a number");
            const char* key = flag == "--tol-rank" ? "rank_tol_rel" : "solve_tol";
            if (idereg_options_set_double(opts, key, v)) return fail_usage("bad " + flag);
        } else if (flag == "--quad-order" || flag == "--samples" || flag == "--oracle-nodes") {
            long v;
            if (!parse_long(value, v)) return fail_usage(flag + " expects an integer");
            const char* key = flag == "--quad-order"    ? "gauss_order"
                              : flag == "--samples"     ? "samples"
                                                        : "oracle_nodes";
            if (idereg_options_set_int(opts, key, v)) return fail_usage("bad " + flag);
        } else if (flag == "--jump-model") {
            if (idereg_options_set_string(opts, "jump_model", value.c_str()))
                return fail_usage("--jump-model expects free or none");
        } else if (flag == "--objective") {
            if (idereg_options_set_string(opts, "objective", value.c_str()))
                return fail_usage("--objective expects minnorm or weighted");
        } else if (flag == "--params") {
            std::vector<double> c;
            if (!parse_params(value, c)) return fail_usage("--params expects c1,c2,...");
            if (idereg_options_set_params(opts, c.data(), c.size()))
                return fail_usage("bad --params");
        } else if (flag == "--weight" || flag == "--uref") {
            auto text = read_file(value);
            if (!text) return fail_usage("cannot read " + value);
            idereg_status st = flag == "--weight"
                                   ? idereg_options_set_weight_json(opts, text->c_str())
                                   : idereg_options_set_uref_json(opts, text->c_str());
            if (st) {
                std::cerr << "idereg: " << value << ": " << "invalid document\n";
                return IDEREG_INVALID_INPUT;
            }
        } else if (flag == "--output") {
            if (value != "json" && value != "csv")
                return fail_usage("--output expects json or csv");
            output_format = value;
        } else {
            return fail_usage("unknown flag \"" + flag + "\"");
        }
    }

    const std::string expected_format = command == "solve" ? "csv" : "json";
    if (output_format != expected_format)
        return fail_usage(command + " emits " + expected_format + " only");

    auto document = read_file(path);
    if (!document) {
        std::cerr << "idereg: cannot read " << path << "\n";
        return IDEREG_INVALID_INPUT;
    }

    idereg_result* res = nullptr;
    if (command == "analyze")
        res = idereg_analyze(document->c_str(), opts);
    else if (command == "solve")
        res = idereg_solve(document->c_str(), opts);
    else if (command == "regularize")
        res = idereg_regularize(document->c_str(), opts);
    else
        res = idereg_verify(document->c_str(), opts);
    if (!res) {
        std::cerr << "idereg: out of memory\n";
        return IDEREG_INTERNAL_ERROR;
    }
    ResultGuard res_guard(res);

    const char* report = idereg_result_report(res);
    const char* error = idereg_result_error(res);
    if (report[0]) std::cout << report;
    if (error[0]) std::cerr << "idereg: " << error << "\n";
    return idereg_result_status(res);
}
