#include "document.hpp"

#include <Eigen/QR>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <sstream>
#include <variant>

namespace idereg {

namespace {

// Minimal JSON reader: objects, arrays, numbers, strings, booleans, null.
struct JsonValue;
using JsonObject = std::map<std::string, JsonValue>;
using JsonArray = std::vector<JsonValue>;

struct JsonValue {
    std::variant<std::nullptr_t, bool, double, std::string, JsonArray,
                 std::shared_ptr<JsonObject>>
        data = nullptr;

    bool is_object() const { return std::holds_alternative<std::shared_ptr<JsonObject>>(data); }
    bool is_array() const { return std::holds_alternative<JsonArray>(data); }
    bool is_number() const { return std::holds_alternative<double>(data); }
    bool is_string() const { return std::holds_alternative<std::string>(data); }
};

class JsonParser {
public:
    explicit JsonParser(const std::string& text) : text_(text) {}

    JsonValue parse() {
        JsonValue v = value();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing content");
        return v;
    }

private:
    const std::string& text_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        size_t line = 1;
        for (size_t i = 0; i < pos_ && i < text_.size(); ++i)
            if (text_[i] == '\n') ++line;
        std::ostringstream os;
        os << "json error at line " << line << ": " << what;
        throw InvalidInput(os.str());
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        return text_[pos_];
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    JsonValue value() {
        switch (peek()) {
            case '{': return object();
            case '[': return array();
            case '"': return JsonValue{string()};
            case 't': literal("true"); return JsonValue{true};
            case 'f': literal("false"); return JsonValue{false};
            case 'n': literal("null"); return JsonValue{nullptr};
            default: return number();
        }
    }

    void literal(const char* word) {
        skip_ws();
        for (const char* c = word; *c; ++c, ++pos_)
            if (pos_ >= text_.size() || text_[pos_] != *c) fail("bad literal");
    }

    std::string string() {
        expect('"');
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            char c = text_[pos_++];
            if (c == '\\') {
                if (pos_ >= text_.size()) fail("bad escape");
                char e = text_[pos_++];
                switch (e) {
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    case '/': out += '/'; break;
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case 'r': out += '\r'; break;
                    default: fail("unsupported escape");
                }
            } else {
                out += c;
            }
        }
        if (pos_ >= text_.size()) fail("unterminated string");
        ++pos_;
        return out;
    }

    JsonValue number() {
        skip_ws();
        size_t end = pos_;
        while (end < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '-' ||
                text_[end] == '+' || text_[end] == '.' || text_[end] == 'e' || text_[end] == 'E'))
            ++end;
        if (end == pos_) fail("expected a value");
        try {
            size_t used = 0;
            double v = std::stod(text_.substr(pos_, end - pos_), &used);
            if (used != end - pos_) fail("malformed number");
            pos_ = end;
            return JsonValue{v};
        } catch (const std::logic_error&) {
            fail("malformed number");
        }
    }

    JsonValue array() {
        expect('[');
        JsonArray out;
        if (peek() == ']') {
            ++pos_;
            return JsonValue{std::move(out)};
        }
        while (true) {
            out.push_back(value());
            char c = peek();
            ++pos_;
            if (c == ']') return JsonValue{std::move(out)};
            if (c != ',') fail("expected ',' or ']'");
        }
    }

    JsonValue object() {
        expect('{');
        auto out = std::make_shared<JsonObject>();
        if (peek() == '}') {
            ++pos_;
            return JsonValue{std::move(out)};
        }
        while (true) {
            std::string key = string();
            expect(':');
            (*out)[key] = value();
            char c = peek();
            ++pos_;
            if (c == '}') return JsonValue{std::move(out)};
            if (c != ',') fail("expected ',' or '}'");
        }
    }
};

const JsonObject& as_object(const JsonValue& v, const std::string& where) {
    if (!v.is_object()) throw InvalidInput(where + ": expected an object");
    return *std::get<std::shared_ptr<JsonObject>>(v.data);
}

const JsonArray& as_array(const JsonValue& v, const std::string& where) {
    if (!v.is_array()) throw InvalidInput(where + ": expected an array");
    return std::get<JsonArray>(v.data);
}

double as_number(const JsonValue& v, const std::string& where) {
    if (!v.is_number()) throw InvalidInput(where + ": expected a number");
    return std::get<double>(v.data);
}

const std::string& as_string(const JsonValue& v, const std::string& where) {
    if (!v.is_string()) throw InvalidInput(where + ": expected a string");
    return std::get<std::string>(v.data);
}

const JsonValue& field(const JsonObject& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw InvalidInput(where + ": missing field \"" + key + "\"");
    return it->second;
}

const JsonValue* optional_field(const JsonObject& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &it->second;
}

Eigen::Index as_index(const JsonValue& v, const std::string& where) {
    double d = as_number(v, where);
    if (d < 0 || d != std::floor(d)) throw InvalidInput(where + ": expected a non-negative integer");
    return Eigen::Index(d);
}

std::vector<double> number_list(const JsonValue& v, const std::string& where) {
    std::vector<double> out;
    for (const auto& e : as_array(v, where)) out.push_back(as_number(e, where));
    return out;
}

Matrix parse_matrix(const JsonValue& v, const std::string& where) {
    const JsonArray& rows = as_array(v, where);
    if (rows.empty()) throw InvalidInput(where + ": matrix needs at least one row");
    std::vector<std::vector<double>> vals;
    for (const auto& row : rows) vals.push_back(number_list(row, where));
    Matrix out(Eigen::Index(vals.size()), Eigen::Index(vals[0].size()));
    for (size_t i = 0; i < vals.size(); ++i) {
        if (vals[i].size() != vals[0].size()) throw InvalidInput(where + ": ragged matrix rows");
        for (size_t j = 0; j < vals[i].size(); ++j) out(Eigen::Index(i), Eigen::Index(j)) = vals[i][j];
    }
    return out;
}

Vector parse_vector(const JsonValue& v, const std::string& where) {
    std::vector<double> vals = number_list(v, where);
    Vector out(Eigen::Index(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i) out(Eigen::Index(i)) = vals[i];
    return out;
}

// One piece of a "poly" matrix: entry (i, j) is a coefficient list ascending in t.
PiecewiseMatrixFunction::PolyMatrix parse_poly_piece(const JsonValue& v, Eigen::Index rows,
                                                     Eigen::Index cols, const std::string& where) {
    const JsonArray& rs = as_array(v, where);
    if (Eigen::Index(rs.size()) != rows)
        throw InvalidInput(where + ": wrong number of coefficient rows");
    PiecewiseMatrixFunction::PolyMatrix piece(rows, std::vector<Poly>(cols));
    for (Eigen::Index i = 0; i < rows; ++i) {
        const JsonArray& cs = as_array(rs[size_t(i)], where);
        if (Eigen::Index(cs.size()) != cols)
            throw InvalidInput(where + ": wrong number of coefficient columns");
        for (Eigen::Index j = 0; j < cols; ++j) {
            piece[i][j] = number_list(cs[size_t(j)], where);
            if (piece[i][j].empty()) piece[i][j] = {0.0};
        }
    }
    return piece;
}

// Least-squares polynomial fit of the given degree through (ts, ys).
Poly fit_poly(const std::vector<double>& ts, const Vector& ys, int degree,
              const std::string& where) {
    if (ts.size() <= size_t(degree))
        throw InvalidInput(where + ": grid needs more nodes than the fit degree");
    Matrix vand(Eigen::Index(ts.size()), degree + 1);
    for (size_t i = 0; i < ts.size(); ++i) {
        double pw = 1.0;
        for (int d = 0; d <= degree; ++d) {
            vand(Eigen::Index(i), d) = pw;
            pw *= ts[i];
        }
    }
    Vector c = vand.colPivHouseholderQr().solve(ys);
    return Poly(c.data(), c.data() + c.size());
}

PiecewiseMatrixFunction parse_matrix_function(const JsonValue& v, double a, double b,
                                              Eigen::Index rows, Eigen::Index cols,
                                              const std::string& where) {
    const JsonObject& obj = as_object(v, where);
    const std::string& kind = as_string(field(obj, "kind", where), where);
    if (kind == "poly") {
        const JsonValue& coeffs = field(obj, "coeffs", where);
        std::vector<double> bps;
        if (const JsonValue* bpv = optional_field(obj, "breakpoints"))
            bps = number_list(*bpv, where);
        if (bps.empty())
            return PiecewiseMatrixFunction(a, b, {},
                                           {parse_poly_piece(coeffs, rows, cols, where)});
        // with breakpoints, coeffs holds one entry grid per piece
        const JsonArray& pieces_json = as_array(coeffs, where);
        if (pieces_json.size() != bps.size() + 1)
            throw InvalidInput(where + ": need one coefficient grid per piece");
        std::vector<PiecewiseMatrixFunction::PolyMatrix> pieces;
        for (const auto& pj : pieces_json) pieces.push_back(parse_poly_piece(pj, rows, cols, where));
        return PiecewiseMatrixFunction(a, b, bps, std::move(pieces));
    }
    if (kind == "grid") {
        std::vector<double> ts = number_list(field(obj, "ts", where), where);
        const JsonArray& samples = as_array(field(obj, "values", where), where);
        if (samples.size() != ts.size())
            throw InvalidInput(where + ": one sample matrix per grid node required");
        int degree = 6;
        if (const JsonValue* dv = optional_field(obj, "fit_degree"))
            degree = int(as_index(*dv, where));
        std::vector<Matrix> mats;
        for (const auto& s : samples) {
            mats.push_back(parse_matrix(s, where));
            if (mats.back().rows() != rows || mats.back().cols() != cols)
                throw InvalidInput(where + ": sample matrix has the wrong shape");
        }
        PiecewiseMatrixFunction::PolyMatrix piece(rows, std::vector<Poly>(cols));
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) {
                Vector ys(Eigen::Index(ts.size()));
                for (size_t k = 0; k < ts.size(); ++k) ys(Eigen::Index(k)) = mats[k](i, j);
                piece[i][j] = fit_poly(ts, ys, degree, where);
            }
        return PiecewiseMatrixFunction(a, b, {}, {std::move(piece)});
    }
    throw InvalidInput(where + ": unknown matrix-function kind \"" + kind + "\"");
}

BivariateKernel parse_kernel(const JsonValue& v, double a, double b, Eigen::Index n,
                             const std::string& where) {
    const JsonObject& obj = as_object(v, where);
    const std::string& kind = as_string(field(obj, "kind", where), where);
    if (kind != "poly2") throw InvalidInput(where + ": kernel kind must be \"poly2\"");
    const JsonArray& rs = as_array(field(obj, "coeffs", where), where);
    if (Eigen::Index(rs.size()) != n) throw InvalidInput(where + ": wrong kernel row count");
    std::vector<std::vector<BivariateKernel::CoeffGrid>> entries(
        size_t(n), std::vector<BivariateKernel::CoeffGrid>(size_t(n), BivariateKernel::CoeffGrid{}));
    for (Eigen::Index i = 0; i < n; ++i) {
        const JsonArray& cs = as_array(rs[size_t(i)], where);
        if (Eigen::Index(cs.size()) != n) throw InvalidInput(where + ": wrong kernel column count");
        for (Eigen::Index j = 0; j < n; ++j) {
            BivariateKernel::CoeffGrid grid;
            for (const auto& row : as_array(cs[size_t(j)], where))
                grid.push_back(number_list(row, where));
            if (grid.empty()) grid = {{0.0}};
            entries[size_t(i)][size_t(j)] = std::move(grid);
        }
    }
    return BivariateKernel(a, b, n, n, std::move(entries));
}

Side parse_side(const std::string& s, const std::string& where) {
    if (s == "left") return Side::Left;
    if (s == "right") return Side::Right;
    throw InvalidInput(where + ": side must be \"left\" or \"right\"");
}

}  // namespace

ProblemSpec parse_problem_document(const std::string& text) {
    JsonValue root = JsonParser(text).parse();
    const JsonObject& doc = as_object(root, "document");

    std::vector<double> interval = number_list(field(doc, "interval", "interval"), "interval");
    if (interval.size() != 2) throw InvalidInput("interval: expected [a, b]");
    const double a = interval[0], b = interval[1];
    const Eigen::Index m = as_index(field(doc, "m", "m"), "m");
    const Eigen::Index n = as_index(field(doc, "n", "n"), "n");
    if (m < 1 || n < 1) throw InvalidInput("dimensions must be positive");

    PiecewiseMatrixFunction A = parse_matrix_function(field(doc, "A", "A"), a, b, m, n, "A");
    PiecewiseMatrixFunction B = parse_matrix_function(field(doc, "B", "B"), a, b, m, n, "B");
    PiecewiseMatrixFunction Phi =
        parse_matrix_function(field(doc, "Phi", "Phi"), a, b, n, m, "Phi");
    PiecewiseMatrixFunction f = parse_matrix_function(field(doc, "f", "f"), a, b, n, 1, "f");

    ToleranceConfig tol;
    QuadratureConfig quad;
    JumpModel jump_model = JumpModel::Free;
    if (const JsonValue* ov = optional_field(doc, "options")) {
        const JsonObject& opts = as_object(*ov, "options");
        if (const JsonValue* jv = optional_field(opts, "jump_model")) {
            const std::string& s = as_string(*jv, "options.jump_model");
            if (s == "free")
                jump_model = JumpModel::Free;
            else if (s == "none")
                jump_model = JumpModel::None;
            else
                throw InvalidInput("options.jump_model must be \"free\" or \"none\"");
        }
        if (const JsonValue* gv = optional_field(opts, "gauss_order"))
            quad.gauss_order = int(as_index(*gv, "options.gauss_order"));
        if (const JsonValue* rv = optional_field(opts, "rank_tol_rel"))
            tol.rank_tol_rel = as_number(*rv, "options.rank_tol_rel");
        if (const JsonValue* sv = optional_field(opts, "solve_tol"))
            tol.solve_tol = as_number(*sv, "options.solve_tol");
    }

    std::vector<ImpulseRecord> impulses;
    std::vector<double> taus;
    if (const JsonValue* iv = optional_field(doc, "impulses")) {
        for (const auto& rec : as_array(*iv, "impulses")) {
            const JsonObject& io = as_object(rec, "impulses[]");
            const double tau = as_number(field(io, "tau", "impulses[]"), "impulses[].tau");
            Matrix e = parse_matrix(field(io, "E", "impulses[]"), "impulses[].E");
            Matrix s = parse_matrix(field(io, "S", "impulses[]"), "impulses[].S");
            Vector gamma = parse_vector(field(io, "gamma", "impulses[]"), "impulses[].gamma");
            if (e.cols() != n || s.rows() != e.rows() || s.cols() != n ||
                gamma.size() != e.rows())
                throw InvalidInput("impulses[]: inconsistent shapes");
            impulses.emplace_back(tau, std::move(e), std::move(s), std::move(gamma), tol);
            taus.push_back(tau);
        }
    }

    const JsonObject& func = as_object(field(doc, "functional", "functional"), "functional");
    Vector alpha = parse_vector(field(doc, "alpha", "alpha"), "alpha");
    const Eigen::Index q = alpha.size();
    std::vector<PointTerm> terms;
    if (const JsonValue* pv = optional_field(func, "points")) {
        for (const auto& pt : as_array(*pv, "functional.points")) {
            const JsonObject& po = as_object(pt, "functional.points[]");
            const double t = as_number(field(po, "t", "functional.points[]"),
                                       "functional.points[].t");
            Matrix coeff = parse_matrix(field(po, "matrix", "functional.points[]"),
                                        "functional.points[].matrix");
            if (coeff.rows() != q || coeff.cols() != n)
                throw InvalidInput("functional.points[]: matrix must be q x n");
            Side side = Side::Right;
            if (const JsonValue* sv = optional_field(po, "side")) {
                side = parse_side(as_string(*sv, "functional.points[].side"),
                                  "functional.points[].side");
            } else {
                // a point term exactly at an impulse instant is ambiguous without a side
                for (double tau : taus)
                    if (t == tau)
                        throw InvalidInput(
                            "functional.points[]: a point term at an impulse instant needs an "
                            "explicit side");
                if (t == b) side = Side::Left;
            }
            terms.push_back({t, side, std::move(coeff)});
        }
    }
    std::optional<PiecewiseMatrixFunction> weight;
    if (const JsonValue* wv = optional_field(func, "integral"))
        weight = parse_matrix_function(*wv, a, b, q, n, "functional.integral");
    LinearVectorFunctional ell(a, b, q, n, std::move(terms), std::move(weight));

    std::optional<BivariateKernel> kernel;
    if (const JsonValue* kv = optional_field(doc, "K"))
        kernel = parse_kernel(*kv, a, b, n, "K");

    ProblemSpec spec{a,
                     b,
                     m,
                     n,
                     std::move(A),
                     std::move(B),
                     std::move(Phi),
                     std::move(f),
                     std::move(impulses),
                     std::move(ell),
                     std::move(alpha),
                     std::move(kernel),
                     jump_model,
                     tol,
                     quad};
    spec.validate();
    return spec;
}

Matrix parse_matrix_file(const std::string& text) {
    JsonValue root = JsonParser(text).parse();
    return parse_matrix(field(as_object(root, "document"), "matrix", "matrix"), "matrix");
}

Vector parse_vector_file(const std::string& text) {
    JsonValue root = JsonParser(text).parse();
    return parse_vector(field(as_object(root, "document"), "vector", "vector"), "vector");
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string json_vector(const Vector& v) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_double(v(i));
    }
    return out + "]";
}

std::string json_matrix(const Matrix& m) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (i) out += ", ";
        out += json_vector(m.row(i).transpose());
    }
    return out + "]";
}

std::string to_json(const AnalysisReport& r) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"ranks\": {\"rank_D\": " << r.rank_D << ", \"r1\": " << r.r1
       << ", \"d1\": " << r.d1 << ", \"rank_Q\": " << r.rank_Q << ", \"r2\": " << r.r2
       << ", \"d2\": " << r.d2 << "},\n";
    os << "  \"residuals\": {\"cond1\": " << format_double(r.cond1)
       << ", \"cond2\": " << format_double(r.cond2) << "},\n";
    os << "  \"solvable\": " << (r.solvable ? "true" : "false");
    if (r.has_control) {
        os << ",\n  \"control\": {\"criterion_residual\": "
           << format_double(r.criterion_residual)
           << ", \"regularizable\": " << (r.regularizable ? "true" : "false");
        if (r.regularizable)
            os << ", \"u_min_norm\": " << json_vector(r.u_min_norm)
               << ", \"control_dim\": " << r.control_dim;
        os << "}";
    }
    os << "\n}\n";
    return os.str();
}

}  // namespace idereg
