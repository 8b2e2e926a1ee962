#pragma once

#include "problem.hpp"

#include <string>

namespace idereg {

// Parses the JSON problem document into a validated ProblemSpec.
// Throws InvalidInput with a diagnostic on malformed or inconsistent input.
ProblemSpec parse_problem_document(const std::string& text);

// Auxiliary inputs for weighted control selection.
Matrix parse_matrix_file(const std::string& text);   // {"matrix": [[...], ...]}
Vector parse_vector_file(const std::string& text);   // {"vector": [...]}

struct AnalysisReport {
    Eigen::Index rank_D = 0, r1 = 0, d1 = 0, rank_Q = 0, r2 = 0, d2 = 0;
    double cond1 = 0.0, cond2 = 0.0;
    bool solvable = false;
    bool has_control = false;
    double criterion_residual = 0.0;
    bool regularizable = false;
    Vector u_min_norm;
    Eigen::Index control_dim = 0;
};

std::string to_json(const AnalysisReport& r);

// %.17g, the round-trippable float format used in every report.
std::string format_double(double v);
std::string json_vector(const Vector& v);
std::string json_matrix(const Matrix& m);

}  // namespace idereg
