#pragma once

#include "problem.hpp"
#include "solver.hpp"

#include <optional>

namespace idereg {

// The oracle discretizes the problem directly (per-subinterval grids, finite
// differences, end-corrected trapezoid weights) and never touches the AlgebraicCore, so its
// verdicts are independent of the algebraic reduction.
struct OracleConfig {
    int nodes_per_subinterval = 64;
    double residual_tol = 1e-6;
    double margin_band = 10.0;  // unsolvable above margin_band * residual_tol
    double ridge = 1e-9;        // penalty weight excluding huge-norm grid artifacts

    void validate() const {
        if (nodes_per_subinterval < 8) throw InvalidInput("oracle needs at least 8 nodes per subinterval");
        if (!(residual_tol > 0.0) || !(margin_band > 1.0) || !(ridge >= 0.0))
            throw InvalidInput("invalid oracle configuration");
    }
};

// Sampled solution: one uniform grid per impulse subinterval, endpoints
// included, so values at an impulse instant appear twice (left then right).
struct OracleGrid {
    std::vector<std::vector<double>> ts;  // per block
    std::vector<Matrix> values;           // per block, n x nodes
};

struct OracleSolution {
    double min_residual;
    OracleGrid grid;
};

enum class OracleVerdict { Solvable, Unsolvable, Indeterminate };

OracleSolution oracle_solve(const ProblemSpec& p, const Vector& delta,
                            const std::optional<Vector>& u, const OracleConfig& cfg = {});

OracleVerdict oracle_solvable(const ProblemSpec& p, const Vector& delta,
                              const std::optional<Vector>& u, const OracleConfig& cfg = {});

// Min over the family parameter (least squares) of the max-node distance
// between a family member and the oracle grid.
double family_distance(const SolutionFamily& fam, const OracleGrid& grid);

}  // namespace idereg
