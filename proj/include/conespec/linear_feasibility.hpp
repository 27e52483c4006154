#pragma once

#include <optional>
#include <vector>

namespace conespec {

enum class Relation { Eq, Ge, Le };

struct LinearConstraint {
    std::vector<double> coeffs;
    Relation rel = Relation::Eq;
    double rhs = 0.0;
};

/// Phase-1 simplex over free variables x in R^n (internally split into
/// nonnegative parts). Returns a feasible point, or nullopt if the system
/// is infeasible. Bland's rule, so it terminates deterministically.
std::optional<std::vector<double>> feasible_point(int n, const std::vector<LinearConstraint>& constraints);

// Rank of a set of row vectors by Gaussian elimination with partial pivoting.
int row_rank(std::vector<std::vector<double>> rows, double tol = 1e-10);

}  // namespace conespec
