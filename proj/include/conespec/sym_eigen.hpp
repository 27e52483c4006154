#pragma once

#include <vector>

#include "conespec/point.hpp"

namespace conespec {

struct SymEigenResult {
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // column-major n*n; column k pairs with values[k]
    int dim = 0;

    double vec(int row, int col) const { return vectors[static_cast<std::size_t>(col) * dim + row]; }
};

// Cyclic Jacobi rotations on the packed symmetric matrix. Deterministic sweep
// order, so repeated runs produce identical output.
SymEigenResult sym_eigen(const Point& m);

double sym_min_eigenvalue(const Point& m);
double sym_max_eigenvalue(const Point& m);

/// Loewner square root of a PSD matrix. Eigenvalues in [-tol', tol'] with
/// tol' = tol*(1+||M||_F) are clamped to zero; anything below -tol' is a
/// domain_error. Guarantees ||S*S - M||_inf <= 10*tol*(1+||M||).
Point sym_sqrt(const Point& m, double tol = 1e-9);

// V f(D) V^T for the given eigendecomposition and spectral function values.
Point sym_from_eigen(const SymEigenResult& eig, const std::vector<double>& spectral_values);

}  // namespace conespec
