#pragma once

#include <vector>

namespace conespec {

enum class PointKind { DenseVector, SymMatrix, GridFunction };

/// An element of a cone's ambient space: a dense coordinate vector, a packed
/// symmetric matrix, or a grid function sampled at t_j = j/n over [0,1].
///
/// SymMatrix stores the lower triangle row-major, n(n+1)/2 entries.
/// GridFunction stores n+1 samples; `dim` is the grid size n.
struct Point {
    PointKind kind = PointKind::DenseVector;
    int dim = 0;
    std::vector<double> data;

    static Point dense(std::vector<double> values);
    static Point sym(int n, std::vector<double> packed);
    static Point sym_from_rows(const std::vector<std::vector<double>>& rows);
    static Point grid(std::vector<double> samples);
    static Point zeros_like(const Point& p);

    bool same_space(const Point& o) const { return kind == o.kind && dim == o.dim; }
    bool is_zero() const;

    Point& operator+=(const Point& o);
    Point& operator-=(const Point& o);
    Point& operator*=(double c);
    friend Point operator+(Point a, const Point& b) { return a += b; }
    friend Point operator-(Point a, const Point& b) { return a -= b; }
    friend Point operator*(Point a, double c) { return a *= c; }
    friend Point operator*(double c, Point a) { return a *= c; }

    double euclidean_norm() const;
    double frobenius_norm() const;  // SymMatrix only
    double sup_norm() const;
    // Norm natural to the kind: l2 / Frobenius / sup.
    double natural_norm() const;

    double sym_at(int i, int j) const;
    double& sym_at(int i, int j);
    std::vector<double> sym_full() const;  // row-major n*n expansion
};

inline std::size_t sym_packed_index(int i, int j) {
    if (i < j) { int t = i; i = j; j = t; }
    return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
}

// tr(X A) for packed symmetric X, A of equal dimension.
double sym_trace_product(const Point& x, const Point& a);

// Piecewise-linear interpolation of a grid function at t in [0, 1].
double grid_interpolate(const Point& grid_fn, double t);

// Frobenius inner product <X, A>.
double sym_inner(const Point& x, const Point& a);

}  // namespace conespec
