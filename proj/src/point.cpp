#include "conespec/point.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "conespec/errors.hpp"

namespace conespec {

namespace {

void require_finite(const std::vector<double>& data) {
    for (double v : data) {
        if (!std::isfinite(v)) throw input_error("point entries must be finite");
    }
}

std::size_t expected_size(PointKind kind, int dim) {
    switch (kind) {
        case PointKind::DenseVector: return static_cast<std::size_t>(dim);
        case PointKind::SymMatrix: return static_cast<std::size_t>(dim) * (dim + 1) / 2;
        case PointKind::GridFunction: return static_cast<std::size_t>(dim) + 1;
    }
    return 0;
}

}  // namespace

Point Point::dense(std::vector<double> values) {
    if (values.empty()) throw input_error("dense point needs at least one coordinate");
    require_finite(values);
    Point p;
    p.kind = PointKind::DenseVector;
    p.dim = static_cast<int>(values.size());
    p.data = std::move(values);
    return p;
}

Point Point::sym(int n, std::vector<double> packed) {
    if (n < 1) throw input_error("symmetric matrix dimension must be positive");
    if (packed.size() != expected_size(PointKind::SymMatrix, n))
        throw input_error("packed symmetric data has wrong length for dimension " + std::to_string(n));
    require_finite(packed);
    Point p;
    p.kind = PointKind::SymMatrix;
    p.dim = n;
    p.data = std::move(packed);
    return p;
}

Point Point::sym_from_rows(const std::vector<std::vector<double>>& rows) {
    int n = static_cast<int>(rows.size());
    if (n < 1) throw input_error("empty matrix");
    std::vector<double> packed(expected_size(PointKind::SymMatrix, n));
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n) throw input_error("matrix is not square");
        for (int j = 0; j <= i; ++j) {
            if (std::abs(rows[i][j] - rows[j][i]) > 1e-12 * (1.0 + std::abs(rows[i][j])))
                throw input_error("matrix is not symmetric");
            packed[sym_packed_index(i, j)] = rows[i][j];
        }
    }
    return sym(n, std::move(packed));
}

Point Point::grid(std::vector<double> samples) {
    if (samples.size() < 2) throw input_error("grid function needs at least two samples");
    require_finite(samples);
    Point p;
    p.kind = PointKind::GridFunction;
    p.dim = static_cast<int>(samples.size()) - 1;
    p.data = std::move(samples);
    return p;
}

Point Point::zeros_like(const Point& p) {
    Point z = p;
    std::fill(z.data.begin(), z.data.end(), 0.0);
    return z;
}

bool Point::is_zero() const {
    for (double v : data)
        if (v != 0.0) return false;
    return true;
}

Point& Point::operator+=(const Point& o) {
    if (!same_space(o)) throw input_error("point arithmetic on mismatched spaces");
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
    return *this;
}

Point& Point::operator-=(const Point& o) {
    if (!same_space(o)) throw input_error("point arithmetic on mismatched spaces");
    for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
    return *this;
}

Point& Point::operator*=(double c) {
    for (double& v : data) v *= c;
    return *this;
}

double Point::euclidean_norm() const {
    double s = 0.0;
    for (double v : data) s += v * v;
    return std::sqrt(s);
}

double Point::frobenius_norm() const {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j <= i; ++j) {
            double v = data[sym_packed_index(i, j)];
            s += (i == j) ? v * v : 2.0 * v * v;
        }
    }
    return std::sqrt(s);
}

double Point::sup_norm() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::abs(v));
    return m;
}

double Point::natural_norm() const {
    switch (kind) {
        case PointKind::DenseVector: return euclidean_norm();
        case PointKind::SymMatrix: return frobenius_norm();
        case PointKind::GridFunction: return sup_norm();
    }
    return 0.0;
}

double Point::sym_at(int i, int j) const { return data[sym_packed_index(i, j)]; }
double& Point::sym_at(int i, int j) { return data[sym_packed_index(i, j)]; }

std::vector<double> Point::sym_full() const {
    std::vector<double> full(static_cast<std::size_t>(dim) * dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) full[static_cast<std::size_t>(i) * dim + j] = sym_at(i, j);
    return full;
}

double sym_trace_product(const Point& x, const Point& a) { return sym_inner(x, a); }

double grid_interpolate(const Point& grid_fn, double t) {
    if (grid_fn.kind != PointKind::GridFunction) throw input_error("grid_interpolate expects a grid function");
    const int n = grid_fn.dim;
    double s = t * n;
    int j = static_cast<int>(std::floor(s));
    j = std::clamp(j, 0, n - 1);
    double frac = std::clamp(s - j, 0.0, 1.0);
    return grid_fn.data[j] + frac * (grid_fn.data[j + 1] - grid_fn.data[j]);
}

double sym_inner(const Point& x, const Point& a) {
    if (x.kind != PointKind::SymMatrix || !x.same_space(a))
        throw input_error("sym_inner expects two symmetric matrices of equal dimension");
    double s = 0.0;
    for (int i = 0; i < x.dim; ++i) {
        for (int j = 0; j <= i; ++j) {
            double term = x.data[sym_packed_index(i, j)] * a.data[sym_packed_index(i, j)];
            s += (i == j) ? term : 2.0 * term;
        }
    }
    return s;
}

}  // namespace conespec
