#include "conespec/sym_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "conespec/errors.hpp"

namespace conespec {

namespace {

double off_diagonal_sq(const std::vector<double>& a, int n) {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) s += a[static_cast<std::size_t>(p) * n + q] * a[static_cast<std::size_t>(p) * n + q];
    return s;
}

}  // namespace

SymEigenResult sym_eigen(const Point& m) {
    if (m.kind != PointKind::SymMatrix) throw input_error("sym_eigen expects a symmetric matrix point");
    const int n = m.dim;
    std::vector<double> a = m.sym_full();
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;

    auto at = [&](std::vector<double>& mat, int i, int j) -> double& {
        return mat[static_cast<std::size_t>(i) * n + j];
    };

    double diag_sq = 0.0;
    for (int i = 0; i < n; ++i) diag_sq += at(a, i, i) * at(a, i, i);
    const double stop = 1e-30 * std::max(diag_sq, 1e-300);

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_sq(a, n) <= stop) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = at(a, p, q);
                if (std::abs(apq) <= 1e-300) continue;
                double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
                double t = ((theta >= 0) ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                double tau = s / (1.0 + c);

                double app = at(a, p, p), aqq = at(a, q, q);
                at(a, p, p) = app - t * apq;
                at(a, q, q) = aqq + t * apq;
                at(a, p, q) = 0.0;
                at(a, q, p) = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        double arp = at(a, r, p), arq = at(a, r, q);
                        at(a, r, p) = at(a, p, r) = arp - s * (arq + tau * arp);
                        at(a, r, q) = at(a, q, r) = arq + s * (arp - tau * arq);
                    }
                    double vrp = at(v, r, p), vrq = at(v, r, q);
                    at(v, r, p) = vrp - s * (vrq + tau * vrp);
                    at(v, r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    SymEigenResult out;
    out.dim = n;
    out.values.resize(n);
    for (int i = 0; i < n; ++i) out.values[i] = at(a, i, i);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return out.values[i] < out.values[j]; });

    std::vector<double> sorted_vals(n);
    out.vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int k = 0; k < n; ++k) {
        sorted_vals[k] = out.values[order[k]];
        for (int r = 0; r < n; ++r) out.vectors[static_cast<std::size_t>(k) * n + r] = at(v, r, order[k]);
    }
    out.values = std::move(sorted_vals);
    return out;
}

double sym_min_eigenvalue(const Point& m) { return sym_eigen(m).values.front(); }
double sym_max_eigenvalue(const Point& m) { return sym_eigen(m).values.back(); }

Point sym_from_eigen(const SymEigenResult& eig, const std::vector<double>& spectral_values) {
    const int n = eig.dim;
    if (static_cast<int>(spectral_values.size()) != n)
        throw input_error("spectral value count must match dimension");
    std::vector<double> packed(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
    for (int k = 0; k < n; ++k) {
        double w = spectral_values[k];
        if (w == 0.0) continue;
        for (int i = 0; i < n; ++i) {
            double vi = eig.vec(i, k) * w;
            for (int j = 0; j <= i; ++j) packed[sym_packed_index(i, j)] += vi * eig.vec(j, k);
        }
    }
    return Point::sym(n, std::move(packed));
}

Point sym_sqrt(const Point& m, double tol) {
    if (m.kind != PointKind::SymMatrix) throw input_error("sym_sqrt expects a symmetric matrix point");
    SymEigenResult eig = sym_eigen(m);
    // Relative clamp: the decision which eigenvalues count as zero must be
    // scale-invariant, or the square root loses homogeneity near the clamp.
    const double clamp = tol * m.frobenius_norm();
    std::vector<double> roots(eig.values.size());
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
        double lam = eig.values[k];
        if (lam < -clamp)
            throw domain_error("matrix is not positive semidefinite (eigenvalue " + std::to_string(lam) + ")");
        roots[k] = (lam <= clamp) ? 0.0 : std::sqrt(lam);
    }
    return sym_from_eigen(eig, roots);
}

}  // namespace conespec
