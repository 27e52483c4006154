#include "conespec/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "conespec/errors.hpp"
#include "conespec/linear_feasibility.hpp"
#include "conespec/rng.hpp"
#include "conespec/sym_eigen.hpp"

namespace conespec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Coordinates/functional values below kZeroRel * scale count as zero in
// domination ratios. Part witnesses sit at >= 1e-7 * scale, so the regimes
// stay separated.
constexpr double kZeroRel = 1e-11;

double row_dot(const std::vector<double>& row, const Point& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) s += row[i] * x.data[i];
    return s;
}

double row_norm(const std::vector<double>& row) {
    double s = 0.0;
    for (double v : row) s += v * v;
    return std::sqrt(s);
}

void require_kind(const ConeDescriptor& cone, const Point& x, const char* op) {
    if (x.kind != cone.point_kind() || x.dim != cone.dim())
        throw input_error(std::string(op) + ": point kind/dimension does not match the cone");
}

// Largest power of two <= |v|'s magnitude scale; dividing by it is exact.
double pow2_scale(double v) {
    if (v <= 0.0 || !std::isfinite(v)) return 1.0;
    int e = 0;
    std::frexp(v, &e);
    return std::ldexp(1.0, e - 1);
}

// Lorentz quadratic form J(z) = z_n^2 - sum z_i^2 and bilinear B(x,y).
double lorentz_q(const Point& z) {
    double s = z.data.back() * z.data.back();
    for (std::size_t i = 0; i + 1 < z.data.size(); ++i) s -= z.data[i] * z.data[i];
    return s;
}

double lorentz_b(const Point& x, const Point& y) {
    double s = x.data.back() * y.data.back();
    for (std::size_t i = 0; i + 1 < x.data.size(); ++i) s -= x.data[i] * y.data[i];
    return s;
}

double lorentz_bar_norm(const Point& z) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < z.data.size(); ++i) s += z.data[i] * z.data[i];
    return std::sqrt(s);
}

// M(x/y) for cones whose order is coordinatewise over the given functional
// values. `skip_first` drops the pinned v_0 = 0 node of grid functions.
double ratio_from_values(const std::vector<double>& vx, const std::vector<double>& vy,
                         double scale_x, double scale_y, bool skip_first) {
    const double zx = kZeroRel * std::max(scale_x, 1e-300);
    const double zy = kZeroRel * std::max(scale_y, 1e-300);
    double best = 0.0;
    bool any = false;
    for (std::size_t i = skip_first ? 1 : 0; i < vx.size(); ++i) {
        if (vy[i] > zy) {
            best = std::max(best, vx[i] / vy[i]);
            any = true;
        } else if (vx[i] > zx) {
            return kInf;
        }
    }
    return any ? std::max(best, 0.0) : 0.0;
}

double psd_ratio(const Point& x, const Point& y) {
    const double ny = y.frobenius_norm();
    const double nx = x.frobenius_norm();
    if (nx == 0.0) return 0.0;
    if (ny == 0.0) return kInf;
    SymEigenResult ye = sym_eigen(y);
    if (ye.values.front() > 1e-10 * ny) {
        // interior denominator: largest eigenvalue of y^{-1/2} x y^{-1/2}
        std::vector<double> inv_roots(ye.values.size());
        for (std::size_t k = 0; k < ye.values.size(); ++k) inv_roots[k] = 1.0 / std::sqrt(ye.values[k]);
        Point w = sym_from_eigen(ye, inv_roots);
        // c = w * x * w
        const int n = x.dim;
        std::vector<double> xf = x.sym_full();
        std::vector<double> wf = w.sym_full();
        std::vector<double> t(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                double wik = wf[static_cast<std::size_t>(i) * n + k];
                if (wik == 0.0) continue;
                for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(i) * n + j] += wik * xf[static_cast<std::size_t>(k) * n + j];
            }
        std::vector<double> packed(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += t[static_cast<std::size_t>(i) * n + k] * wf[static_cast<std::size_t>(k) * n + j];
                packed[sym_packed_index(i, j)] = s;
            }
        return std::max(0.0, sym_eigen(Point::sym(n, std::move(packed))).values.back());
    }
    // Boundary denominator: only scalar multiples are dominated (part detection
    // over general PSD faces is out of scope).
    double alpha = sym_inner(x, y) / (ny * ny);
    Point r = x - alpha * y;
    if (alpha >= -1e-12 && r.frobenius_norm() <= 1e-9 * (nx + ny)) return std::max(alpha, 0.0);
    return kInf;
}

double lorentz_ratio(const Point& x, const Point& y) {
    double nx = x.euclidean_norm();
    double ny = y.euclidean_norm();
    if (nx == 0.0) return 0.0;
    if (ny == 0.0) return kInf;
    // Exact power-of-two prescaling keeps the quadratic well ranged.
    double sx = pow2_scale(nx), sy = pow2_scale(ny);
    Point xs = x * (1.0 / sx);
    Point ys = y * (1.0 / sy);
    double jy = lorentz_q(ys);
    double jx = lorentz_q(xs);
    double b = lorentz_b(xs, ys);
    double rescale = sx / sy;
    if (jy > 1e-11) {
        double disc = std::max(0.0, b * b - jx * jy);
        return std::max(0.0, (b + std::sqrt(disc)) / jy) * rescale;
    }
    // y on the boundary: its face is a ray, so x must be proportional to y.
    double alpha = 0.0;
    for (std::size_t i = 0; i < xs.data.size(); ++i) alpha += xs.data[i] * ys.data[i];
    double yy = 0.0;
    for (double v : ys.data) yy += v * v;
    alpha /= yy;
    Point r = xs - alpha * ys;
    if (alpha >= -1e-12 && r.euclidean_norm() <= 1e-9 * (xs.euclidean_norm() + 1.0))
        return std::max(alpha, 0.0) * rescale;
    return kInf;
}

}  // namespace

ConeDescriptor ConeDescriptor::orthant(int n) {
    if (n < 1) throw input_error("orthant dimension must be positive");
    ConeDescriptor c;
    c.kind_ = ConeKind::Orthant;
    c.dim_ = n;
    c.facets_.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) c.facets_[i][i] = 1.0;
    c.interior_witness_ = Point::dense(std::vector<double>(n, 1.0));
    return c;
}

ConeDescriptor ConeDescriptor::lorentz(int n) {
    if (n < 2) throw input_error("lorentz cone needs dimension >= 2");
    ConeDescriptor c;
    c.kind_ = ConeKind::Lorentz;
    c.dim_ = n;
    std::vector<double> apex(n, 0.0);
    apex.back() = 1.0;
    c.interior_witness_ = Point::dense(std::move(apex));
    return c;
}

ConeDescriptor ConeDescriptor::psd(int n) {
    if (n < 1) throw input_error("psd cone dimension must be positive");
    ConeDescriptor c;
    c.kind_ = ConeKind::Psd;
    c.dim_ = n;
    std::vector<double> id(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
    for (int i = 0; i < n; ++i) id[sym_packed_index(i, i)] = 1.0;
    c.interior_witness_ = Point::sym(n, std::move(id));
    return c;
}

ConeDescriptor ConeDescriptor::grid_convex(int grid_n) {
    if (grid_n < 2) throw input_error("grid size must be at least 2");
    ConeDescriptor c;
    c.kind_ = ConeKind::GridConvex;
    c.dim_ = grid_n;
    std::vector<double> ramp(grid_n + 1);
    for (int j = 0; j <= grid_n; ++j) ramp[j] = static_cast<double>(j) / grid_n;
    c.interior_witness_ = Point::grid(std::move(ramp));
    return c;
}

ConeDescriptor ConeDescriptor::polyhedral(std::vector<std::vector<double>> facets,
                                          std::vector<std::vector<double>> span_basis) {
    if (facets.empty()) throw input_error("polyhedral cone needs at least one facet functional");
    const int n = static_cast<int>(facets[0].size());
    for (const auto& row : facets) {
        if (static_cast<int>(row.size()) != n) throw input_error("facet rows must share one width");
        if (row_norm(row) <= 0.0) throw input_error("zero facet functional");
    }
    for (std::size_t i = 0; i < facets.size(); ++i) {
        for (std::size_t j = i + 1; j < facets.size(); ++j) {
            double dot = 0.0;
            for (int k = 0; k < n; ++k) dot += facets[i][k] * facets[j][k];
            double ni = row_norm(facets[i]), nj = row_norm(facets[j]);
            if (std::abs(std::abs(dot) - ni * nj) <= 1e-12 * ni * nj)
                throw input_error("facet functionals must be pairwise non-proportional");
        }
    }

    // Pointedness: the facet functionals restricted to the span must have a
    // trivial common kernel.
    int span_dim = n;
    std::vector<std::vector<double>> rows = facets;
    if (!span_basis.empty()) {
        span_dim = static_cast<int>(span_basis.size());
        for (const auto& b : span_basis)
            if (static_cast<int>(b.size()) != n) throw input_error("span basis width mismatch");
        rows.assign(facets.size(), std::vector<double>(span_dim, 0.0));
        for (std::size_t i = 0; i < facets.size(); ++i)
            for (int d = 0; d < span_dim; ++d) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += facets[i][k] * span_basis[d][k];
                rows[i][d] = s;
            }
    }
    if (row_rank(rows) < span_dim)
        throw input_error("facets do not define a pointed cone (the lineality space is nontrivial)");

    ConeDescriptor c;
    c.kind_ = ConeKind::Polyhedral;
    c.dim_ = n;
    c.facets_ = std::move(facets);
    c.span_basis_ = std::move(span_basis);

    // Reduced-variable feasibility: x = B z when a span basis is present.
    auto lift = [&](const std::vector<double>& z) {
        if (c.span_basis_.empty()) return z;
        std::vector<double> x(n, 0.0);
        for (std::size_t d = 0; d < c.span_basis_.size(); ++d)
            for (int k = 0; k < n; ++k) x[k] += z[d] * c.span_basis_[d][k];
        return x;
    };
    auto normalize_pow2 = [](std::vector<double> v) {
        double mx = 0.0;
        for (double e : v) mx = std::max(mx, std::abs(e));
        double s = pow2_scale(mx);
        if (s > 1.0)
            for (double& e : v) e /= s;
        return v;
    };

    const int nf = static_cast<int>(c.facets_.size());
    std::vector<LinearConstraint> cs;
    for (int i = 0; i < nf; ++i) cs.push_back({rows[i], Relation::Ge, 1.0});
    for (int i = 0; i < nf; ++i) cs.push_back({rows[i], Relation::Le, 1e6});
    if (auto z = feasible_point(span_dim, cs)) c.interior_witness_ = Point::dense(normalize_pow2(lift(*z)));

    for (int i = 0; i < nf; ++i) {
        std::vector<LinearConstraint> fc;
        fc.push_back({rows[i], Relation::Eq, 0.0});
        for (int j = 0; j < nf; ++j) {
            if (j == i) continue;
            fc.push_back({rows[j], Relation::Ge, 1.0});
            fc.push_back({rows[j], Relation::Le, 1e6});
        }
        if (auto z = feasible_point(span_dim, fc))
            c.facet_witnesses_.push_back(Point::dense(normalize_pow2(lift(*z))));
    }
    return c;
}

ConeDescriptor ConeDescriptor::square_cone() {
    return polyhedral({{-1.0, 0.0, 1.0}, {1.0, 0.0, 1.0}, {0.0, -1.0, 1.0}, {0.0, 1.0, 1.0}});
}

PointKind ConeDescriptor::point_kind() const {
    switch (kind_) {
        case ConeKind::Psd: return PointKind::SymMatrix;
        case ConeKind::GridConvex: return PointKind::GridFunction;
        default: return PointKind::DenseVector;
    }
}

const std::vector<std::vector<double>>& ConeDescriptor::facet_rows() const {
    if (kind_ != ConeKind::Orthant && kind_ != ConeKind::Polyhedral)
        throw capability_error("facet functionals are only available for orthant/polyhedral cones");
    return facets_;
}

double cone_norm(const ConeDescriptor& cone, const Point& x) {
    require_kind(cone, x, "cone_norm");
    return x.natural_norm();
}

double membership_margin(const ConeDescriptor& cone, const Point& x, double scale) {
    require_kind(cone, x, "membership_margin");
    double s = scale > 0.0 ? scale : x.natural_norm();
    if (s == 0.0) return 0.0;  // the origin is in every cone
    double inv = 1.0 / s;

    switch (cone.kind()) {
        case ConeKind::Orthant: {
            double m = kInf;
            for (double v : x.data) m = std::min(m, v * inv);
            return m;
        }
        case ConeKind::Polyhedral: {
            if (!cone.span_basis().empty()) {
                // distance to span via Gram-Schmidt projection of x
                std::vector<double> r = x.data;
                std::vector<std::vector<double>> basis = cone.span_basis();
                for (std::size_t b = 0; b < basis.size(); ++b) {
                    for (std::size_t p = 0; p < b; ++p) {
                        double d = 0.0;
                        for (std::size_t k = 0; k < basis[b].size(); ++k) d += basis[b][k] * basis[p][k];
                        for (std::size_t k = 0; k < basis[b].size(); ++k) basis[b][k] -= d * basis[p][k];
                    }
                    double nb = row_norm(basis[b]);
                    if (nb > 1e-14)
                        for (double& v : basis[b]) v /= nb;
                    double d = 0.0;
                    for (std::size_t k = 0; k < r.size(); ++k) d += basis[b][k] * r[k];
                    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= d * basis[b][k];
                }
                double resid = 0.0;
                for (double v : r) resid += v * v;
                resid = std::sqrt(resid) * inv;
                if (resid > 1e-9) return -resid;
            }
            double m = kInf;
            for (const auto& row : cone.facet_rows()) m = std::min(m, row_dot(row, x) * inv / row_norm(row));
            return m;
        }
        case ConeKind::Lorentz:
            return (x.data.back() - lorentz_bar_norm(x)) * inv;
        case ConeKind::Psd:
            return sym_min_eigenvalue(x) * inv;
        case ConeKind::GridConvex: {
            const int n = x.dim;
            double m = -std::abs(x.data[0]) * inv;
            for (int j = 1; j <= n; ++j) m = std::min(m, x.data[j] * inv);
            // Second differences amplify roundoff by n^2; the margin is
            // reported in units where the membership threshold stays -tol.
            const double inv_n2 = 1.0 / (static_cast<double>(n) * n);
            for (int j = 1; j < n; ++j) {
                double sd = x.data[j + 1] - 2.0 * x.data[j] + x.data[j - 1];
                m = std::min(m, sd * inv * inv_n2);
            }
            return m;
        }
    }
    return -kInf;
}

bool contains(const ConeDescriptor& cone, const Point& x, double tol) {
    return membership_margin(cone, x) >= -tol;
}

bool leq(const ConeDescriptor& cone, const Point& x, const Point& y, double tol) {
    require_kind(cone, x, "leq");
    require_kind(cone, y, "leq");
    Point d = y - x;
    double s = std::max(x.natural_norm(), y.natural_norm());
    if (s == 0.0) return true;
    return membership_margin(cone, d, s) >= -tol;
}

double upper_ratio(const ConeDescriptor& cone, const Point& x, const Point& y) {
    require_kind(cone, x, "upper_ratio");
    require_kind(cone, y, "upper_ratio");
    switch (cone.kind()) {
        case ConeKind::Orthant:
            return ratio_from_values(x.data, y.data, x.euclidean_norm(), y.euclidean_norm(), false);
        case ConeKind::Polyhedral: {
            const auto& rows = cone.facet_rows();
            std::vector<double> vx(rows.size()), vy(rows.size());
            double sx = x.euclidean_norm(), sy = y.euclidean_norm();
            for (std::size_t i = 0; i < rows.size(); ++i) {
                double rn = row_norm(rows[i]);
                vx[i] = row_dot(rows[i], x) / rn;
                vy[i] = row_dot(rows[i], y) / rn;
            }
            return ratio_from_values(vx, vy, sx, sy, false);
        }
        case ConeKind::GridConvex:
            return ratio_from_values(x.data, y.data, x.sup_norm(), y.sup_norm(), true);
        case ConeKind::Lorentz:
            return lorentz_ratio(x, y);
        case ConeKind::Psd:
            return psd_ratio(x, y);
    }
    throw capability_error("upper_ratio: unsupported cone variant");
}

double thompson_distance(const ConeDescriptor& cone, const Point& x, const Point& y) {
    double nx = cone_norm(cone, x), ny = cone_norm(cone, y);
    if (nx == 0.0 && ny == 0.0) return 0.0;
    if (nx == 0.0 || ny == 0.0) return kInf;
    double mxy = upper_ratio(cone, x, y);
    double myx = upper_ratio(cone, y, x);
    if (!std::isfinite(mxy) || !std::isfinite(myx)) return kInf;
    double m = std::max(mxy, myx);
    if (m <= 0.0) return kInf;
    return std::max(0.0, std::log(m));
}

bool dominates_at_level(const ConeDescriptor& cone, const Point& x, const Point& xk,
                        double lambda, double tol) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw input_error("dominates_at_level: lambda must lie in (0,1)");
    return leq(cone, x * lambda, xk, tol);
}

double interior_margin(const ConeDescriptor& cone, const Point& x) {
    require_kind(cone, x, "interior_margin");
    double s = x.natural_norm();
    if (s == 0.0) return -1.0;
    switch (cone.kind()) {
        case ConeKind::GridConvex: {
            // Interior in the pointwise sense: positive at every node past 0.
            double m = kInf;
            for (int j = 1; j <= x.dim; ++j) m = std::min(m, x.data[j] / s);
            return m;
        }
        default:
            return membership_margin(cone, x);
    }
}

double boundary_distance(const ConeDescriptor& cone, const Point& x) {
    require_kind(cone, x, "boundary_distance");
    switch (cone.kind()) {
        case ConeKind::Orthant: {
            double m = kInf;
            for (double v : x.data) m = std::min(m, v);
            return m;
        }
        case ConeKind::Lorentz:
            return (x.data.back() - lorentz_bar_norm(x)) / std::sqrt(2.0);
        default:
            throw capability_error("boundary_distance implemented for orthant and lorentz cones only");
    }
}

Point canonical_interior_point(const ConeDescriptor& cone) {
    if (cone.interior_witness()) return *cone.interior_witness();
    throw capability_error("cone has no known interior point");
}

Point sample_unit(const ConeDescriptor& cone, std::uint64_t seed) {
    Rng rng(seed);
    const int n = cone.dim();
    Point p = canonical_interior_point(cone);

    switch (cone.kind()) {
        case ConeKind::Orthant: {
            double mode = rng.uniform01();
            std::vector<double> v(n, 0.0);
            if (mode < 0.3) {
                v[rng.index(n)] = 1.0;  // extreme ray
            } else if (mode < 0.6) {
                for (double& e : v) e = std::abs(rng.normal());
                for (double& e : v)
                    if (rng.uniform01() < 0.5) e = 0.0;
                bool any = false;
                for (double e : v) any = any || e > 0;
                if (!any) v[rng.index(n)] = 1.0;
            } else {
                for (double& e : v) e = 0.05 + std::abs(rng.normal());
            }
            p = Point::dense(std::move(v));
            break;
        }
        case ConeKind::Polyhedral: {
            std::vector<const Point*> gens;
            for (const auto& w : cone.facet_witnesses()) gens.push_back(&w);
            if (cone.interior_witness()) gens.push_back(&*cone.interior_witness());
            if (gens.empty()) throw capability_error("cannot sample a polyhedral cone without witnesses");
            double mode = rng.uniform01();
            if (mode < 0.35) {
                p = *gens[rng.index(gens.size())];
            } else {
                p = Point::zeros_like(*gens[0]);
                int picks = 2 + static_cast<int>(rng.index(3));
                for (int t = 0; t < picks; ++t) p += rng.log_uniform(0.1, 10.0) * (*gens[rng.index(gens.size())]);
            }
            break;
        }
        case ConeKind::Lorentz: {
            std::vector<double> v(n, 0.0);
            double bar = 0.0;
            for (int i = 0; i + 1 < n; ++i) {
                v[i] = rng.normal();
                bar += v[i] * v[i];
            }
            bar = std::sqrt(bar);
            if (bar == 0.0) {
                v[0] = 1.0;
                bar = 1.0;
            }
            double mode = rng.uniform01();
            v[n - 1] = (mode < 0.35) ? bar : bar * (1.0 + 0.05 + std::abs(rng.normal()));
            p = Point::dense(std::move(v));
            break;
        }
        case ConeKind::Psd: {
            double mode = rng.uniform01();
            std::vector<double> packed(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
            if (mode < 0.35) {
                std::vector<double> v(n);
                for (double& e : v) e = rng.normal();
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j <= i; ++j) packed[sym_packed_index(i, j)] = v[i] * v[j];
            } else {
                std::vector<double> a(static_cast<std::size_t>(n) * n);
                for (double& e : a) e = rng.normal();
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j <= i; ++j) {
                        double s = 0.0;
                        for (int k = 0; k < n; ++k) s += a[static_cast<std::size_t>(i) * n + k] * a[static_cast<std::size_t>(j) * n + k];
                        packed[sym_packed_index(i, j)] = s;
                    }
            }
            p = Point::sym(n, std::move(packed));
            break;
        }
        case ConeKind::GridConvex: {
            std::vector<double> v(n + 1, 0.0);
            auto add_hinge = [&](int c, double w) {
                for (int j = c + 1; j <= n; ++j)
                    v[j] += w * static_cast<double>(j - c) / static_cast<double>(n - c);
            };
            double mode = rng.uniform01();
            if (mode < 0.3) {
                add_hinge(static_cast<int>(rng.index(n)), 1.0);  // single hinge: extreme direction
            } else if (mode < 0.55) {
                double alpha = rng.uniform(1.0, 6.0);
                for (int j = 0; j <= n; ++j) v[j] = std::pow(static_cast<double>(j) / n, alpha);
            } else {
                int picks = 2 + static_cast<int>(rng.index(4));
                for (int t = 0; t < picks; ++t) add_hinge(static_cast<int>(rng.index(n)), rng.log_uniform(0.2, 5.0));
            }
            p = Point::grid(std::move(v));
            break;
        }
    }

    double nrm = cone_norm(cone, p);
    if (nrm == 0.0) {
        p = canonical_interior_point(cone);
        nrm = cone_norm(cone, p);
    }
    return p * (1.0 / nrm);
}

}  // namespace conespec
