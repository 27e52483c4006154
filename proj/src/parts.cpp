#include "conespec/parts.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "conespec/errors.hpp"
#include "conespec/linear_feasibility.hpp"

namespace conespec {

namespace {

double row_dot(const std::vector<double>& row, const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) s += row[i] * x[i];
    return s;
}

double row_norm(const std::vector<double>& row) {
    double s = 0.0;
    for (double v : row) s += v * v;
    return std::sqrt(s);
}

std::vector<double> pow2_normalized(std::vector<double> v) {
    double mx = 0.0;
    for (double e : v) mx = std::max(mx, std::abs(e));
    if (mx > 2.0) {
        int e = 0;
        std::frexp(mx, &e);
        double s = std::ldexp(1.0, e - 1);
        for (double& x : v) x /= s;
    }
    return v;
}

}  // namespace

PartSignature PartSignature::from_indices(const std::vector<int>& one_based) {
    PartSignature s;
    for (int i : one_based) {
        if (i < 1 || i > 32) throw input_error("facet index out of range");
        s.bits |= 1u << (i - 1);
    }
    return s;
}

std::vector<int> PartSignature::indices() const {
    std::vector<int> out;
    for (int i = 0; i < 32; ++i)
        if ((bits >> i) & 1u) out.push_back(i + 1);
    return out;
}

int PartSignature::count() const { return std::popcount(bits); }

const Part* PartsLattice::find(PartSignature sig) const {
    for (const auto& p : parts)
        if (p.signature == sig) return &p;
    return nullptr;
}

PartsLattice enumerate_parts(const ConeDescriptor& cone, double tol) {
    const auto& facets = cone.facet_rows();  // throws for unsupported variants
    const int nf = static_cast<int>(facets.size());
    if (nf > 20) throw input_error("part enumeration is capped at 20 facets (2^N subset scan)");

    // Reduce to span coordinates when a basis is present.
    const auto& basis = cone.span_basis();
    const int nvars = basis.empty() ? cone.dim() : static_cast<int>(basis.size());
    std::vector<std::vector<double>> rows(nf, std::vector<double>(nvars, 0.0));
    for (int i = 0; i < nf; ++i) {
        if (basis.empty()) {
            rows[i] = facets[i];
        } else {
            for (int d = 0; d < nvars; ++d) rows[i][d] = row_dot(facets[i], basis[d]);
        }
    }
    auto lift = [&](const std::vector<double>& z) {
        if (basis.empty()) return z;
        std::vector<double> x(cone.dim(), 0.0);
        for (std::size_t d = 0; d < basis.size(); ++d)
            for (int k = 0; k < cone.dim(); ++k) x[k] += z[d] * basis[d][k];
        return x;
    };

    PartsLattice lattice;
    lattice.facet_count = nf;
    lattice.parts.push_back({PartSignature{}, Point::dense(std::vector<double>(cone.dim(), 0.0)), 0});

    for (std::uint32_t mask = 1; mask < (1u << nf); ++mask) {
        std::vector<LinearConstraint> cs;
        for (int i = 0; i < nf; ++i) {
            if ((mask >> i) & 1u) {
                cs.push_back({rows[i], Relation::Ge, 1.0});
                cs.push_back({rows[i], Relation::Le, 1e6});  // big-M keeps the region a polytope
            } else {
                cs.push_back({rows[i], Relation::Eq, 0.0});
            }
        }
        auto z = feasible_point(nvars, cs);
        if (!z) continue;
        Point w = Point::dense(pow2_normalized(lift(*z)));
        PartSignature sig{mask};
        if (part_of(cone, w, tol) != sig) continue;  // reject witnesses degraded by roundoff
        lattice.parts.push_back({sig, std::move(w), 0});
    }

    if (!lattice.find(PartSignature{(1u << nf) - 1}))
        throw input_error("cone has empty interior: full signature is infeasible");

    std::stable_sort(lattice.parts.begin(), lattice.parts.end(), [](const Part& a, const Part& b) {
        if (a.signature.count() != b.signature.count()) return a.signature.count() < b.signature.count();
        return a.signature.bits < b.signature.bits;
    });

    // Heights by chain DP over the enumerated signatures (sorted by size, so
    // every proper predecessor is already final).
    for (auto& p : lattice.parts) {
        if (p.signature.bits == 0) continue;
        int h = 1;
        for (const auto& q : lattice.parts) {
            if (q.signature.bits == 0 || q.signature == p.signature) continue;
            if (q.signature.subset_of(p.signature)) h = std::max(h, q.height + 1);
        }
        p.height = h;
    }
    return lattice;
}

PartSignature part_of(const ConeDescriptor& cone, const Point& x, double tol) {
    const auto& facets = cone.facet_rows();
    if (x.kind != PointKind::DenseVector || x.dim != cone.dim())
        throw input_error("part_of: point does not match the cone's space");
    double nrm = x.euclidean_norm();
    if (nrm == 0.0) return PartSignature{};
    if (!contains(cone, x, 1e-7)) throw input_error("part_of: point is not in the cone");
    PartSignature sig;
    for (std::size_t i = 0; i < facets.size(); ++i) {
        double v = row_dot(facets[i], x.data) / row_norm(facets[i]);
        if (v > tol * nrm) sig.bits |= 1u << i;
    }
    return sig;
}

std::map<PartSignature, int> heights(const PartsLattice& lattice) {
    std::map<PartSignature, int> out;
    for (const auto& p : lattice.parts)
        if (p.signature.bits != 0) out[p.signature] = p.height;
    return out;
}

}  // namespace conespec
