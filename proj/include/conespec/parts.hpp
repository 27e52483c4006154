#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <vector>

#include "conespec/cone.hpp"
#include "conespec/point.hpp"

namespace conespec {

/// Set of facet indices strictly positive on a part, as a bitmask over
/// facets 1..N (N <= 20). The empty signature is the part {0}.
struct PartSignature {
    std::uint32_t bits = 0;

    static PartSignature from_indices(const std::vector<int>& one_based);
    std::vector<int> indices() const;
    int count() const;
    bool subset_of(const PartSignature& o) const { return (bits & o.bits) == bits; }
    bool contains_index(int one_based) const { return (bits >> (one_based - 1)) & 1u; }
    bool operator==(const PartSignature&) const = default;
    auto operator<=>(const PartSignature&) const = default;
};

// P is dominated by Q iff I(P) is a subset of I(Q).
inline bool part_leq(const PartSignature& p, const PartSignature& q) { return p.subset_of(q); }

struct Part {
    PartSignature signature;
    Point witness;
    int height = 0;  // longest chain of nonzero parts ending here; 0 for {0}
};

struct PartsLattice {
    std::vector<Part> parts;  // sorted by (signature size, bitmask); includes {0}
    int facet_count = 0;

    const Part* find(PartSignature sig) const;
    std::size_t size() const { return parts.size(); }
};

/// Enumerates the feasible facet sign patterns of an orthant/polyhedral cone
/// by subset scan + linear feasibility, storing a witness per part. Capped at
/// 20 facets.
PartsLattice enumerate_parts(const ConeDescriptor& cone, double tol = 1e-7);

/// Signature {i : psi_i(x) > tol*||x||} of a cone point.
PartSignature part_of(const ConeDescriptor& cone, const Point& x, double tol = 1e-7);

std::map<PartSignature, int> heights(const PartsLattice& lattice);

}  // namespace conespec
