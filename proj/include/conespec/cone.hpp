#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "conespec/point.hpp"

namespace conespec {

inline constexpr double kDefaultTol = 1e-9;

enum class ConeKind { Orthant, Polyhedral, Lorentz, Psd, GridConvex };

/// Immutable description of a closed cone. Membership, the induced partial
/// order, domination ratios M(x/y) and the Thompson metric all dispatch on
/// the variant. Polyhedral cones carry their facet functionals as rows and
/// are validated (pairwise non-proportional facets, pointedness) on
/// construction; a strictly interior witness is precomputed when one exists.
class ConeDescriptor {
  public:
    static ConeDescriptor orthant(int n);
    static ConeDescriptor lorentz(int n);
    static ConeDescriptor psd(int n);
    static ConeDescriptor grid_convex(int grid_n = 1024);
    static ConeDescriptor polyhedral(std::vector<std::vector<double>> facets,
                                     std::vector<std::vector<double>> span_basis = {});
    // The cone over the unit square: {|x1| <= x3, |x2| <= x3} in R^3.
    static ConeDescriptor square_cone();

    ConeKind kind() const { return kind_; }
    int dim() const { return dim_; }
    PointKind point_kind() const;

    // Facet functionals; valid for Orthant (identity rows) and Polyhedral.
    const std::vector<std::vector<double>>& facet_rows() const;
    int facet_count() const { return static_cast<int>(facets_.size()); }
    const std::vector<std::vector<double>>& span_basis() const { return span_basis_; }

    const std::optional<Point>& interior_witness() const { return interior_witness_; }
    const std::vector<Point>& facet_witnesses() const { return facet_witnesses_; }

  private:
    ConeDescriptor() = default;
    ConeKind kind_ = ConeKind::Orthant;
    int dim_ = 0;
    std::vector<std::vector<double>> facets_;
    std::vector<std::vector<double>> span_basis_;
    std::optional<Point> interior_witness_;
    std::vector<Point> facet_witnesses_;  // one boundary point per facet when feasible
};

double cone_norm(const ConeDescriptor& cone, const Point& x);

/// Signed membership slack of x/scale; nonnegative iff x is in the cone up to
/// roundoff at that scale. `scale <= 0` normalizes by the cone norm of x.
double membership_margin(const ConeDescriptor& cone, const Point& x, double scale = -1.0);

bool contains(const ConeDescriptor& cone, const Point& x, double tol = kDefaultTol);

// x <= y in the cone order, at the common scale of x and y.
bool leq(const ConeDescriptor& cone, const Point& x, const Point& y, double tol = kDefaultTol);

/// M(x/y) = inf{beta > 0 : x <= beta y}; +inf when y does not dominate x.
double upper_ratio(const ConeDescriptor& cone, const Point& x, const Point& y);

/// d_T(x,y) = log max{M(x/y), M(y/x)}; 0 at x=y=0, +inf across parts.
double thompson_distance(const ConeDescriptor& cone, const Point& x, const Point& y);

/// Deterministic unit-norm sample mixing extreme directions with interior
/// combinations. Same seed, same point.
Point sample_unit(const ConeDescriptor& cone, std::uint64_t seed);

bool dominates_at_level(const ConeDescriptor& cone, const Point& x, const Point& xk,
                        double lambda, double tol = kDefaultTol);

// Positive iff x is strictly interior; used as the cw_upper precondition.
double interior_margin(const ConeDescriptor& cone, const Point& x);

// Euclidean distance to the boundary (Orthant and Lorentz only).
double boundary_distance(const ConeDescriptor& cone, const Point& x);

Point canonical_interior_point(const ConeDescriptor& cone);

}  // namespace conespec
