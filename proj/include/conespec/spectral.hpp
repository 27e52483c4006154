#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conespec/cone.hpp"
#include "conespec/eigenpair.hpp"
#include "conespec/maps.hpp"
#include "conespec/parts.hpp"

namespace conespec {

struct RadiusParams {
    int kmax = 64;
    int samples = 64;
    std::uint64_t seed = 42;
    double tol = 1e-9;
};

/// Bonsall radius estimate: certified lower/upper bounds around an
/// extrapolated value, plus the (k, log||f^k||-estimate / k) trace. Traces are
/// exact for linear and composition maps and sampled otherwise; `analytic`
/// records which path produced them.
struct RadiusEstimate {
    double lower = 0.0;
    double upper = 0.0;
    double value = 0.0;
    std::vector<std::pair<int, double>> norm_trace;
    bool analytic = false;
    int sample_count = 0;
    double sample_spread = 0.0;
    std::vector<std::string> notes;
};

/// Local growth rate: Cesaro slope of log||f^k(x0)||/k over the tail half of
/// a renormalized iteration, accumulated in extended precision. Returns the
/// growth factor (not its log); 0 if an iterate vanishes.
double local_growth(const MapDescriptor& map, const ConeDescriptor& cone, const Point& x0, int kmax);

/// Largest a with a*v <= f(v): a certified lower bound for the cone spectral
/// radius. Returns 0 when the certificate is inadmissible.
double cw_lower(const MapDescriptor& map, const ConeDescriptor& cone, const Point& v);

/// Smallest mu with f(y) <= mu*y for strictly interior y: a certified upper
/// bound. Throws input_error if y is not interior.
double cw_upper(const MapDescriptor& map, const ConeDescriptor& cone, const Point& y);

RadiusEstimate bonsall_radius(const MapDescriptor& map, const ConeDescriptor& cone,
                              const RadiusParams& params = {});

/// Normalized iteration x <- f(x)/||f(x)||, stopping when successive iterates
/// are Thompson-close (norm distance when the Thompson distance is infinite).
/// Returns nothing on a vanishing iterate or when maxit is exhausted.
std::optional<EigenPair> eigen_iterate(const MapDescriptor& map, const ConeDescriptor& cone,
                                       const Point& x0, double tol = 1e-10, int maxit = 500);

struct ScanParams {
    int per_part_starts = 3;
    std::uint64_t seed = 42;
    double tol = 1e-10;
    int maxit = 500;
    double dedup_tol = 1e-7;
};

struct SpectrumScan {
    struct Escape {
        PartSignature from;
        PartSignature to;
        double value = 0.0;
    };
    std::vector<EigenPair> pairs;         // at most one per nonzero part
    std::vector<double> distinct_values;  // deduplicated across parts
    int part_count = 0;                   // m, including {0}
    bool bound_satisfied = false;         // |distinct| <= m - 1
    bool continuum_suspected = false;
    std::vector<Escape> escapes;
    std::vector<std::string> notes;
};

/// Part-by-part eigenpair scan on an orthant/polyhedral cone. A converged
/// pair is kept only when it lands in its launch part; cross-part escapes
/// are logged.
SpectrumScan spectrum_scan(const MapDescriptor& map, const ConeDescriptor& cone,
                           const PartsLattice& lattice, const ScanParams& params = {});

/// Boundary spectrum of the trace maps, sampled over the rank-one projection
/// family at `grid` rotation angles in [0, 2pi].
std::vector<EigenPair> psd_trace_boundary_spectrum(const MapDescriptor& map, int grid);

// Rank-one projection onto the rotated first coordinate, embedded in n x n.
Point psd_rotation_projector(int n, double theta);

}  // namespace conespec
