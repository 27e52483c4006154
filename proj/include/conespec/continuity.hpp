#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conespec/cone.hpp"
#include "conespec/maps.hpp"
#include "conespec/spectral.hpp"

namespace conespec {

/// ||f - g||_C estimated as a sampled sup over unit-sphere points; for the
/// (halving, deformation-k) operator pair the analytic bracket
/// [max_t(t/2 - phi_k(t)), 2 max_t(t/2 - phi_k(t))] is attached as well.
struct MapDistance {
    double sampled = 0.0;
    std::optional<std::pair<double, double>> bracket;
};

MapDistance map_distance(const MapDescriptor& f, const MapDescriptor& g, const ConeDescriptor& cone,
                         int samples = 64, std::uint64_t seed = 42);

enum class Verdict { ContinuousConsistent, UpperSemicontinuousOnly, Inconclusive };
std::string verdict_name(Verdict v);

struct PerturbationRow {
    int k = 0;
    MapDistance distance;
    RadiusEstimate radius;
};

struct PerturbationReport {
    std::vector<PerturbationRow> rows;  // sorted by k
    RadiusEstimate base_radius;
    Verdict verdict = Verdict::Inconclusive;
    std::string distance_source;  // "analytic-bracket" or "sampled"
    double sigma_rows = 0.0;      // stddev of the family's radius values
};

struct PerturbationParams {
    RadiusParams radius;
    int distance_samples = 64;
    double tol = 1e-9;
};

/// Runs the family against the base map and classifies the limit behaviour:
/// continuous-consistent when the last radius agrees with the base within
/// max(5*tol, 3*sigma_rows); upper-semicontinuous-only when every r_k stays
/// below r + tol but the final gap exceeds 0.1*r; inconclusive otherwise.
PerturbationReport perturbation_run(const MapDescriptor& f,
                                    const std::vector<std::pair<int, MapDescriptor>>& family,
                                    const ConeDescriptor& cone, const PerturbationParams& params = {});

struct Section3Row {
    int k = 0;
    double phi_at_one = 0.0;
    double dist_lo = 0.0;
    double dist_hi = 0.0;
    double dist_sampled = 0.0;
    double radius_estimate = 0.0;
    std::vector<std::pair<int, double>> trace;  // (m, log phi^m(1) / m)
};

struct Section3Report {
    double base_radius = 0.0;  // halving operator, exact path
    struct AlphaCheck {
        double alpha = 0.0;
        double eigenvalue = 0.0;         // observed sample ratio at t = 1
        double max_sample_error = 0.0;   // sup_j |T v - 2^-alpha v|_j
    };
    std::vector<Section3Row> rows;
    std::vector<AlphaCheck> eigen_family;
    std::vector<std::string> warnings;
    PerturbationReport perturbation;
};

/// Reproduces the discontinuity example end to end: exact radius of the
/// halving operator, per-k distance brackets and norm traces in log domain,
/// the power-function eigen-family on the grid, and the verdict of the
/// perturbation run.
Section3Report reproduce_section3(const std::vector<int>& k_list, int grid_n = 1024, int m_max = 32);

/// First index m such that lambda*x <= x_j for every j >= m in the finite
/// sequence; nullopt when the tail never stabilizes.
std::optional<int> condition_g_probe(const ConeDescriptor& cone, const Point& x,
                                     const std::vector<Point>& sequence, double lambda,
                                     double tol = kDefaultTol);
std::optional<int> condition_g_probe(const ConeDescriptor& cone, const Point& x,
                                     const std::function<Point(int)>& generator, int max_terms,
                                     double lambda, double tol = kDefaultTol);

}  // namespace conespec
