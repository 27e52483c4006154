#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conespec/cone.hpp"
#include "conespec/eigenpair.hpp"
#include "conespec/parts.hpp"
#include "conespec/point.hpp"

namespace conespec {

// ---------------------------------------------------------------------------
// Map variants. All descriptors are immutable after construction; apply_map() is
// pure and reentrant.
// ---------------------------------------------------------------------------

struct LinearMap {
    int n = 0;
    std::vector<double> matrix;  // row-major n*n
};

/// x -> join over nonempty I of w_I * (min_{i in I} x_i) * chi^I on the
/// orthant. Weights are indexed by bitmask: weights[mask-1] for mask in
/// [1, 2^n). Construction enforces w_I < w_J for proper subsets I of J.
struct LatticeMap {
    int n = 0;
    std::vector<double> weights;
};

struct PowerMeanTerm {
    double weight = 1.0;
    PartSignature signature;
    Point direction;
};

/// x -> sum_P w_P * M_r(I(P))(x) * u^P over the stored terms, with M_r the
/// power mean of the facet values (r < 0 or -inf).
struct PowerMeanComboMap {
    double r = -1.0;  // -inf allowed
    std::vector<std::vector<double>> facets;
    std::vector<PowerMeanTerm> terms;
};

/// X -> (tr(XA) X)^{1/2}, optionally conjugated as B^T (.)^{1/2} B.
struct PsdTraceMap {
    Point a;
    std::optional<Point> b;
};

enum class InnerDeformation { Halving, PhiK, PiecewiseLinear };

/// Grid-function composition operator v -> v(phi(t_j)) with piecewise-linear
/// interpolation between grid samples. phi is t/2, the k-indexed quadratic/
/// affine deformation, or a user monotone piecewise-linear function.
struct CompositionMap {
    InnerDeformation inner = InnerDeformation::Halving;
    int k = 3;                                         // PhiK
    std::vector<std::pair<double, double>> breakpoints;  // PiecewiseLinear: (t, phi(t))
};

/// Truncated series on Lorentz(3): x -> sum_{k=1..K} 2^{-k} w_k
/// (min_{m != k} phi_m(x)) x^k, with phi_m(x) = x1 cos a_m + x2 sin a_m + x3
/// over m = 0..K (angle 0 is always included as the limit functional) and
/// x^k = (-cos a_k, -sin a_k, 1)/sqrt(2).
struct LorentzSeriesMap {
    std::vector<double> angles;   // distinct, nonzero
    std::vector<double> weights;  // in (0, 1]
};

using MapDescriptor =
    std::variant<LinearMap, LatticeMap, PowerMeanComboMap, PsdTraceMap, CompositionMap, LorentzSeriesMap>;

// Validating factories.
MapDescriptor make_linear(const std::vector<std::vector<double>>& rows);
MapDescriptor make_lattice(int n, std::vector<double> weights);
MapDescriptor make_power_mean_combo(double r, std::vector<std::vector<double>> facets,
                                    std::vector<PowerMeanTerm> terms);
MapDescriptor make_psd_trace(Point a, std::optional<Point> b = std::nullopt);
MapDescriptor make_composition(InnerDeformation inner, int k = 3,
                               std::vector<std::pair<double, double>> breakpoints = {});
MapDescriptor make_lorentz_series(std::vector<double> angles, std::vector<double> weights);

Point apply_map(const MapDescriptor& map, const Point& x);

// The deformation phi of a composition map, and its defining pieces.
double composition_phi(const CompositionMap& map, double t);
double phi_k_eval(int k, double t);
double phi_k_epsilon(int k);

/// M_r(I)(x) over the facet values: (sum psi_i(x)^r)^{1/r} for finite r < 0,
/// min for r = -inf; zero as soon as any psi_i(x) vanishes.
double power_mean(const PartSignature& I, double r, const std::vector<std::vector<double>>& facets,
                  const Point& x);

// Coefficient 2^{-k} w_k min_{m != k} phi_m(x) of the k-th series term.
double lorentz_series_term(const LorentzSeriesMap& map, int k, const Point& x);
Point lorentz_series_direction(const LorentzSeriesMap& map, int k);

// ---------------------------------------------------------------------------
// Constructions with certified eigenpairs
// ---------------------------------------------------------------------------

struct PolyhedralEigenMapOptions {
    double r = -1.0;
    std::vector<double> targets;  // one per nonzero part; auto-filled if empty
    std::vector<Point> seeds;     // default: lattice witnesses
};

struct PolyhedralEigenMapResult {
    MapDescriptor map;
    std::vector<EigenPair> pairs;
    std::vector<double> targets_used;  // after escalation
};

/// Builds the power-mean combination with one eigenvector per nonzero part,
/// processing parts by increasing height and escalating a target eigenvalue
/// by doubling until the inductive cone-membership condition holds.
PolyhedralEigenMapResult build_thm55_map(const ConeDescriptor& cone, const PartsLattice& lattice,
                                         const PolyhedralEigenMapOptions& opt = {});

struct LorentzSeriesOptions {
    int terms = 20;
    std::vector<double> angles;   // default 1/k
    std::vector<double> weights;  // default all 1
};

struct LorentzSeriesResult {
    MapDescriptor map;
    std::vector<EigenPair> pairs;
};

/// Truncated Lorentz series with K certified boundary eigenpairs and pairwise
/// distinct eigenvalues (weights are nudged if the defaults collide).
LorentzSeriesResult build_thm56_map(const LorentzSeriesOptions& opt = {});

// ---------------------------------------------------------------------------
// Property testers
// ---------------------------------------------------------------------------

struct PropertyReport {
    int trials = 0;
    int violations = 0;
    double worst_margin = 0.0;  // most negative slack observed
};

PropertyReport check_order_preserving(const MapDescriptor& map, const ConeDescriptor& cone, int trials,
                                      std::uint64_t seed, double tol = 1e-8);
PropertyReport check_homogeneous(const MapDescriptor& map, const ConeDescriptor& cone, int trials,
                                 std::uint64_t seed, double tol = 1e-8);

// ---------------------------------------------------------------------------
// Named presets (CLI surface)
// ---------------------------------------------------------------------------

struct PresetParams {
    int n = 3;        // lattice / psd dimension
    int k = 3;        // composition deformation index
    int terms = 20;   // series truncation
    int grid_n = 1024;
    std::string cone_name = "square";  // thm55: "square" or "orthant"
    double r = -1.0;
};

struct PresetSpec {
    MapDescriptor map;
    ConeDescriptor cone;
    std::vector<EigenPair> certified;  // filled by the constructive presets
    std::vector<std::string> notes;
};

/// Presets: paper:T, paper:Tk, paper:psd-f, paper:psd-g, paper:lattice,
/// paper:thm55, paper:thm56, zero, adversarial-linear, golden.
PresetSpec make_preset(const std::string& name, const PresetParams& params = {});

// Exactly monotone, pairwise-distinct default lattice weights: |I| + mask/2^{n+1}.
std::vector<double> default_lattice_weights(int n);

}  // namespace conespec
