#include "conespec/continuity.hpp"

#include <algorithm>
#include <cmath>

#include "conespec/errors.hpp"
#include "conespec/rng.hpp"

namespace conespec {

namespace {

// max_t (t/2 - phi_k(t)); the gap is increasing in t, so it sits at t = 1.
double halving_gap(int k) { return 0.5 - phi_k_eval(k, 1.0); }

std::optional<std::pair<double, double>> analytic_bracket(const MapDescriptor& f, const MapDescriptor& g) {
    const auto* cf = std::get_if<CompositionMap>(&f);
    const auto* cg = std::get_if<CompositionMap>(&g);
    if (!cf || !cg) return std::nullopt;
    const CompositionMap* halving = nullptr;
    const CompositionMap* deformed = nullptr;
    if (cf->inner == InnerDeformation::Halving && cg->inner == InnerDeformation::PhiK) {
        halving = cf;
        deformed = cg;
    } else if (cg->inner == InnerDeformation::Halving && cf->inner == InnerDeformation::PhiK) {
        halving = cg;
        deformed = cf;
    }
    if (!halving) return std::nullopt;
    double lo = halving_gap(deformed->k);
    return std::make_pair(lo, 2.0 * lo);
}

}  // namespace

MapDistance map_distance(const MapDescriptor& f, const MapDescriptor& g, const ConeDescriptor& cone,
                         int samples, std::uint64_t seed) {
    if (samples < 1) throw input_error("map_distance needs at least one sample");
    MapDistance out;
    out.bracket = analytic_bracket(f, g);

    std::vector<Point> probes;
    if (cone.interior_witness()) {
        Point w = *cone.interior_witness();
        probes.push_back(w * (1.0 / cone_norm(cone, w)));  // grid cone: g(t) = t, the bracket maximizer
    }
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) probes.push_back(sample_unit(cone, rng.next_u64()));

    double sup = 0.0;
    for (const auto& x : probes) {
        Point d = apply_map(f, x) - apply_map(g, x);
        sup = std::max(sup, d.natural_norm());
    }
    out.sampled = sup;
    return out;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::ContinuousConsistent: return "continuous-consistent";
        case Verdict::UpperSemicontinuousOnly: return "upper-semicontinuous-only";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

PerturbationReport perturbation_run(const MapDescriptor& f,
                                    const std::vector<std::pair<int, MapDescriptor>>& family,
                                    const ConeDescriptor& cone, const PerturbationParams& params) {
    if (family.empty()) throw input_error("perturbation family must be nonempty");

    PerturbationReport rep;
    rep.base_radius = bonsall_radius(f, cone, params.radius);

    for (const auto& [k, g] : family) {
        PerturbationRow row;
        row.k = k;
        RadiusParams rp = params.radius;
        rp.seed = params.radius.seed + static_cast<std::uint64_t>(k);
        row.distance = map_distance(f, g, cone, params.distance_samples, rp.seed);
        row.radius = bonsall_radius(g, cone, rp);
        rep.rows.push_back(std::move(row));
    }
    std::stable_sort(rep.rows.begin(), rep.rows.end(),
                     [](const PerturbationRow& a, const PerturbationRow& b) { return a.k < b.k; });

    bool all_bracketed = true;
    for (const auto& row : rep.rows) all_bracketed = all_bracketed && row.distance.bracket.has_value();
    rep.distance_source = all_bracketed ? "analytic-bracket" : "sampled";

    std::vector<double> rk;
    for (const auto& row : rep.rows) rk.push_back(row.radius.value);
    double mean = 0.0;
    for (double v : rk) mean += v;
    mean /= rk.size();
    double var = 0.0;
    for (double v : rk) var += (v - mean) * (v - mean);
    rep.sigma_rows = rk.size() > 1 ? std::sqrt(var / (rk.size() - 1)) : 0.0;

    const double r = rep.base_radius.value;
    const double r_last = rk.back();
    const double tol = params.tol;
    if (std::abs(r_last - r) <= std::max(5.0 * tol, 3.0 * rep.sigma_rows)) {
        rep.verdict = Verdict::ContinuousConsistent;
    } else {
        bool below = true;
        for (double v : rk) below = below && v <= r + tol;
        if (below && r > 0.0 && (r - r_last) > 0.1 * r)
            rep.verdict = Verdict::UpperSemicontinuousOnly;
        else
            rep.verdict = Verdict::Inconclusive;
    }
    return rep;
}

Section3Report reproduce_section3(const std::vector<int>& k_list, int grid_n, int m_max) {
    if (k_list.empty()) throw input_error("k list must be nonempty");
    for (int k : k_list)
        if (k < 3 || k > 60) throw input_error("deformation indices must lie in [3, 60]");
    if (grid_n < 2 || (grid_n & (grid_n - 1)) != 0) throw input_error("grid size must be a power of two");
    if (m_max < 4) throw input_error("m_max must be at least 4");

    Section3Report rep;
    ConeDescriptor cone = ConeDescriptor::grid_convex(grid_n);
    MapDescriptor halving = make_composition(InnerDeformation::Halving);

    RadiusParams rparams;
    rparams.kmax = m_max;
    rep.base_radius = bonsall_radius(halving, cone, rparams).value;

    std::vector<std::pair<int, MapDescriptor>> family;
    for (int k : k_list) {
        if (std::ldexp(1.0, -k) < 1.0 / grid_n)
            rep.warnings.push_back("grid too coarse for k=" + std::to_string(k) +
                                   ": the quadratic piece falls below one grid cell");
        family.push_back({k, make_composition(InnerDeformation::PhiK, k)});
    }

    PerturbationParams pparams;
    pparams.radius = rparams;
    rep.perturbation = perturbation_run(halving, family, cone, pparams);

    for (const auto& row : rep.perturbation.rows) {
        Section3Row r3;
        r3.k = row.k;
        r3.phi_at_one = phi_k_eval(row.k, 1.0);
        r3.dist_lo = row.distance.bracket ? row.distance.bracket->first : 0.0;
        r3.dist_hi = row.distance.bracket ? row.distance.bracket->second : 0.0;
        r3.dist_sampled = row.distance.sampled;
        r3.radius_estimate = row.radius.value;
        r3.trace = row.radius.norm_trace;
        rep.rows.push_back(std::move(r3));
    }

    for (double alpha : {1.0, 2.0, 4.0, 8.0}) {
        std::vector<double> v(grid_n + 1);
        for (int j = 0; j <= grid_n; ++j) v[j] = std::pow(static_cast<double>(j) / grid_n, alpha);
        Point p = Point::grid(v);
        Point tp = apply_map(halving, p);
        double lam = std::ldexp(1.0, static_cast<int>(-alpha));
        double err = 0.0;
        for (int j = 0; j <= grid_n; ++j) err = std::max(err, std::abs(tp.data[j] - lam * v[j]));
        Section3Report::AlphaCheck chk;
        chk.alpha = alpha;
        chk.eigenvalue = tp.data[grid_n] / v[grid_n];  // value at t = 1 where ||v|| = 1
        chk.max_sample_error = err;
        rep.eigen_family.push_back(chk);
    }
    return rep;
}

std::optional<int> condition_g_probe(const ConeDescriptor& cone, const Point& x,
                                     const std::vector<Point>& sequence, double lambda, double tol) {
    return condition_g_probe(
        cone, x, [&](int j) { return sequence.at(static_cast<std::size_t>(j) - 1); },
        static_cast<int>(sequence.size()), lambda, tol);
}

std::optional<int> condition_g_probe(const ConeDescriptor& cone, const Point& x,
                                     const std::function<Point(int)>& generator, int max_terms,
                                     double lambda, double tol) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw input_error("condition G level must lie in (0,1)");
    if (max_terms < 1) throw input_error("sequence must be nonempty");
    if (max_terms > 1000000) throw input_error("sequence scan capped at 1e6 terms");
    int last_fail = 0;
    for (int j = 1; j <= max_terms; ++j) {
        if (!dominates_at_level(cone, x, generator(j), lambda, tol)) last_fail = j;
    }
    if (last_fail == max_terms) return std::nullopt;  // never stabilized within the scan
    return last_fail + 1;
}

}  // namespace conespec
