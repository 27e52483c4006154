// Acceptance suite: one line per criterion, exit 0 only when all pass.
// Every tolerance is pinned in the checks below.

#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "conespec/continuity.hpp"
#include "conespec/errors.hpp"
#include "conespec/maps.hpp"
#include "conespec/parts.hpp"
#include "conespec/rng.hpp"
#include "conespec/spectral.hpp"
#include "conespec/sym_eigen.hpp"

using namespace conespec;

namespace {

int g_failures = 0;

struct Criterion {
    int number;
    const char* label;
    std::function<bool(std::string&)> run;
};

void report(int number, const char* label, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, label,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

bool criterion_1_section3_discontinuity(std::string& detail) {
    auto rep = reproduce_section3({3, 4, 5, 6, 7, 8}, 1024, 32);
    bool ok = std::abs(rep.base_radius - 0.5) <= 1e-12;
    double prev_hi = 1e9;
    for (const auto& row : rep.rows) {
        ok = ok && row.radius_estimate <= 1e-6;
        ok = ok && row.dist_hi < prev_hi;
        prev_hi = row.dist_hi;
        if (row.k == 3) ok = ok && row.dist_hi <= 7.0 / 32.0 + 1e-15;
    }
    ok = ok && rep.perturbation.verdict == Verdict::UpperSemicontinuousOnly;
    detail = "r(T)=" + std::to_string(rep.base_radius) +
             ", verdict=" + verdict_name(rep.perturbation.verdict);
    return ok;
}

bool criterion_2_eigen_family(std::string& detail) {
    auto rep = reproduce_section3({3}, 1024, 32);
    bool ok = rep.eigen_family.size() == 4;
    double worst = 0.0;
    for (const auto& chk : rep.eigen_family) {
        ok = ok && chk.max_sample_error <= 4.0 / 1024.0;
        worst = std::max(worst, chk.max_sample_error);
        ok = ok && std::abs(chk.eigenvalue - std::pow(0.5, chk.alpha)) <= 4.0 / 1024.0;
    }
    detail = "max per-sample error " + std::to_string(worst) + " (bound 0.00390625)";
    return ok;
}

bool criterion_3_lattice_n4(std::string& detail) {
    PresetParams params;
    params.n = 4;
    PresetSpec spec = make_preset("paper:lattice", params);
    auto lattice = enumerate_parts(spec.cone);
    SpectrumScan scan = spectrum_scan(spec.map, spec.cone, lattice);
    const auto& weights = std::get<LatticeMap>(spec.map).weights;
    bool ok = scan.pairs.size() == 15 && lattice.size() == 16;
    for (const auto& pair : scan.pairs) {
        ok = ok && pair.part.has_value();
        if (!pair.part) continue;
        ok = ok && pair.value == weights[pair.part->bits - 1];  // exact
        ok = ok && pair.residual < 1e-12;
    }
    ok = ok && scan.distinct_values.size() == 15 && scan.bound_satisfied;
    detail = std::to_string(scan.pairs.size()) + " pairs, " +
             std::to_string(scan.distinct_values.size()) + " distinct, m=16";
    return ok;
}

bool criterion_4_thm55_square(std::string& detail) {
    auto cone = ConeDescriptor::square_cone();
    auto lattice = enumerate_parts(cone);
    auto built = build_thm55_map(cone, lattice);
    bool ok = built.pairs.size() == 9;
    double min_gap = 1e300;
    for (std::size_t i = 0; i < built.pairs.size(); ++i) {
        ok = ok && built.pairs[i].residual < 1e-9;
        for (std::size_t j = i + 1; j < built.pairs.size(); ++j)
            min_gap = std::min(min_gap, std::abs(built.pairs[i].value - built.pairs[j].value));
    }
    ok = ok && min_gap > 1e-6;
    SpectrumScan scan = spectrum_scan(built.map, cone, lattice);
    ok = ok && scan.pairs.size() == 9;
    int recovered = 0;
    for (const auto& expected : built.pairs)
        for (const auto& found : scan.pairs)
            if (found.part == expected.part && std::abs(found.value - expected.value) <= 1e-6) ++recovered;
    ok = ok && recovered == 9;
    detail = "9 pairs, min gap " + std::to_string(min_gap) + ", scan recovered " + std::to_string(recovered);
    return ok;
}

bool criterion_5_thm56_k20(std::string& detail) {
    LorentzSeriesOptions opt;
    opt.terms = 20;
    auto built = build_thm56_map(opt);
    const auto& series = std::get<LorentzSeriesMap>(built.map);
    bool ok = built.pairs.size() == 20;
    double worst_resid = 0.0, worst_cross = 0.0;
    std::set<double> values;
    for (int q = 1; q <= 20; ++q) {
        const auto& pair = built.pairs[q - 1];
        worst_resid = std::max(worst_resid, pair.residual);
        values.insert(pair.value);
        for (int k = 1; k <= 20; ++k) {
            if (k == q) continue;
            worst_cross = std::max(worst_cross, std::abs(lorentz_series_term(series, k, pair.vector)));
        }
    }
    ok = ok && worst_resid < 1e-12 && values.size() == 20 && worst_cross <= 1e-15;
    detail = "worst residual " + std::to_string(worst_resid) + ", worst cross term " +
             std::to_string(worst_cross);
    return ok;
}

bool criterion_6_psd_example(std::string& detail) {
    PresetSpec spec = make_preset("paper:psd-f");
    auto pairs = psd_trace_boundary_spectrum(spec.map, 41);
    bool ok = pairs.size() == 41;
    double worst = 0.0;
    for (const auto& p : pairs) {
        worst = std::max(worst, p.residual);
        ok = ok && p.residual < 1e-8;
    }
    Point id = Point::sym_from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    double fixed_err = (apply_map(spec.map, id) - id).frobenius_norm();
    ok = ok && fixed_err <= 1e-10;
    double mu = cw_upper(spec.map, spec.cone, id);
    ok = ok && std::abs(mu - 1.0) <= 1e-10;
    detail = "worst Z residual " + std::to_string(worst) + ", |f(X1)-X1| = " + std::to_string(fixed_err) +
             ", cw_upper(X1) = " + std::to_string(mu);
    return ok;
}

bool criterion_7_sandwich(std::string& detail) {
    Rng rng(20260811);
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        Rng r = rng.fork(trial);
        int family = static_cast<int>(r.index(5));
        MapDescriptor map = make_preset("zero").map;
        ConeDescriptor cone = ConeDescriptor::orthant(2);
        switch (family) {
            case 0: {  // strictly positive linear map
                int n = 2 + static_cast<int>(r.index(3));
                std::vector<std::vector<double>> rows(n, std::vector<double>(n));
                for (auto& row : rows)
                    for (double& v : row) v = r.uniform(0.05, 1.0);
                map = make_linear(rows);
                cone = ConeDescriptor::orthant(n);
                break;
            }
            case 1: {
                int n = 2 + static_cast<int>(r.index(3));
                auto weights = default_lattice_weights(n);
                double scale = r.log_uniform(0.5, 2.0);  // common scale keeps monotonicity
                for (double& w : weights) w *= scale;
                map = make_lattice(n, weights);
                cone = ConeDescriptor::orthant(n);
                break;
            }
            case 2: {  // constructive polyhedral map
                cone = (r.index(2) == 0) ? ConeDescriptor::square_cone() : ConeDescriptor::orthant(2);
                auto lattice = enumerate_parts(cone);
                PolyhedralEigenMapOptions opt;
                opt.r = (r.index(2) == 0) ? -1.0 : -2.0;
                auto built = build_thm55_map(cone, lattice, opt);
                map = built.map;
                break;
            }
            case 3: {
                LorentzSeriesOptions opt;
                opt.terms = 2 + static_cast<int>(r.index(9));
                auto built = build_thm56_map(opt);
                map = built.map;
                cone = ConeDescriptor::lorentz(3);
                break;
            }
            case 4: {
                map = make_preset(r.index(2) == 0 ? "paper:psd-f" : "paper:psd-g").map;
                cone = ConeDescriptor::psd(3);
                break;
            }
        }
        RadiusParams params;
        params.kmax = 48;
        params.samples = 12;
        params.seed = r.next_u64();
        RadiusEstimate est = bonsall_radius(map, cone, params);

        Point probe = sample_unit(cone, r.next_u64());
        double a = cw_lower(map, cone, probe);
        Point y = canonical_interior_point(cone);
        double mu = cw_upper(map, cone, y);
        if (!(a <= est.value && est.value <= mu + 1e-8)) {
            detail = "trial " + std::to_string(trial) + " family " + std::to_string(family) +
                     ": a=" + std::to_string(a) + " value=" + std::to_string(est.value) +
                     " mu=" + std::to_string(mu);
            return false;
        }
        ++checked;
    }
    detail = std::to_string(checked) + " triples sandwiched";
    return checked == 500;
}

bool criterion_8_property_suite(std::string& detail) {
    struct Entry {
        const char* preset;
        PresetParams params;
    };
    std::vector<Entry> entries = {{"paper:T", {}},     {"paper:Tk", {}},    {"paper:lattice", {}},
                                  {"paper:psd-f", {}}, {"paper:psd-g", {}}, {"paper:thm55", {}},
                                  {"paper:thm56", {}}, {"golden", {}}};
    entries[2].params.n = 3;
    entries[6].params.terms = 10;
    bool ok = true;
    for (const auto& entry : entries) {
        PresetSpec spec = make_preset(entry.preset, entry.params);
        auto mono = check_order_preserving(spec.map, spec.cone, 1000, 811, 1e-8);
        auto homo = check_homogeneous(spec.map, spec.cone, 1000, 811, 1e-8);
        if (mono.violations != 0 || homo.violations != 0) {
            detail = std::string(entry.preset) + ": " + std::to_string(mono.violations) + "/" +
                     std::to_string(homo.violations) + " violations";
            ok = false;
        }
    }
    PresetSpec bad = make_preset("adversarial-linear");
    auto control = check_order_preserving(bad.map, bad.cone, 1000, 811, 1e-8);
    ok = ok && control.violations >= 1;
    if (detail.empty())
        detail = "0 violations across 8 maps; adversarial control " + std::to_string(control.violations);
    return ok;
}

bool criterion_9_thompson_bound(std::string& detail) {
    Rng rng(43);
    double worst_slack = 1e300;
    for (int trial = 0; trial < 1000; ++trial) {
        bool orthant_case = trial % 2 == 0;
        ConeDescriptor cone = orthant_case ? ConeDescriptor::orthant(5) : ConeDescriptor::lorentz(3);
        Point x = orthant_case
                      ? Point::dense({rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0),
                                      rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0)})
                      : Point::dense({0.4 * rng.uniform(-1.0, 1.0), 0.4 * rng.uniform(-1.0, 1.0), 1.0});
        double r = boundary_distance(cone, x);
        Point dir = Point::zeros_like(x);
        for (double& v : dir.data) v = rng.normal();
        double dn = dir.euclidean_norm();
        Point y = x + dir * (rng.uniform(0.05, 0.9) * r / dn);
        double d = (x - y).euclidean_norm();
        double bound = std::log(std::max((r + d) / r, r / (r - d)));
        double dt = thompson_distance(cone, x, y);
        worst_slack = std::min(worst_slack, bound - dt);
        if (!(bound - dt >= -1e-10)) {
            detail = "trial " + std::to_string(trial) + ": d_T exceeds the bound by " +
                     std::to_string(dt - bound);
            return false;
        }
    }
    detail = "1000 pairs, worst slack " + std::to_string(worst_slack);
    return true;
}

bool criterion_10_parts(std::string& detail) {
    bool ok = true;
    for (int n = 1; n <= 5; ++n) {
        auto lattice = enumerate_parts(ConeDescriptor::orthant(n));
        ok = ok && lattice.size() == (1u << n);
    }
    for (const auto& cone : {ConeDescriptor::orthant(3), ConeDescriptor::square_cone()}) {
        auto lattice = enumerate_parts(cone);
        for (const auto& p : lattice.parts) {
            if (p.signature.bits == 0) continue;
            ok = ok && part_of(cone, p.witness) == p.signature;
            for (const auto& q : lattice.parts) {
                if (q.signature.bits == 0) continue;
                bool finite = std::isfinite(upper_ratio(cone, p.witness, q.witness));
                ok = ok && finite == part_leq(p.signature, q.signature);
            }
        }
    }
    auto square = enumerate_parts(ConeDescriptor::square_cone());
    ok = ok && square.size() == 10;
    detail = "orthants 2^n for n<=5; square cone " + std::to_string(square.size()) + " parts";
    return ok;
}

bool criterion_11_upper_semicontinuity(std::string& detail) {
    Rng rng(1109);
    double worst_gap = -1e300;
    for (int fam = 0; fam < 20; ++fam) {
        Rng r = rng.fork(fam);
        std::vector<std::vector<double>> a(3, std::vector<double>(3));
        for (auto& row : a)
            for (double& v : row) v = r.uniform(0.1, 1.0);
        MapDescriptor base = make_linear(a);
        ConeDescriptor cone = ConeDescriptor::orthant(3);
        std::vector<std::pair<int, MapDescriptor>> family;
        for (int k = 1; k <= 5; ++k) {
            auto b = a;
            for (auto& row : b)
                for (double& v : row) v += r.uniform(0.0, 1e-5);
            family.push_back({k, make_linear(b)});
        }
        PerturbationParams params;
        params.radius.samples = 16;
        auto rep = perturbation_run(base, family, cone, params);
        double radius = rep.base_radius.value;
        for (const auto& row : rep.rows) {
            if (row.distance.sampled >= 1e-3) {
                detail = "family " + std::to_string(fam) + " distance not below 1e-3";
                return false;
            }
            worst_gap = std::max(worst_gap, row.radius.value - radius);
            if (!(row.radius.value <= radius + 1e-4 * (1.0 + radius))) {
                detail = "family " + std::to_string(fam) + ": r_k exceeds r by " +
                         std::to_string(row.radius.value - radius);
                return false;
            }
        }
    }
    detail = "20 families, max r_k - r = " + std::to_string(worst_gap);
    return true;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "section 3 discontinuity reproduced (exact r(T)=1/2, collapsing r(T_k), shrinking brackets)",
         criterion_1_section3_discontinuity},
        {2, "power-function eigen-family on the 1024 grid within the interpolation bound",
         criterion_2_eigen_family},
        {3, "lattice map n=4: 15 exact eigenpairs = m-1", criterion_3_lattice_n4},
        {4, "square-cone construction: 9 distinct certified eigenpairs, independently recovered",
         criterion_4_thm55_square},
        {5, "Lorentz series K=20: residuals < 1e-12, distinct values, vanishing cross terms",
         criterion_5_thm56_k20},
        {6, "psd trace map: boundary family, interior fixed point, unit upper certificate",
         criterion_6_psd_example},
        {7, "certificate sandwich across 500 random map/cone/probe triples", criterion_7_sandwich},
        {8, "monotonicity/homogeneity: clean across built-ins, violated by the control",
         criterion_8_property_suite},
        {9, "Thompson norm-vs-metric bound on 1000 interior pairs", criterion_9_thompson_bound},
        {10, "parts lattices: counts, witness round-trips, domination = inclusion", criterion_10_parts},
        {11, "upper semicontinuity across 20 random perturbation families",
         criterion_11_upper_semicontinuity},
    };

    for (const auto& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        report(c.number, c.label, ok, detail);
    }

    if (g_failures == 0) {
        std::printf("all %zu criteria passed\n", criteria.size());
        return 0;
    }
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
}
