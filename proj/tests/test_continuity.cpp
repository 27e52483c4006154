#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "conespec/continuity.hpp"
#include "conespec/errors.hpp"
#include "conespec/rng.hpp"

using namespace conespec;

namespace {

// Closed-form Lorentz(3) membership oracle used by the boundary probe:
// x_k - lambda*x is in the cone iff the last coordinate dominates the norm
// of the first two.
bool lorentz_member(double a, double b, double c) { return c >= std::hypot(a, b); }

std::vector<std::pair<int, MapDescriptor>> section3_family(int k_from, int k_to) {
    std::vector<std::pair<int, MapDescriptor>> fam;
    for (int k = k_from; k <= k_to; ++k) fam.push_back({k, make_composition(InnerDeformation::PhiK, k)});
    return fam;
}

}  // namespace

TEST_CASE("map distance: identical maps and the analytic bracket") {
    auto cone = ConeDescriptor::grid_convex(1024);
    auto halving = make_composition(InnerDeformation::Halving);
    MapDistance self = map_distance(halving, halving, cone, 16, 1);
    CHECK(self.sampled == 0.0);
    CHECK_FALSE(self.bracket.has_value());

    auto t3 = make_composition(InnerDeformation::PhiK, 3);
    MapDistance d = map_distance(halving, t3, cone, 64, 1);
    REQUIRE(d.bracket.has_value());
    CHECK(d.bracket->first == doctest::Approx(7.0 / 64.0).epsilon(1e-14));
    CHECK(d.bracket->second == doctest::Approx(7.0 / 32.0).epsilon(1e-14));
    CHECK(d.sampled >= d.bracket->first - 1e-12);
    CHECK(d.sampled <= d.bracket->second + 1e-12);
}

TEST_CASE("map distance bounds a small linear perturbation") {
    auto cone = ConeDescriptor::orthant(3);
    std::vector<std::vector<double>> a = {{0.5, 0.1, 0.0}, {0.2, 0.4, 0.1}, {0.0, 0.3, 0.6}};
    auto f = make_linear(a);
    double e_norm = 0.0;
    auto b = a;
    Rng rng(3);
    for (auto& row : b)
        for (double& v : row) {
            double e = rng.uniform(0.0, 1e-4);
            v += e;
            e_norm += e * e;
        }
    e_norm = std::sqrt(e_norm);
    auto g = make_linear(b);
    MapDistance d = map_distance(f, g, cone, 64, 7);
    CHECK(d.sampled <= e_norm + 1e-12);  // sampled sup of ||Ex|| over the unit ball
    CHECK(d.sampled > 0.0);
}

TEST_CASE("perturbation run classifies the discontinuity family") {
    auto cone = ConeDescriptor::grid_convex(1024);
    auto halving = make_composition(InnerDeformation::Halving);
    PerturbationParams params;
    params.radius.kmax = 32;
    auto rep = perturbation_run(halving, section3_family(3, 8), cone, params);
    CHECK(rep.verdict == Verdict::UpperSemicontinuousOnly);
    CHECK(rep.base_radius.value == 0.5);
    CHECK(rep.distance_source == "analytic-bracket");
    for (const auto& row : rep.rows) CHECK(row.radius.value < 1e-6);
}

TEST_CASE("perturbation run classifies converging linear families") {
    auto cone = ConeDescriptor::orthant(2);
    auto f = make_linear({{2.0, 0.0}, {0.0, 3.0}});
    std::vector<std::pair<int, MapDescriptor>> fam;
    for (int k = 3; k <= 8; ++k)
        fam.push_back({k, make_linear({{2.0 + 1.0 / k, 0.0}, {0.0, 3.0 + 1.0 / k}})});
    auto rep = perturbation_run(f, fam, cone, {});
    CHECK(rep.verdict == Verdict::ContinuousConsistent);
    CHECK(rep.distance_source == "sampled");

    // scaled family of the constructive map: r_k = (1 - 1/k) r
    PresetSpec spec = make_preset("paper:thm55");
    const auto& combo = std::get<PowerMeanComboMap>(spec.map);
    std::vector<std::pair<int, MapDescriptor>> scaled;
    for (int k = 3; k <= 8; ++k) {
        PowerMeanComboMap copy = combo;
        for (auto& term : copy.terms) term.weight *= (1.0 - 1.0 / k);
        scaled.push_back({k, copy});
    }
    auto rep2 = perturbation_run(spec.map, scaled, spec.cone, {});
    CHECK(rep2.verdict == Verdict::ContinuousConsistent);
}

TEST_CASE("perturbation run rejects empty families") {
    auto cone = ConeDescriptor::orthant(2);
    auto f = make_linear({{1.0, 0.0}, {0.0, 1.0}});
    CHECK_THROWS_AS(perturbation_run(f, {}, cone, {}), input_error);
}

TEST_CASE("upper semicontinuity holds across small random perturbation families") {
    Rng rng(29);
    for (int fam = 0; fam < 5; ++fam) {
        std::vector<std::vector<double>> a(3, std::vector<double>(3));
        for (auto& row : a)
            for (double& v : row) v = rng.uniform(0.1, 1.0);
        auto f = make_linear(a);
        auto cone = ConeDescriptor::orthant(3);
        std::vector<std::pair<int, MapDescriptor>> family;
        for (int k = 1; k <= 4; ++k) {
            auto b = a;
            for (auto& row : b)
                for (double& v : row) v += rng.uniform(0.0, 1e-5);
            family.push_back({k, make_linear(b)});
        }
        auto rep = perturbation_run(f, family, cone, {});
        double r = rep.base_radius.value;
        for (const auto& row : rep.rows) {
            CHECK(row.distance.sampled < 1e-3);
            CHECK(row.radius.value <= r + 1e-4 * (1.0 + r));
        }
    }
}

TEST_CASE("section 3 reproduction") {
    auto rep = reproduce_section3({3, 4, 5, 6, 7, 8}, 1024, 32);
    CHECK(rep.base_radius == 0.5);
    CHECK(rep.perturbation.verdict == Verdict::UpperSemicontinuousOnly);
    REQUIRE(rep.rows.size() == 6);
    CHECK(rep.rows[0].phi_at_one == doctest::Approx(25.0 / 64.0).epsilon(1e-14));
    CHECK(rep.rows[0].dist_lo == doctest::Approx(7.0 / 64.0).epsilon(1e-13));
    CHECK(rep.rows[0].dist_hi == doctest::Approx(7.0 / 32.0).epsilon(1e-13));
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        CHECK(rep.rows[i].radius_estimate < 1e-6);
        if (i > 0) CHECK(rep.rows[i].dist_hi < rep.rows[i - 1].dist_hi);
    }
    REQUIRE(rep.eigen_family.size() == 4);
    CHECK(rep.eigen_family[0].alpha == 1.0);
    CHECK(rep.eigen_family[0].eigenvalue == 0.5);  // exact on a power-of-two grid
    for (const auto& chk : rep.eigen_family) {
        CHECK(chk.max_sample_error <= 4.0 / 1024.0);
        CHECK(chk.eigenvalue == doctest::Approx(std::pow(0.5, chk.alpha)).epsilon(1e-6));
    }
    CHECK(rep.warnings.empty());
}

TEST_CASE("section 3 grid warnings and validation") {
    auto rep = reproduce_section3({11}, 1024, 32);  // 2^-11 < 1/1024
    CHECK(rep.warnings.size() == 1);
    CHECK_THROWS_AS(reproduce_section3({3}, 1000, 32), input_error);  // not a power of two
    CHECK_THROWS_AS(reproduce_section3({2}, 1024, 32), input_error);
    CHECK_THROWS_AS(reproduce_section3({}, 1024, 32), input_error);
}

TEST_CASE("condition G probe on interior and boundary approaches") {
    auto lorentz = ConeDescriptor::lorentz(3);
    Point interior = Point::dense({0.0, 0.0, 1.0});
    auto gen_interior = [](int j) { return Point::dense({1.0 / j, 0.0, 1.0}); };
    auto m = condition_g_probe(lorentz, interior, gen_interior, 1000, 0.9);
    REQUIRE(m.has_value());
    CHECK(*m == 10);  // 0.1 >= 1/j exactly from j = 10

    // tangential approach along the boundary circle: the oracle says every
    // term fails, so no stabilization index exists
    Point boundary = Point::dense({1.0, 0.0, 1.0});
    auto gen_boundary = [](int j) {
        return Point::dense({std::cos(1.0 / j), std::sin(1.0 / j), 1.0});
    };
    for (int j : {1, 10, 100, 1000}) {
        Point xk = gen_boundary(j);
        CHECK_FALSE(lorentz_member(xk.data[0] - 0.9 * boundary.data[0], xk.data[1] - 0.9 * boundary.data[1],
                                   xk.data[2] - 0.9 * boundary.data[2]));
    }
    // at zero tolerance, matching the exact oracle; the default tolerance
    // would swallow the O(1/j^2) tangential failures past j ~ 6e4
    auto none = condition_g_probe(lorentz, boundary, gen_boundary, 1000000, 0.9, 0.0);
    CHECK_FALSE(none.has_value());

    // constant sequence stabilizes immediately
    auto orthant = ConeDescriptor::orthant(2);
    Point x = Point::dense({1.0, 2.0});
    std::vector<Point> constant(5, x);
    auto m1 = condition_g_probe(orthant, x, constant, 0.9);
    REQUIRE(m1.has_value());
    CHECK(*m1 == 1);

    CHECK_THROWS_AS(condition_g_probe(orthant, x, constant, 1.2), input_error);
}
