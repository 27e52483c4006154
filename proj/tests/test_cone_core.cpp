#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "conespec/cone.hpp"
#include "conespec/errors.hpp"
#include "conespec/rng.hpp"
#include "conespec/sym_eigen.hpp"

using namespace conespec;

namespace {

// Closed-form 2x2 symmetric eigenvalues, the independent oracle for the small
// PSD membership cases.
std::pair<double, double> eig2x2(double a, double b, double d) {
    double tr = a + d;
    double disc = std::sqrt((a - d) * (a - d) + 4.0 * b * b);
    return {0.5 * (tr - disc), 0.5 * (tr + disc)};
}

Point interior_orthant_point(Rng& rng, int n) {
    std::vector<double> v(n);
    for (double& e : v) e = rng.uniform(0.1, 1.0);
    return Point::dense(std::move(v));
}

}  // namespace

TEST_CASE("point construction validates shape and finiteness") {
    CHECK_THROWS_AS(Point::dense({}), input_error);
    CHECK_THROWS_AS(Point::dense({1.0, std::nan("")}), input_error);
    CHECK_THROWS_AS(Point::sym(2, {1.0, 2.0}), input_error);
    CHECK_THROWS_AS(Point::grid({1.0}), input_error);
    Point m = Point::sym_from_rows({{1.0, 2.0}, {2.0, 3.0}});
    CHECK(m.sym_at(0, 1) == 2.0);
    CHECK(m.sym_at(1, 0) == 2.0);
    CHECK_THROWS_AS(Point::sym_from_rows({{1.0, 2.0}, {0.0, 3.0}}), input_error);
}

TEST_CASE("orthant membership") {
    auto cone = ConeDescriptor::orthant(2);
    CHECK(contains(cone, Point::dense({1.0, 2.0}), 0.0));
    CHECK_FALSE(contains(cone, Point::dense({1.0, -2.0})));
    CHECK(contains(cone, Point::dense({0.0, 0.0})));
}

TEST_CASE("psd membership agrees with the characteristic polynomial oracle") {
    auto cone = ConeDescriptor::psd(2);
    // [[1,2],[2,1]] has eigenvalues {3, -1} by the oracle
    auto [lo, hi] = eig2x2(1.0, 2.0, 1.0);
    CHECK(lo == doctest::Approx(-1.0));
    CHECK(hi == doctest::Approx(3.0));
    CHECK_FALSE(contains(cone, Point::sym_from_rows({{1.0, 2.0}, {2.0, 1.0}})));
    CHECK(contains(cone, Point::sym_from_rows({{1.0, 0.5}, {0.5, 1.0}})));
}

TEST_CASE("grid convexity membership") {
    auto cone = ConeDescriptor::grid_convex(4);
    CHECK(contains(cone, Point::grid({0.0, 0.25, 0.5, 0.75, 1.0}), 0.0));  // g(t) = t
    // sqrt(t) is strongly concave: rejected even at the relaxed second-difference scale
    int n = 64;
    std::vector<double> v(n + 1);
    for (int j = 0; j <= n; ++j) v[j] = std::sqrt(static_cast<double>(j) / n);
    CHECK_FALSE(contains(ConeDescriptor::grid_convex(n), Point::grid(v)));
    // f(0) must vanish
    CHECK_FALSE(contains(cone, Point::grid({0.5, 0.6, 0.7, 0.85, 1.0})));
}

TEST_CASE("leq matches membership of the difference") {
    auto orthant = ConeDescriptor::orthant(2);
    CHECK(leq(orthant, Point::dense({1.0, 1.0}), Point::dense({2.0, 1.0})));
    CHECK_FALSE(leq(orthant, Point::dense({1.0, 1.0}), Point::dense({2.0, 0.0})));
    auto psd = ConeDescriptor::psd(2);
    Point id = Point::sym_from_rows({{1.0, 0.0}, {0.0, 1.0}});
    CHECK(leq(psd, id, Point::sym_from_rows({{2.0, 1.0}, {1.0, 2.0}})));
}

TEST_CASE("order soundness: leq <=> contains(diff) <=> facet inequalities") {
    auto cone = ConeDescriptor::square_cone();
    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        Point x = sample_unit(cone, rng.next_u64()) * rng.log_uniform(0.5, 2.0);
        Point y = sample_unit(cone, rng.next_u64()) * rng.log_uniform(0.5, 2.0);
        bool via_leq = leq(cone, x, y);
        bool via_contains = membership_margin(cone, y - x, std::max(x.euclidean_norm(), y.euclidean_norm())) >= -kDefaultTol;
        bool via_facets = true;
        for (const auto& row : cone.facet_rows()) {
            double fx = 0.0, fy = 0.0;
            for (int i = 0; i < 3; ++i) {
                fx += row[i] * x.data[i];
                fy += row[i] * y.data[i];
            }
            via_facets = via_facets && fx <= fy + kDefaultTol * std::sqrt(2.0) * 2.0;
        }
        CHECK(via_leq == via_contains);
        if (via_leq) CHECK(via_facets);
    }
}

TEST_CASE("upper ratio on the orthant") {
    auto cone = ConeDescriptor::orthant(2);
    CHECK(upper_ratio(cone, Point::dense({1.0, 2.0}), Point::dense({2.0, 1.0})) == doctest::Approx(2.0));
    CHECK(upper_ratio(cone, Point::dense({1.0, 0.0}), Point::dense({0.0, 1.0})) ==
          std::numeric_limits<double>::infinity());
    Point x = Point::dense({0.3, 0.7});
    CHECK(upper_ratio(cone, x, x) == 1.0);
}

TEST_CASE("upper ratio scale covariance") {
    Rng rng(11);
    for (const auto& cone : {ConeDescriptor::orthant(3), ConeDescriptor::lorentz(3)}) {
        for (int t = 0; t < 100; ++t) {
            Point x = sample_unit(cone, rng.next_u64());
            Point y = sample_unit(cone, rng.next_u64());
            double m = upper_ratio(cone, x, y);
            if (!std::isfinite(m)) continue;
            double a = rng.log_uniform(0.1, 10.0), b = rng.log_uniform(0.1, 10.0);
            double scaled = upper_ratio(cone, x * a, y * b);
            CHECK(scaled == doctest::Approx((a / b) * m).epsilon(1e-11));
        }
    }
}

TEST_CASE("thompson distance basics") {
    auto cone = ConeDescriptor::orthant(2);
    CHECK(thompson_distance(cone, Point::dense({1.0, 2.0}), Point::dense({2.0, 1.0})) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    Point x = Point::dense({0.4, 0.9});
    CHECK(thompson_distance(cone, x, x) == 0.0);
    auto line = ConeDescriptor::orthant(1);
    CHECK(thompson_distance(line, Point::dense({2.0}), Point::dense({1.0})) ==
          doctest::Approx(std::log(2.0)));
    // different parts
    CHECK(std::isinf(thompson_distance(cone, Point::dense({1.0, 0.0}), Point::dense({0.0, 1.0}))));
    CHECK(thompson_distance(cone, Point::dense({0.0, 0.0}), Point::dense({0.0, 0.0})) == 0.0);
}

TEST_CASE("thompson metric properties on interior triples") {
    Rng rng(13);
    for (const auto& cone : {ConeDescriptor::orthant(3), ConeDescriptor::lorentz(3)}) {
        for (int t = 0; t < 200; ++t) {
            Point base = canonical_interior_point(cone);
            auto interior = [&](double eps) {
                Point p = base;
                for (double& v : p.data) v += eps * rng.uniform(-0.3, 0.3);
                return p;
            };
            Point x = interior(0.5), y = interior(0.5), z = interior(0.5);
            double dxy = thompson_distance(cone, x, y);
            double dyx = thompson_distance(cone, y, x);
            double dxz = thompson_distance(cone, x, z);
            double dzy = thompson_distance(cone, z, y);
            CHECK(dxy == doctest::Approx(dyx).epsilon(1e-12));
            CHECK(dxy <= dxz + dzy + 1e-9);
            // ratio/metric consistency
            double m = std::max(upper_ratio(cone, x, y), upper_ratio(cone, y, x));
            CHECK(std::exp(dxy) == doctest::Approx(m).epsilon(1e-12));
            // scale invariance
            double a = rng.log_uniform(0.2, 5.0);
            CHECK(thompson_distance(cone, x * a, y * a) == doctest::Approx(dxy).epsilon(1e-11));
        }
    }
}

TEST_CASE("norm-vs-metric bound on interior pairs") {
    Rng rng(17);
    for (const auto& cone : {ConeDescriptor::orthant(5), ConeDescriptor::lorentz(3)}) {
        for (int t = 0; t < 300; ++t) {
            Point x = cone.kind() == ConeKind::Orthant ? interior_orthant_point(rng, 5)
                                                       : Point::dense({0.3 * rng.uniform(-1, 1),
                                                                       0.3 * rng.uniform(-1, 1), 1.0});
            double r = boundary_distance(cone, x);
            REQUIRE(r > 0.0);
            Point u = Point::zeros_like(x);
            for (double& v : u.data) v = rng.normal();
            double un = u.euclidean_norm();
            double step = rng.uniform(0.05, 0.9) * r;
            Point y = x + u * (step / un);
            double d = (x - y).euclidean_norm();
            REQUIRE(d < r);
            double bound = std::log(std::max((r + d) / r, r / (r - d)));
            double dt = thompson_distance(cone, x, y);
            CHECK(dt <= bound + 1e-10);
        }
    }
}

TEST_CASE("sym_sqrt on the paper matrices") {
    // diag(1, alpha) -> diag(1, sqrt(alpha))
    Point m = Point::sym_from_rows({{1.0, 0.0}, {0.0, 0.25}});
    Point s = sym_sqrt(m);
    CHECK(s.sym_at(0, 0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(s.sym_at(1, 1) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(std::abs(s.sym_at(1, 0)) < 1e-13);

    Point id = Point::sym_from_rows({{1.0, 0.0}, {0.0, 1.0}});
    Point sid = sym_sqrt(id);
    CHECK((sid - id).frobenius_norm() < 1e-14);

    // rank-one projections are fixed points
    double c = std::cos(1.1), sn = std::sin(1.1);
    Point z = Point::sym_from_rows({{c * c, c * sn}, {c * sn, sn * sn}});
    CHECK((sym_sqrt(z) - z).frobenius_norm() < 1e-8);

    CHECK_THROWS_AS(sym_sqrt(Point::sym_from_rows({{1.0, 2.0}, {2.0, 1.0}})), domain_error);
}

TEST_CASE("sym_sqrt contract and sampled Loewner monotonicity") {
    Rng rng(23);
    for (int t = 0; t < 100; ++t) {
        auto cone = ConeDescriptor::psd(3);
        Point x = sample_unit(cone, rng.next_u64()) * rng.log_uniform(0.2, 5.0);
        Point d = sample_unit(cone, rng.next_u64()) * rng.log_uniform(0.1, 2.0);
        Point y = x + d;
        Point sx = sym_sqrt(x, 1e-9);
        Point sy = sym_sqrt(y, 1e-9);
        // contract: ||S*S - M||_inf <= 10 tol (1 + ||M||)
        auto sq_err = [](const Point& s, const Point& m) {
            const int n = m.dim;
            double err = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j <= i; ++j) {
                    double acc = 0.0;
                    for (int k = 0; k < n; ++k) acc += s.sym_at(i, k) * s.sym_at(k, j);
                    err = std::max(err, std::abs(acc - m.sym_at(i, j)));
                }
            return err;
        };
        CHECK(sq_err(sx, x) <= 10.0 * 1e-9 * (1.0 + x.frobenius_norm()));
        // Loewner property: X <= Y implies sqrt(X) <= sqrt(Y)
        CHECK(sym_min_eigenvalue(sy - sx) >= -1e-7);
    }
}

TEST_CASE("sample_unit honors each cone contract") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto orthant = ConeDescriptor::orthant(3);
        Point a = sample_unit(orthant, seed);
        CHECK(contains(orthant, a, 1e-12));
        CHECK(a.euclidean_norm() == doctest::Approx(1.0).epsilon(1e-12));

        auto grid = ConeDescriptor::grid_convex(64);
        Point g = sample_unit(grid, seed);
        CHECK(contains(grid, g, 1e-12));
        CHECK(g.data[0] == 0.0);
        CHECK(g.data.back() == doctest::Approx(1.0).epsilon(1e-12));  // sup norm of an increasing convex function

        auto psd = ConeDescriptor::psd(3);
        Point m = sample_unit(psd, seed);
        CHECK(contains(psd, m, 1e-10));
        CHECK(m.frobenius_norm() == doctest::Approx(1.0).epsilon(1e-12));

        auto lorentz = ConeDescriptor::lorentz(4);
        Point l = sample_unit(lorentz, seed);
        CHECK(contains(lorentz, l, 1e-12));
        CHECK(l.euclidean_norm() == doctest::Approx(1.0).epsilon(1e-12));

        auto square = ConeDescriptor::square_cone();
        Point s = sample_unit(square, seed);
        CHECK(contains(square, s, 1e-10));

        // determinism
        Point again = sample_unit(orthant, seed);
        CHECK(again.data == a.data);
    }
}

TEST_CASE("dominates_at_level") {
    auto cone = ConeDescriptor::orthant(2);
    CHECK(dominates_at_level(cone, Point::dense({1.0, 1.0}), Point::dense({0.95, 1.05}), 0.9));
    CHECK_FALSE(dominates_at_level(cone, Point::dense({1.0, 1.0}), Point::dense({0.5, 1.0}), 0.9));
    CHECK_THROWS_AS(dominates_at_level(cone, Point::dense({1.0, 1.0}), Point::dense({1.0, 1.0}), 1.5),
                    input_error);

    // interior Lorentz point: domination holds once the sequence is close enough
    auto lorentz = ConeDescriptor::lorentz(3);
    Point x = Point::dense({0.0, 0.0, 1.0});
    bool eventually = false;
    for (int k = 1; k <= 100; ++k) {
        Point xk = Point::dense({1.0 / k, 0.0, 1.0});
        if (dominates_at_level(lorentz, x, xk, 0.9)) {
            eventually = true;
            break;
        }
    }
    CHECK(eventually);
}

TEST_CASE("psd thompson across the boundary") {
    auto cone = ConeDescriptor::psd(2);
    Point z0 = Point::sym_from_rows({{1.0, 0.0}, {0.0, 0.0}});
    Point z1 = Point::sym_from_rows({{0.0, 0.0}, {0.0, 1.0}});
    CHECK(std::isinf(thompson_distance(cone, z0, z1)));
    CHECK(upper_ratio(cone, z0 * 3.0, z0) == doctest::Approx(3.0));  // proportional boundary pair
}

TEST_CASE("polyhedral construction validation") {
    CHECK_THROWS_AS(ConeDescriptor::polyhedral({{1.0, 0.0}, {2.0, 0.0}}), input_error);  // proportional
    CHECK_THROWS_AS(ConeDescriptor::polyhedral({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}), input_error);  // not pointed
    auto square = ConeDescriptor::square_cone();
    CHECK(square.facet_count() == 4);
    CHECK(square.interior_witness().has_value());
    CHECK(interior_margin(square, *square.interior_witness()) > 0.0);
}
