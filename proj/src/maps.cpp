#include "conespec/maps.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

#include "conespec/errors.hpp"
#include "conespec/rng.hpp"
#include "conespec/sym_eigen.hpp"

namespace conespec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

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

struct ApplyVisitor {
    const Point& x;

    Point operator()(const LinearMap& m) const {
        if (x.kind != PointKind::DenseVector || x.dim != m.n)
            throw input_error("linear map applied to a point of the wrong space");
        std::vector<double> y(m.n, 0.0);
        for (int i = 0; i < m.n; ++i) {
            double s = 0.0;
            for (int j = 0; j < m.n; ++j) s += m.matrix[static_cast<std::size_t>(i) * m.n + j] * x.data[j];
            y[i] = s;
        }
        return Point::dense(std::move(y));
    }

    Point operator()(const LatticeMap& m) const {
        if (x.kind != PointKind::DenseVector || x.dim != m.n)
            throw input_error("lattice map applied to a point of the wrong space");
        std::vector<double> y(m.n, 0.0);
        const std::uint32_t full = (1u << m.n);
        for (std::uint32_t mask = 1; mask < full; ++mask) {
            double mn = kInf;
            for (int i = 0; i < m.n; ++i)
                if ((mask >> i) & 1u) mn = std::min(mn, x.data[i]);
            double level = m.weights[mask - 1] * mn;
            for (int i = 0; i < m.n; ++i)
                if ((mask >> i) & 1u) y[i] = std::max(y[i], level);
        }
        return Point::dense(std::move(y));
    }

    Point operator()(const PowerMeanComboMap& m) const {
        if (x.kind != PointKind::DenseVector || m.facets.empty() ||
            x.dim != static_cast<int>(m.facets[0].size()))
            throw input_error("power-mean map applied to a point of the wrong space");
        Point y = Point::dense(std::vector<double>(x.dim, 0.0));
        for (const auto& term : m.terms) {
            double mr = power_mean(term.signature, m.r, m.facets, x);
            if (mr == 0.0) continue;
            y += (term.weight * mr) * term.direction;
        }
        return y;
    }

    Point operator()(const PsdTraceMap& m) const {
        if (x.kind != PointKind::SymMatrix || x.dim != m.a.dim)
            throw input_error("psd trace map applied to a point of the wrong space");
        double tr = sym_trace_product(x, m.a);
        double scale_tol = 1e-9 * (1.0 + x.frobenius_norm());
        if (tr < -scale_tol) throw domain_error("tr(XA) is negative");
        tr = std::max(tr, 0.0);
        Point s = sym_sqrt(x * tr, 1e-9);
        if (!m.b) return s;
        // B^T S B with packed symmetric B
        const int n = x.dim;
        std::vector<double> bf = m.b->sym_full();
        std::vector<double> sf = s.sym_full();
        std::vector<double> t(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                double bki = bf[static_cast<std::size_t>(k) * n + i];  // (B^T)_{ik}
                if (bki == 0.0) continue;
                for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(i) * n + j] += bki * sf[static_cast<std::size_t>(k) * n + j];
            }
        std::vector<double> packed(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k) acc += t[static_cast<std::size_t>(i) * n + k] * bf[static_cast<std::size_t>(k) * n + j];
                packed[sym_packed_index(i, j)] = acc;
            }
        return Point::sym(n, std::move(packed));
    }

    Point operator()(const CompositionMap& m) const {
        if (x.kind != PointKind::GridFunction)
            throw input_error("composition operator applied to a non-grid point");
        const int n = x.dim;
        std::vector<double> y(n + 1, 0.0);
        for (int j = 0; j <= n; ++j) {
            double t = static_cast<double>(j) / n;
            y[j] = grid_interpolate(x, composition_phi(m, t));
        }
        return Point::grid(std::move(y));
    }

    Point operator()(const LorentzSeriesMap& m) const {
        if (x.kind != PointKind::DenseVector || x.dim != 3)
            throw input_error("lorentz series map lives on Lorentz(3)");
        Point y = Point::dense({0.0, 0.0, 0.0});
        for (int k = 1; k <= static_cast<int>(m.angles.size()); ++k) {
            double c = lorentz_series_term(m, k, x);
            if (c == 0.0) continue;
            y += c * lorentz_series_direction(m, k);
        }
        return y;
    }
};

}  // namespace

MapDescriptor make_linear(const std::vector<std::vector<double>>& rows) {
    int n = static_cast<int>(rows.size());
    if (n < 1) throw input_error("linear map needs a nonempty matrix");
    LinearMap m;
    m.n = n;
    m.matrix.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n) throw input_error("linear map matrix must be square");
        for (double v : row) {
            if (!std::isfinite(v)) throw input_error("linear map entries must be finite");
            m.matrix.push_back(v);
        }
    }
    return m;
}

MapDescriptor make_lattice(int n, std::vector<double> weights) {
    if (n < 1 || n > 16) throw input_error("lattice map dimension must be in [1, 16]");
    const std::uint32_t count = (1u << n) - 1;
    if (weights.size() != count) throw input_error("lattice map needs one weight per nonempty subset");
    for (double w : weights)
        if (!(w > 0.0)) throw input_error("lattice weights must be positive");
    for (std::uint32_t i = 1; i <= count; ++i)
        for (std::uint32_t j = 1; j <= count; ++j)
            if (i != j && (i & j) == i && !(weights[i - 1] < weights[j - 1]))
                throw input_error("lattice weights must be strictly increasing along subset inclusion");
    LatticeMap m;
    m.n = n;
    m.weights = std::move(weights);
    return m;
}

MapDescriptor make_power_mean_combo(double r, std::vector<std::vector<double>> facets,
                                    std::vector<PowerMeanTerm> terms) {
    if (!(r < 0.0)) throw input_error("power mean exponent must be negative (or -inf)");
    if (facets.empty()) throw input_error("power-mean combo needs facet functionals");
    const int n = static_cast<int>(facets[0].size());
    for (const auto& t : terms) {
        if (!(t.weight > 0.0)) throw input_error("term weights must be positive");
        if (t.signature.bits == 0) throw input_error("term signatures must be nonempty");
        if (t.direction.kind != PointKind::DenseVector || t.direction.dim != n)
            throw input_error("term direction has the wrong dimension");
    }
    PowerMeanComboMap m;
    m.r = r;
    m.facets = std::move(facets);
    m.terms = std::move(terms);
    return m;
}

MapDescriptor make_psd_trace(Point a, std::optional<Point> b) {
    if (a.kind != PointKind::SymMatrix) throw input_error("psd trace map needs a symmetric A");
    if (b && (b->kind != PointKind::SymMatrix || b->dim != a.dim))
        throw input_error("psd trace map B must match A's dimension");
    return PsdTraceMap{std::move(a), std::move(b)};
}

MapDescriptor make_composition(InnerDeformation inner, int k,
                               std::vector<std::pair<double, double>> breakpoints) {
    CompositionMap m;
    m.inner = inner;
    if (inner == InnerDeformation::PhiK) {
        if (k < 3 || k > 60) throw input_error("deformation index k must lie in [3, 60]");
        m.k = k;
    } else if (inner == InnerDeformation::PiecewiseLinear) {
        if (breakpoints.size() < 2) throw input_error("piecewise-linear deformation needs >= 2 breakpoints");
        if (breakpoints.front().first != 0.0 || breakpoints.front().second != 0.0)
            throw input_error("deformation must start at (0, 0)");
        if (breakpoints.back().first != 1.0) throw input_error("deformation must be defined up to t = 1");
        for (std::size_t i = 1; i < breakpoints.size(); ++i) {
            if (!(breakpoints[i].first > breakpoints[i - 1].first) ||
                breakpoints[i].second < breakpoints[i - 1].second)
                throw input_error("deformation breakpoints must be strictly increasing in t and nondecreasing in value");
            if (breakpoints[i].second < 0.0 || breakpoints[i].second > 1.0)
                throw input_error("deformation values must stay in [0, 1]");
        }
        m.breakpoints = std::move(breakpoints);
    }
    return m;
}

MapDescriptor make_lorentz_series(std::vector<double> angles, std::vector<double> weights) {
    const int terms = static_cast<int>(angles.size());
    if (terms < 1 || terms > 40) throw input_error("series length must lie in [1, 40]");
    if (weights.size() != angles.size()) throw input_error("one weight per angle required");
    for (double a : angles)
        if (a == 0.0) throw input_error("angle 0 is reserved for the limit functional");
    for (std::size_t i = 0; i < angles.size(); ++i)
        for (std::size_t j = i + 1; j < angles.size(); ++j)
            if (angles[i] == angles[j]) throw input_error("angles must be pairwise distinct");
    for (double w : weights)
        if (!(w > 0.0 && w <= 1.0)) throw input_error("weights must lie in (0, 1]");
    return LorentzSeriesMap{std::move(angles), std::move(weights)};
}

Point apply_map(const MapDescriptor& map, const Point& x) { return std::visit(ApplyVisitor{x}, map); }

double phi_k_epsilon(int k) {
    if (k < 3 || k > 60) throw input_error("deformation index k must lie in [3, 60]");
    return 0.5 * (1.0 - 1.0 / (std::ldexp(1.0, k) - 1.0));
}

double phi_k_eval(int k, double t) {
    if (t < 0.0 || t > 1.0) throw input_error("phi_k is defined on [0, 1]");
    double b = std::ldexp(1.0, -k);
    if (t <= b) return t * t;
    return b * b + phi_k_epsilon(k) * (t - b);
}

double composition_phi(const CompositionMap& map, double t) {
    switch (map.inner) {
        case InnerDeformation::Halving: return 0.5 * t;
        case InnerDeformation::PhiK: return phi_k_eval(map.k, t);
        case InnerDeformation::PiecewiseLinear: {
            const auto& bp = map.breakpoints;
            if (t <= bp.front().first) return bp.front().second;
            for (std::size_t i = 1; i < bp.size(); ++i) {
                if (t <= bp[i].first) {
                    double f = (t - bp[i - 1].first) / (bp[i].first - bp[i - 1].first);
                    return bp[i - 1].second + f * (bp[i].second - bp[i - 1].second);
                }
            }
            return bp.back().second;
        }
    }
    return 0.0;
}

double power_mean(const PartSignature& I, double r, const std::vector<std::vector<double>>& facets,
                  const Point& x) {
    if (I.bits == 0) throw input_error("power mean over an empty index set");
    if (!(r < 0.0)) throw input_error("power mean exponent must be negative (or -inf)");
    const double scale = x.euclidean_norm();
    double mn = kInf;
    std::vector<double> vals;
    vals.reserve(facets.size());
    for (std::size_t i = 0; i < facets.size(); ++i) {
        if (!I.contains_index(static_cast<int>(i) + 1)) continue;
        double v = row_dot(facets[i], x.data);
        // Witness coordinates carry ~1e-12 relative noise on facets that are
        // exactly zero in the construction; clamp so those terms vanish.
        if (v <= 1e-10 * row_norm(facets[i]) * scale) return 0.0;
        vals.push_back(v);
        mn = std::min(mn, v);
    }
    if (vals.empty()) throw input_error("signature indexes facets that do not exist");
    if (std::isinf(r)) return mn;
    double s = 0.0;
    for (double v : vals) s += std::pow(v / mn, r);
    return mn * std::pow(s, 1.0 / r);
}

Point lorentz_series_direction(const LorentzSeriesMap& map, int k) {
    double a = map.angles.at(k - 1);
    const double inv_sqrt2 = 0.7071067811865476;
    return Point::dense({-std::cos(a) * inv_sqrt2, -std::sin(a) * inv_sqrt2, inv_sqrt2});
}

double lorentz_series_term(const LorentzSeriesMap& map, int k, const Point& x) {
    const int terms = static_cast<int>(map.angles.size());
    double mn = kInf;
    for (int m = 0; m <= terms; ++m) {
        if (m == k) continue;
        double angle = (m == 0) ? 0.0 : map.angles[m - 1];
        double v = x.data[0] * std::cos(angle) + x.data[1] * std::sin(angle) + x.data[2];
        mn = std::min(mn, v);
    }
    mn = std::max(mn, 0.0);  // the functionals are nonnegative on the cone
    return std::ldexp(map.weights[k - 1], -k) * mn;
}

// ---------------------------------------------------------------------------

PolyhedralEigenMapResult build_thm55_map(const ConeDescriptor& cone, const PartsLattice& lattice,
                                         const PolyhedralEigenMapOptions& opt) {
    const auto& facets = cone.facet_rows();
    std::vector<const Part*> nonzero;
    for (const auto& p : lattice.parts)
        if (p.signature.bits != 0) nonzero.push_back(&p);
    std::stable_sort(nonzero.begin(), nonzero.end(), [](const Part* a, const Part* b) {
        if (a->height != b->height) return a->height < b->height;
        return a->signature.bits < b->signature.bits;
    });
    const std::size_t m = nonzero.size();

    std::vector<Point> seeds;
    if (opt.seeds.empty()) {
        for (const Part* p : nonzero) seeds.push_back(p->witness);
    } else {
        if (opt.seeds.size() != m) throw input_error("one seed per nonzero part required");
        seeds = opt.seeds;
        for (std::size_t i = 0; i < m; ++i)
            if (part_of(cone, seeds[i], 1e-7) != nonzero[i]->signature)
                throw input_error("a seed does not lie in its declared part");
    }

    std::vector<double> targets;
    if (opt.targets.empty()) {
        for (std::size_t i = 0; i < m; ++i) targets.push_back(1.0 + 0.5 * static_cast<double>(i));
    } else {
        if (opt.targets.size() != m) throw input_error("one target eigenvalue per nonzero part required");
        targets = opt.targets;
    }
    for (double t : targets)
        if (!(t > 0.0)) throw input_error("target eigenvalues must be positive");
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (std::abs(targets[i] - targets[j]) <= 1e-9 * std::max(targets[i], targets[j]))
                throw input_error("target eigenvalues must be pairwise distinct");

    const double r = opt.r;
    if (!(r < 0.0)) throw input_error("power mean exponent must be negative (or -inf)");

    auto collides = [&](double cand, std::size_t self) {
        for (std::size_t j = 0; j < m; ++j)
            if (j != self && std::abs(cand - targets[j]) <= 1e-9 * std::max(cand, targets[j])) return true;
        return false;
    };

    std::vector<PowerMeanTerm> terms;
    PolyhedralEigenMapResult out;
    for (std::size_t q = 0; q < m; ++q) {
        const PartSignature sig = nonzero[q]->signature;
        const Point& z = seeds[q];
        double mr = power_mean(sig, r, facets, z);
        if (!(mr > 0.0)) throw input_error("seed has a vanishing power mean on its own part");

        if (nonzero[q]->height == 1) {
            terms.push_back({targets[q] / mr, sig, z});
        } else {
            Point w = Point::dense(std::vector<double>(cone.dim(), 0.0));
            for (const auto& t : terms) {
                double v = power_mean(t.signature, r, facets, z);
                if (v > 0.0) w += (t.weight * v) * t.direction;
            }
            double mu = targets[q];
            int guard = 0;
            for (;;) {
                Point v = mu * z - w;
                bool ok = contains(cone, v, 1e-9) && part_of(cone, v, 1e-7) == sig;
                if (ok && !collides(mu, q)) break;
                mu *= 2.0;  // the membership condition holds for all mu large enough
                if (++guard > 400) throw input_error("target escalation failed to terminate");
            }
            targets[q] = mu;
            Point u = (mu * z - w) * (1.0 / mr);
            terms.push_back({1.0, sig, std::move(u)});
        }
    }

    out.map = make_power_mean_combo(r, facets, terms);
    out.targets_used = targets;
    for (std::size_t q = 0; q < m; ++q) {
        const Point& z = seeds[q];
        double nz = z.euclidean_norm();
        Point zu = z * (1.0 / nz);
        Point fz = apply_map(out.map, zu);
        EigenPair pair;
        pair.vector = zu;
        pair.value = targets[q];
        pair.residual = (fz - targets[q] * zu).euclidean_norm();
        pair.part = nonzero[q]->signature;
        out.pairs.push_back(std::move(pair));
    }
    return out;
}

LorentzSeriesResult build_thm56_map(const LorentzSeriesOptions& opt) {
    if (opt.terms < 2 || opt.terms > 40) throw input_error("series length must lie in [2, 40]");
    std::vector<double> angles = opt.angles;
    if (angles.empty()) {
        for (int k = 1; k <= opt.terms; ++k) angles.push_back(1.0 / k);
    }
    std::vector<double> weights = opt.weights;
    if (weights.empty()) weights.assign(angles.size(), 1.0);

    MapDescriptor map = make_lorentz_series(angles, weights);
    const auto* series = std::get_if<LorentzSeriesMap>(&map);
    const int terms = static_cast<int>(series->angles.size());

    auto eigenvalues = [&](const LorentzSeriesMap& s) {
        std::vector<double> vals;
        for (int q = 1; q <= terms; ++q) vals.push_back(lorentz_series_term(s, q, lorentz_series_direction(s, q)));
        return vals;
    };

    // Default weights can in principle collide; nudge within (0, 1] until the
    // eigenvalues are relatively separated.
    LorentzSeriesMap adjusted = *series;
    for (int pass = 0; pass < 64; ++pass) {
        std::vector<double> vals = eigenvalues(adjusted);
        bool clash = false;
        for (int i = 0; i < terms && !clash; ++i)
            for (int j = i + 1; j < terms && !clash; ++j)
                if (std::abs(vals[i] - vals[j]) <= 1e-6 * std::max(vals[i], vals[j])) {
                    clash = true;
                    adjusted.weights[j] *= 0.875;
                }
        if (!clash) break;
        if (pass == 63) throw input_error("failed to separate series eigenvalues");
    }

    LorentzSeriesResult out;
    out.map = adjusted;
    for (int q = 1; q <= terms; ++q) {
        Point xq = lorentz_series_direction(adjusted, q);
        double rho = lorentz_series_term(adjusted, q, xq);
        Point fx = apply_map(out.map, xq);
        EigenPair pair;
        pair.vector = xq;  // already unit Euclidean norm
        pair.value = rho;
        pair.residual = (fx - rho * xq).euclidean_norm();
        out.pairs.push_back(std::move(pair));
    }
    return out;
}

// ---------------------------------------------------------------------------

PropertyReport check_order_preserving(const MapDescriptor& map, const ConeDescriptor& cone, int trials,
                                      std::uint64_t seed, double tol) {
    if (trials < 1) throw input_error("trials must be at least 1");
    Rng root(seed);
    PropertyReport rep;
    rep.trials = trials;
    rep.worst_margin = kInf;
    for (int t = 0; t < trials; ++t) {
        Rng rng = root.fork(t);
        Point x = sample_unit(cone, rng.next_u64()) * rng.log_uniform(0.1, 10.0);
        Point c = sample_unit(cone, rng.next_u64()) * rng.log_uniform(0.01, 1.0);
        Point y = x + c;
        Point fx = apply_map(map, x);
        Point fy = apply_map(map, y);
        double s = std::max(fx.natural_norm(), fy.natural_norm());
        double margin = (s == 0.0) ? 0.0 : membership_margin(cone, fy - fx, s);
        rep.worst_margin = std::min(rep.worst_margin, margin);
        if (margin < -tol) ++rep.violations;
    }
    if (!std::isfinite(rep.worst_margin)) rep.worst_margin = 0.0;
    return rep;
}

PropertyReport check_homogeneous(const MapDescriptor& map, const ConeDescriptor& cone, int trials,
                                 std::uint64_t seed, double tol) {
    if (trials < 1) throw input_error("trials must be at least 1");
    Rng root(seed);
    PropertyReport rep;
    rep.trials = trials;
    rep.worst_margin = 0.0;
    for (int t = 0; t < trials; ++t) {
        Rng rng = root.fork(t);
        Point x = sample_unit(cone, rng.next_u64());
        double lam = rng.log_uniform(1e-3, 1e3);
        Point lhs = apply_map(map, x * lam);
        Point rhs = apply_map(map, x) * lam;
        double err = (lhs - rhs).natural_norm() / (1.0 + rhs.natural_norm());
        rep.worst_margin = std::max(rep.worst_margin, err);
        if (err > tol) ++rep.violations;
    }
    // lambda = 0 explicitly: f(0) = 0
    Point zero = Point::zeros_like(sample_unit(cone, root.next_u64()));
    if (apply_map(map, zero).natural_norm() > tol) ++rep.violations;
    return rep;
}

// ---------------------------------------------------------------------------

std::vector<double> default_lattice_weights(int n) {
    const std::uint32_t count = (1u << n) - 1;
    std::vector<double> w(count);
    double denom = std::ldexp(1.0, n + 1);
    for (std::uint32_t mask = 1; mask <= count; ++mask)
        w[mask - 1] = std::popcount(mask) + static_cast<double>(mask) / denom;
    return w;
}

PresetSpec make_preset(const std::string& name, const PresetParams& params) {
    PresetSpec spec{make_composition(InnerDeformation::Halving), ConeDescriptor::grid_convex(params.grid_n), {}, {}};
    if (name == "paper:T") {
        return spec;
    }
    if (name == "paper:Tk") {
        spec.map = make_composition(InnerDeformation::PhiK, params.k);
        return spec;
    }
    if (name == "paper:psd-f" || name == "paper:psd-g") {
        int n = std::max(params.n, 3);
        std::vector<double> a(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
        a[sym_packed_index(0, 0)] = 1.0;
        std::optional<Point> b;
        if (name == "paper:psd-g") {
            std::vector<double> bp(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
            bp[sym_packed_index(0, 0)] = 1.0;
            bp[sym_packed_index(1, 1)] = 1.0;
            b = Point::sym(n, std::move(bp));
        }
        spec.map = make_psd_trace(Point::sym(n, std::move(a)), std::move(b));
        spec.cone = ConeDescriptor::psd(n);
        return spec;
    }
    if (name == "paper:lattice") {
        spec.map = make_lattice(params.n, default_lattice_weights(params.n));
        spec.cone = ConeDescriptor::orthant(params.n);
        return spec;
    }
    if (name == "paper:thm55") {
        spec.cone = (params.cone_name == "orthant") ? ConeDescriptor::orthant(params.n)
                                                    : ConeDescriptor::square_cone();
        PartsLattice lattice = enumerate_parts(spec.cone);
        PolyhedralEigenMapOptions opt;
        opt.r = params.r;
        auto built = build_thm55_map(spec.cone, lattice, opt);
        spec.map = std::move(built.map);
        spec.certified = std::move(built.pairs);
        return spec;
    }
    if (name == "paper:thm56") {
        LorentzSeriesOptions opt;
        opt.terms = params.terms;
        auto built = build_thm56_map(opt);
        spec.map = std::move(built.map);
        spec.cone = ConeDescriptor::lorentz(3);
        spec.certified = std::move(built.pairs);
        return spec;
    }
    if (name == "zero") {
        int n = std::max(params.n, 1);
        spec.map = make_linear(std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
        spec.cone = ConeDescriptor::orthant(n);
        return spec;
    }
    if (name == "adversarial-linear") {
        spec.map = make_linear({{1.0, -0.5}, {0.0, 1.0}});
        spec.cone = ConeDescriptor::orthant(2);
        spec.notes.push_back("control map with a negative entry; intentionally not order-preserving");
        return spec;
    }
    if (name == "golden") {
        spec.map = make_linear({{1.0, 1.0}, {1.0, 0.0}});
        spec.cone = ConeDescriptor::orthant(2);
        return spec;
    }
    throw input_error("unknown preset: " + name);
}

}  // namespace conespec
