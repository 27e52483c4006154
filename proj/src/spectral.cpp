#include "conespec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

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

// Per-iterate log norms of the renormalized iteration, in extended precision.
// An empty result means some iterate vanished exactly (growth 0).
std::vector<long double> growth_log_trace(const MapDescriptor& map, const ConeDescriptor& cone,
                                          const Point& x0, int kmax) {
    std::vector<long double> logs;
    logs.reserve(kmax);
    double n0 = cone_norm(cone, x0);
    if (n0 == 0.0) return logs;
    Point x = x0 * (1.0 / n0);
    long double acc = 0.0L;
    for (int k = 1; k <= kmax; ++k) {
        Point fx = apply_map(map, x);
        double nf = cone_norm(cone, fx);
        if (nf == 0.0) return {};
        if (!std::isfinite(nf)) break;
        acc += std::log(static_cast<long double>(nf));
        logs.push_back(acc);
        x = fx * (1.0 / nf);
    }
    return logs;
}

// Cesaro slope over the tail half: mean increment of log||f^k|| between the
// midpoint and the end. The start-vector constant cancels, so this converges
// geometrically where averaging log||f^k||/k only converges like 1/k.
double growth_from_logs(const std::vector<long double>& logs) {
    if (logs.empty()) return 0.0;
    std::size_t n = logs.size();
    std::size_t half = n / 2;
    if (half == 0) return static_cast<double>(std::exp(logs[0]));
    long double slope = (logs[n - 1] - logs[half - 1]) / static_cast<long double>(n - half);
    return static_cast<double>(std::exp(slope));
}

// Composition operators collapse doubly exponentially; the grid iteration
// bottoms out at the interpolation floor ~1/n instead. Every cone element is
// increasing, so ||T^m x0||_sup = x0(phi^m(1)); we track log phi^m(1) exactly
// and evaluate x0 through its (linear) first grid cell below the resolution.
std::vector<long double> composition_growth_logs(const CompositionMap& map, const Point& x0, int kmax);

// cw certificate over facet-style functional values.
double cw_lower_from_values(const std::vector<double>& vv, const std::vector<double>& fv,
                            double scale_v, double scale_f) {
    const double pos_tol = 1e-9 * std::max(scale_v, 1e-300);
    const double neg_tol = 1e-9 * std::max(scale_f, 1e-300);
    double a = kInf;
    bool any = false;
    for (std::size_t i = 0; i < vv.size(); ++i) {
        if (vv[i] > pos_tol) {
            a = std::min(a, fv[i] / vv[i]);
            any = true;
        } else if (fv[i] < -neg_tol) {
            return 0.0;  // f(v) leaves the face spanned by v: certificate void
        }
    }
    if (!any) return 0.0;
    return std::max(a, 0.0);
}

std::vector<double> functional_values(const ConeDescriptor& cone, const Point& p) {
    std::vector<double> out;
    switch (cone.kind()) {
        case ConeKind::Orthant:
            out = p.data;
            break;
        case ConeKind::Polyhedral: {
            for (const auto& row : cone.facet_rows()) out.push_back(row_dot(row, p.data) / row_norm(row));
            break;
        }
        case ConeKind::GridConvex:
            out.assign(p.data.begin() + 1, p.data.end());  // node 0 is pinned at zero
            break;
        default:
            throw capability_error("functional values unavailable for this cone");
    }
    return out;
}

bool exact_grid_linear(const CompositionMap& m, int grid_n, double& slope) {
    slope = composition_phi(m, 1.0);
    for (int j = 0; j <= grid_n; ++j) {
        double t = static_cast<double>(j) / grid_n;
        if (composition_phi(m, t) != slope * t) return false;
    }
    return true;
}

// Log-domain iterate of log t -> log phi(t). Never materializes the collapsing
// iterates: below the first breakpoint the update is exact in log space.
long double composition_log_step(const CompositionMap& m, long double logt) {
    switch (m.inner) {
        case InnerDeformation::Halving:
            return logt - 0.6931471805599453094L;
        case InnerDeformation::PhiK: {
            long double log_b = -static_cast<long double>(m.k) * 0.6931471805599453094L;
            if (logt <= log_b) return 2.0L * logt;  // t <= 2^-k: phi(t) = t^2
            return std::log(static_cast<long double>(phi_k_eval(m.k, static_cast<double>(std::exp(logt)))));
        }
        case InnerDeformation::PiecewiseLinear: {
            const auto& bp = m.breakpoints;
            long double first_t = bp[1].first;
            if (logt <= std::log(static_cast<long double>(first_t))) {
                long double c = static_cast<long double>(bp[1].second) / static_cast<long double>(bp[1].first);
                if (c <= 0.0L) return -kInf;
                return logt + std::log(c);
            }
            double v = composition_phi(m, static_cast<double>(std::exp(logt)));
            if (v <= 0.0) return -kInf;
            return std::log(static_cast<long double>(v));
        }
    }
    return -kInf;
}

std::vector<long double> composition_growth_logs(const CompositionMap& map, const Point& x0, int kmax) {
    const int n = x0.dim;
    std::vector<long double> logs;
    long double logt = 0.0L;
    for (int step = 1; step <= kmax; ++step) {
        logt = composition_log_step(map, logt);
        double t = static_cast<double>(std::exp(logt));
        long double lv;
        if (t >= 1.0 / n) {
            double val = grid_interpolate(x0, t);
            if (val <= 0.0) return {};
            lv = std::log(static_cast<long double>(val));
        } else {
            if (x0.data[1] <= 0.0) return {};  // x0 vanishes near 0, so the sup hits exact zero
            lv = logt + std::log(static_cast<long double>(n) * static_cast<long double>(x0.data[1]));
        }
        logs.push_back(lv);
    }
    return logs;
}

RadiusEstimate composition_radius(const CompositionMap& m, const RadiusParams& params) {
    RadiusEstimate est;
    est.analytic = true;
    est.notes.push_back("exact norm path: ||T^m|| = phi^m(1) via the maximizer g(t) = t");

    double slope = 0.0;
    if (exact_grid_linear(m, 4096, slope) && slope > 0.0) {
        // g(t) = t is an exact eigenvector; both certificates collapse.
        est.lower = est.upper = est.value = slope;
        double lg = std::log(slope);
        for (int k = 1; k <= params.kmax; ++k) est.norm_trace.push_back({k, lg});
        est.notes.push_back("deformation is linear: exact eigenvector certificate");
        return est;
    }

    long double logt = 0.0L;  // log phi^0(1)
    long double best = kInf;
    for (int step = 1; step <= params.kmax; ++step) {
        logt = composition_log_step(m, logt);
        if (!(logt < 0.0L) && step > 1) break;
        long double slope_m = logt / step;
        best = std::min(best, slope_m);
        est.norm_trace.push_back({step, static_cast<double>(slope_m)});
        if (logt < -1e12L) {
            // fully collapsed; later entries only repeat the story
            break;
        }
    }
    est.upper = static_cast<double>(std::exp(best));  // inf_m ||T^m||^{1/m} dominates the radius
    est.lower = 0.0;
    est.value = est.upper < 1e-300 ? 0.0 : est.upper;
    return est;
}

// Exact operator-norm trace for linear maps: sigma_max(A^k)^{1/k}, carried in
// log scale so large powers never overflow. This equals the cone norm for
// entrywise-nonnegative matrices on the orthant.
std::vector<std::pair<int, double>> linear_norm_trace(const LinearMap& m, int kmax) {
    const int n = m.n;
    std::vector<double> p = m.matrix;
    double logscale = 0.0;
    std::vector<std::pair<int, double>> trace;
    for (int k = 1; k <= kmax; ++k) {
        if (k > 1) {
            std::vector<double> q(static_cast<std::size_t>(n) * n, 0.0);
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l) {
                    double pil = p[static_cast<std::size_t>(i) * n + l];
                    if (pil == 0.0) continue;
                    for (int j = 0; j < n; ++j) q[static_cast<std::size_t>(i) * n + j] += pil * m.matrix[static_cast<std::size_t>(l) * n + j];
                }
            p = std::move(q);
            double mx = 0.0;
            for (double v : p) mx = std::max(mx, std::abs(v));
            if (mx == 0.0) {
                trace.push_back({k, -kInf});
                break;
            }
            if (mx > 1e150 || mx < 1e-150) {
                for (double& v : p) v /= mx;
                logscale += std::log(mx);
            }
        }
        // sigma_max via the top eigenvalue of P^T P
        std::vector<double> packed(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) s += p[static_cast<std::size_t>(l) * n + i] * p[static_cast<std::size_t>(l) * n + j];
                packed[sym_packed_index(i, j)] = s;
            }
        double top = std::max(sym_eigen(Point::sym(n, packed)).values.back(), 0.0);
        double log_sigma = 0.5 * std::log(std::max(top, 1e-300)) + logscale;
        trace.push_back({k, log_sigma / k});
    }
    return trace;
}

std::optional<EigenPair> eigen_iterate_impl(const MapDescriptor& map, const ConeDescriptor& cone,
                                            const Point& x0, double tol, int maxit,
                                            const std::function<void(const Point&)>& visit) {
    double n0 = cone_norm(cone, x0);
    if (n0 == 0.0) return std::nullopt;
    Point x = x0 * (1.0 / n0);
    if (visit) visit(x);
    for (int it = 0; it < maxit; ++it) {
        Point fx = apply_map(map, x);
        double nf = cone_norm(cone, fx);
        if (nf == 0.0 || !std::isfinite(nf)) return std::nullopt;
        Point xn = fx * (1.0 / nf);
        double d = thompson_distance(cone, xn, x);
        if (!std::isfinite(d)) d = (xn - x).natural_norm();
        x = std::move(xn);
        if (visit) visit(x);
        if (d < tol) {
            Point fxx = apply_map(map, x);
            EigenPair pair;
            pair.value = cone_norm(cone, fxx);
            pair.residual = (fxx - pair.value * x).natural_norm();
            pair.vector = std::move(x);
            if (cone.kind() == ConeKind::Orthant || cone.kind() == ConeKind::Polyhedral)
                pair.part = part_of(cone, pair.vector, 1e-7);
            return pair;
        }
    }
    return std::nullopt;
}

}  // namespace

double local_growth(const MapDescriptor& map, const ConeDescriptor& cone, const Point& x0, int kmax) {
    if (kmax < 4) throw input_error("local_growth needs kmax >= 4");
    if (cone_norm(cone, x0) == 0.0) throw input_error("local_growth needs a nonzero start");
    if (const auto* comp = std::get_if<CompositionMap>(&map))
        return growth_from_logs(composition_growth_logs(*comp, x0, kmax));
    return growth_from_logs(growth_log_trace(map, cone, x0, kmax));
}

double cw_lower(const MapDescriptor& map, const ConeDescriptor& cone, const Point& v) {
    double nv = cone_norm(cone, v);
    if (nv == 0.0) throw input_error("cw_lower needs a nonzero point of the cone");
    Point fv = apply_map(map, v);
    switch (cone.kind()) {
        case ConeKind::Orthant:
        case ConeKind::Polyhedral:
        case ConeKind::GridConvex: {
            std::vector<double> a = functional_values(cone, v);
            std::vector<double> b = functional_values(cone, fv);
            return cw_lower_from_values(a, b, nv, cone_norm(cone, fv));
        }
        case ConeKind::Psd: {
            SymEigenResult ve = sym_eigen(v);
            if (ve.values.front() > 1e-10 * nv) {
                std::vector<double> inv_roots(ve.values.size());
                for (std::size_t k = 0; k < ve.values.size(); ++k) inv_roots[k] = 1.0 / std::sqrt(ve.values[k]);
                Point w = sym_from_eigen(ve, inv_roots);
                // smallest eigenvalue of W f(V) W
                const int n = v.dim;
                std::vector<double> wf = w.sym_full();
                std::vector<double> ff = fv.sym_full();
                std::vector<double> t(static_cast<std::size_t>(n) * n, 0.0);
                for (int i = 0; i < n; ++i)
                    for (int k = 0; k < n; ++k) {
                        double wik = wf[static_cast<std::size_t>(i) * n + k];
                        if (wik == 0.0) continue;
                        for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(i) * n + j] += wik * ff[static_cast<std::size_t>(k) * n + j];
                    }
                std::vector<double> packed(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j <= i; ++j) {
                        double s = 0.0;
                        for (int k = 0; k < n; ++k) s += t[static_cast<std::size_t>(i) * n + k] * wf[static_cast<std::size_t>(k) * n + j];
                        packed[sym_packed_index(i, j)] = s;
                    }
                return std::max(0.0, sym_eigen(Point::sym(n, std::move(packed))).values.front());
            }
            // boundary v: a*v <= f(v) iff 1/M(v / f(v)) admits it
            double m = upper_ratio(cone, v, fv);
            if (!std::isfinite(m) || m <= 0.0) return 0.0;
            return 1.0 / m;
        }
        case ConeKind::Lorentz: {
            double m = upper_ratio(cone, v, fv);
            if (!std::isfinite(m) || m <= 0.0) return 0.0;
            return 1.0 / m;
        }
    }
    return 0.0;
}

double cw_upper(const MapDescriptor& map, const ConeDescriptor& cone, const Point& y) {
    if (interior_margin(cone, y) <= 1e-9) throw input_error("cw_upper needs a strictly interior probe");
    Point fy = apply_map(map, y);
    return upper_ratio(cone, fy, y);
}

std::optional<EigenPair> eigen_iterate(const MapDescriptor& map, const ConeDescriptor& cone,
                                       const Point& x0, double tol, int maxit) {
    return eigen_iterate_impl(map, cone, x0, tol, maxit, nullptr);
}

RadiusEstimate bonsall_radius(const MapDescriptor& map, const ConeDescriptor& cone,
                              const RadiusParams& params) {
    if (params.kmax < 4 || params.samples < 1) throw input_error("bonsall_radius: kmax >= 4 and samples >= 1 required");

    if (const auto* comp = std::get_if<CompositionMap>(&map)) return composition_radius(*comp, params);

    RadiusEstimate est;
    est.notes.push_back("sampled sup over " + std::to_string(params.samples) + " unit-sphere starts");

    std::vector<Point> starts;
    if (cone.interior_witness()) {
        Point w = *cone.interior_witness();
        starts.push_back(w * (1.0 / cone_norm(cone, w)));
    }
    Rng rng(params.seed);
    for (int i = 0; i < params.samples; ++i) starts.push_back(sample_unit(cone, rng.next_u64()));
    est.sample_count = static_cast<int>(starts.size());

    double best_growth = 0.0;
    std::size_t best_idx = 0;
    std::vector<double> growths;
    std::vector<long double> best_logs;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        std::vector<long double> logs = growth_log_trace(map, cone, starts[i], params.kmax);
        double g = growth_from_logs(logs);
        growths.push_back(g);
        if (g >= best_growth) {
            best_growth = g;
            best_idx = i;
            best_logs = std::move(logs);
        }
    }
    double mean_g = 0.0;
    for (double g : growths) mean_g += g;
    mean_g /= growths.empty() ? 1.0 : growths.size();
    double var = 0.0;
    for (double g : growths) var += (g - mean_g) * (g - mean_g);
    est.sample_spread = growths.size() > 1 ? std::sqrt(var / (growths.size() - 1)) : 0.0;

    for (std::size_t k = 0; k < best_logs.size(); ++k)
        est.norm_trace.push_back({static_cast<int>(k + 1), static_cast<double>(best_logs[k] / static_cast<long double>(k + 1))});
    if (const auto* lin = std::get_if<LinearMap>(&map)) {
        est.norm_trace = linear_norm_trace(*lin, params.kmax);
        est.analytic = true;
        est.notes.push_back("exact ambient-operator-norm trace (cone norm for nonnegative matrices)");
    }

    double value = best_growth;
    double lower = 0.0;
    auto track_lower = [&](const Point& p) {
        if (cone_norm(cone, p) == 0.0) return;
        lower = std::max(lower, cw_lower(map, cone, p));
    };
    for (const auto& s : starts) track_lower(s);
    int visits = 0;
    auto refined = eigen_iterate_impl(map, cone, starts[best_idx], 1e-12, 400, [&](const Point& p) {
        if (visits < 60 || visits % 10 == 0) track_lower(p);
        ++visits;
    });
    if (refined) {
        value = refined->value;
        est.notes.push_back("refined by a converged eigenpair from the best start");
    }

    double upper = kInf;
    for (const auto& s : starts) {
        if (interior_margin(cone, s) > 1e-6) upper = std::min(upper, cw_upper(map, cone, s));
    }
    if (est.analytic) {
        for (const auto& [k, lg] : est.norm_trace) {
            (void)k;
            upper = std::min(upper, std::exp(lg));
        }
    }

    // Certificates are rigorous; the extrapolated value defers to them.
    value = std::max(value, lower);
    if (std::isfinite(upper)) value = std::min(value, upper);
    est.lower = lower;
    est.upper = upper;
    est.value = value;
    return est;
}

SpectrumScan spectrum_scan(const MapDescriptor& map, const ConeDescriptor& cone,
                           const PartsLattice& lattice, const ScanParams& params) {
    if (cone.kind() != ConeKind::Orthant && cone.kind() != ConeKind::Polyhedral)
        throw capability_error("spectrum_scan needs an orthant or polyhedral cone");

    SpectrumScan scan;
    scan.part_count = static_cast<int>(lattice.parts.size());
    Rng rng(params.seed);

    for (const auto& part : lattice.parts) {
        if (part.signature.bits == 0) continue;

        std::vector<Point> launches;
        launches.push_back(part.witness);
        // Canonical in-part direction: the sum of the height-1 sub-part
        // witnesses (on the orthant this is exactly the 0/1 indicator).
        {
            Point acc = Point::dense(std::vector<double>(cone.dim(), 0.0));
            int used = 0;
            for (const auto& q : lattice.parts) {
                if (q.height == 1 && q.signature.subset_of(part.signature)) {
                    acc += q.witness;
                    ++used;
                }
            }
            if (used > 0 && part_of(cone, acc, 1e-7) == part.signature) launches.push_back(std::move(acc));
        }
        for (int s = static_cast<int>(launches.size()); s < params.per_part_starts; ++s) {
            Point acc = part.witness;
            for (const auto& q : lattice.parts) {
                if (q.signature.bits == 0 || !q.signature.subset_of(part.signature)) continue;
                acc += rng.uniform(0.0, 0.5) * q.witness;
            }
            launches.push_back(std::move(acc));
        }

        std::vector<EigenPair> accepted;
        for (const auto& z : launches) {
            // Shortcut: if the launch already satisfies the eigen relation to
            // machine precision, record it without iteration drift. Keeps
            // exactly-configured eigenvalues bit-exact.
            Point fz = apply_map(map, z);
            std::vector<double> zi = functional_values(cone, z);
            std::vector<double> fi = functional_values(cone, fz);
            double lam = -1.0, lam_lo = kInf, lam_hi = -kInf;
            for (std::size_t i = 0; i < zi.size(); ++i) {
                if (!part.signature.contains_index(static_cast<int>(i) + 1)) continue;
                double r = fi[i] / zi[i];
                if (lam < 0.0) lam = r;
                lam_lo = std::min(lam_lo, r);
                lam_hi = std::max(lam_hi, r);
            }
            bool shortcut = false;
            if (lam >= 0.0 && lam_hi - lam_lo <= 1e-11 * (1.0 + lam_hi)) {
                double nz = cone_norm(cone, z);
                double resid = (fz - lam * z).natural_norm() / nz;
                if (resid <= 1e-10 * (1.0 + lam)) {
                    EigenPair pair;
                    pair.vector = z * (1.0 / nz);
                    pair.value = lam;
                    pair.residual = (apply_map(map, pair.vector) - lam * pair.vector).natural_norm();
                    pair.part = part.signature;
                    accepted.push_back(std::move(pair));
                    shortcut = true;
                }
            }
            if (shortcut) continue;

            auto pair = eigen_iterate(map, cone, z, params.tol, params.maxit);
            if (!pair) continue;
            PartSignature landed = pair->part.value_or(PartSignature{});
            if (landed != part.signature) {
                scan.escapes.push_back({part.signature, landed, pair->value});
                continue;
            }
            accepted.push_back(std::move(*pair));
        }

        if (accepted.empty()) {
            scan.notes.push_back("no convergent eigenpair in part {" + [&] {
                std::string s;
                for (int i : part.signature.indices()) s += std::to_string(i) + ",";
                if (!s.empty()) s.pop_back();
                return s;
            }() + "}");
            continue;
        }
        double lo = kInf, hi = -kInf;
        for (const auto& p : accepted) {
            lo = std::min(lo, p.value);
            hi = std::max(hi, p.value);
        }
        if (hi - lo > 1e-4 * (1.0 + hi)) scan.continuum_suspected = true;
        else if (hi - lo > params.dedup_tol * (1.0 + hi))
            scan.notes.push_back("per-part eigenvalues disagree beyond the dedup tolerance");
        std::size_t best = 0;
        for (std::size_t i = 1; i < accepted.size(); ++i)
            if (accepted[i].residual < accepted[best].residual) best = i;
        scan.pairs.push_back(accepted[best]);
    }

    std::vector<double> values;
    for (const auto& p : scan.pairs) values.push_back(p.value);
    std::sort(values.begin(), values.end());
    for (double v : values) {
        if (scan.distinct_values.empty() ||
            v - scan.distinct_values.back() > params.dedup_tol * (1.0 + std::abs(v)))
            scan.distinct_values.push_back(v);
    }
    scan.bound_satisfied = static_cast<int>(scan.distinct_values.size()) <= scan.part_count - 1;
    return scan;
}

Point psd_rotation_projector(int n, double theta) {
    std::vector<double> packed(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
    double c = std::cos(theta), s = std::sin(theta);
    packed[sym_packed_index(0, 0)] = c * c;
    if (n >= 2) {
        packed[sym_packed_index(1, 0)] = c * s;
        packed[sym_packed_index(1, 1)] = s * s;
    }
    return Point::sym(n, std::move(packed));
}

std::vector<EigenPair> psd_trace_boundary_spectrum(const MapDescriptor& map, int grid) {
    const auto* tm = std::get_if<PsdTraceMap>(&map);
    if (!tm) throw capability_error("boundary spectrum sampling is defined for the trace maps");
    if (grid < 2) throw input_error("theta grid needs at least two points");
    const int n = tm->a.dim;
    std::vector<EigenPair> out;
    for (int i = 0; i < grid; ++i) {
        double theta = 2.0 * 3.141592653589793 * static_cast<double>(i) / (grid - 1);
        Point z = psd_rotation_projector(n, theta);
        Point fz = apply_map(map, z);
        double lam = std::abs(std::cos(theta));
        EigenPair pair;
        pair.vector = z;  // projections have unit Frobenius norm
        pair.value = lam;
        pair.residual = (fz - lam * z).frobenius_norm();
        out.push_back(std::move(pair));
    }
    return out;
}

}  // namespace conespec
