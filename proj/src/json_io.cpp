#include "conespec/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "conespec/errors.hpp"

namespace conespec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ojson number_or_infinity(double v) {
    if (std::isinf(v)) return v > 0 ? "infinity" : "-infinity";
    return v;
}

std::vector<std::vector<double>> rows_from_json(const ojson& j) {
    std::vector<std::vector<double>> rows;
    for (const auto& row : j) rows.push_back(row.get<std::vector<double>>());
    return rows;
}

ojson rows_to_json(const std::vector<std::vector<double>>& rows) {
    ojson j = ojson::array();
    for (const auto& row : rows) j.push_back(row);
    return j;
}

ojson signature_to_json(const PartSignature& s) {
    ojson j = ojson::array();
    for (int i : s.indices()) j.push_back(i);
    return j;
}

PartSignature signature_from_json(const ojson& j) {
    return PartSignature::from_indices(j.get<std::vector<int>>());
}

void escape_into(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void dump_into(std::string& out, const ojson& j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    switch (j.type()) {
        case ojson::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                escape_into(out, it.key());
                out += ": ";
                dump_into(out, it.value(), indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case ojson::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            bool scalars = true;
            for (const auto& v : j) scalars = scalars && !v.is_structured();
            if (scalars && j.size() <= 16) {
                out += "[";
                bool first = true;
                for (const auto& v : j) {
                    if (!first) out += ", ";
                    first = false;
                    dump_into(out, v, indent, depth + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump_into(out, v, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case ojson::value_t::string:
            escape_into(out, j.get_ref<const std::string&>());
            return;
        case ojson::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            return;
        case ojson::value_t::number_integer:
            out += std::to_string(j.get<long long>());
            return;
        case ojson::value_t::number_unsigned:
            out += std::to_string(j.get<unsigned long long>());
            return;
        case ojson::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += "null";
            return;
    }
}

}  // namespace

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "\"infinity\"" : "\"-infinity\"";
    if (std::isnan(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string dump_deterministic(const ojson& j, int indent) {
    std::string out;
    dump_into(out, j, indent, 0);
    out += "\n";
    return out;
}

ojson point_to_json(const Point& p) {
    ojson j;
    switch (p.kind) {
        case PointKind::DenseVector: j["kind"] = "dense"; break;
        case PointKind::SymMatrix: j["kind"] = "sym"; break;
        case PointKind::GridFunction: j["kind"] = "grid"; break;
    }
    j["dim"] = p.dim;
    j["data"] = p.data;
    return j;
}

Point point_from_json(const ojson& j) {
    std::string kind = j.at("kind").get<std::string>();
    auto data = j.at("data").get<std::vector<double>>();
    if (kind == "dense") return Point::dense(std::move(data));
    if (kind == "sym") return Point::sym(j.at("dim").get<int>(), std::move(data));
    if (kind == "grid") return Point::grid(std::move(data));
    throw input_error("unknown point kind: " + kind);
}

ojson cone_to_json(const ConeDescriptor& c) {
    ojson j;
    switch (c.kind()) {
        case ConeKind::Orthant: j["kind"] = "orthant"; break;
        case ConeKind::Polyhedral: j["kind"] = "polyhedral"; break;
        case ConeKind::Lorentz: j["kind"] = "lorentz"; break;
        case ConeKind::Psd: j["kind"] = "psd"; break;
        case ConeKind::GridConvex: j["kind"] = "gridconvex"; break;
    }
    j["dim"] = c.dim();
    if (c.kind() == ConeKind::Polyhedral) {
        j["facets"] = rows_to_json(c.facet_rows());
        if (!c.span_basis().empty()) j["span_basis"] = rows_to_json(c.span_basis());
    }
    return j;
}

ConeDescriptor cone_from_json(const ojson& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "orthant") return ConeDescriptor::orthant(j.at("dim").get<int>());
    if (kind == "lorentz") return ConeDescriptor::lorentz(j.at("dim").get<int>());
    if (kind == "psd") return ConeDescriptor::psd(j.at("dim").get<int>());
    if (kind == "gridconvex") return ConeDescriptor::grid_convex(j.at("dim").get<int>());
    if (kind == "polyhedral") {
        std::vector<std::vector<double>> span;
        if (j.contains("span_basis")) span = rows_from_json(j.at("span_basis"));
        return ConeDescriptor::polyhedral(rows_from_json(j.at("facets")), span);
    }
    throw input_error("unknown cone kind: " + kind);
}

ojson map_to_json(const MapDescriptor& m) {
    ojson j;
    if (const auto* lin = std::get_if<LinearMap>(&m)) {
        j["variant"] = "linear";
        ojson rows = ojson::array();
        for (int i = 0; i < lin->n; ++i) {
            ojson row = ojson::array();
            for (int c = 0; c < lin->n; ++c) row.push_back(lin->matrix[static_cast<std::size_t>(i) * lin->n + c]);
            rows.push_back(row);
        }
        j["matrix"] = rows;
        return j;
    }
    if (const auto* lat = std::get_if<LatticeMap>(&m)) {
        j["variant"] = "lattice";
        j["n"] = lat->n;
        ojson weights = ojson::array();
        for (std::uint32_t mask = 1; mask <= lat->weights.size(); ++mask) {
            ojson entry;
            entry["subset"] = signature_to_json(PartSignature{mask});
            entry["value"] = lat->weights[mask - 1];
            weights.push_back(entry);
        }
        j["weights"] = weights;
        return j;
    }
    if (const auto* pm = std::get_if<PowerMeanComboMap>(&m)) {
        j["variant"] = "power_mean_combo";
        j["r"] = std::isinf(pm->r) ? ojson("-inf") : ojson(pm->r);
        j["facets"] = rows_to_json(pm->facets);
        ojson terms = ojson::array();
        for (const auto& t : pm->terms) {
            ojson entry;
            entry["weight"] = t.weight;
            entry["signature"] = signature_to_json(t.signature);
            entry["direction"] = t.direction.data;
            terms.push_back(entry);
        }
        j["terms"] = terms;
        return j;
    }
    if (const auto* tm = std::get_if<PsdTraceMap>(&m)) {
        j["variant"] = "psd_trace";
        j["dim"] = tm->a.dim;
        j["a"] = tm->a.data;
        j["b"] = tm->b ? ojson(tm->b->data) : ojson(nullptr);
        return j;
    }
    if (const auto* cm = std::get_if<CompositionMap>(&m)) {
        j["variant"] = "composition";
        switch (cm->inner) {
            case InnerDeformation::Halving: j["inner"] = "halving"; break;
            case InnerDeformation::PhiK:
                j["inner"] = "phi_k";
                j["k"] = cm->k;
                break;
            case InnerDeformation::PiecewiseLinear: {
                j["inner"] = "piecewise_linear";
                ojson bp = ojson::array();
                for (const auto& [t, v] : cm->breakpoints) bp.push_back(ojson::array({t, v}));
                j["breakpoints"] = bp;
                break;
            }
        }
        return j;
    }
    if (const auto* ls = std::get_if<LorentzSeriesMap>(&m)) {
        j["variant"] = "lorentz_series";
        j["angles"] = ls->angles;
        j["weights"] = ls->weights;
        return j;
    }
    throw capability_error("unserializable map variant");
}

MapDescriptor map_from_json(const ojson& j) {
    std::string variant = j.at("variant").get<std::string>();
    if (variant == "linear") return make_linear(rows_from_json(j.at("matrix")));
    if (variant == "lattice") {
        int n = j.at("n").get<int>();
        std::vector<double> weights((1u << n) - 1, 0.0);
        std::vector<bool> seen(weights.size(), false);
        for (const auto& entry : j.at("weights")) {
            PartSignature s = signature_from_json(entry.at("subset"));
            if (s.bits == 0 || s.bits > weights.size()) throw input_error("lattice weight subset out of range");
            weights[s.bits - 1] = entry.at("value").get<double>();
            seen[s.bits - 1] = true;
        }
        for (bool b : seen)
            if (!b) throw input_error("lattice weights must cover every nonempty subset");
        return make_lattice(n, std::move(weights));
    }
    if (variant == "power_mean_combo") {
        double r = j.at("r").is_string() ? -std::numeric_limits<double>::infinity() : j.at("r").get<double>();
        auto facets = rows_from_json(j.at("facets"));
        std::vector<PowerMeanTerm> terms;
        for (const auto& entry : j.at("terms")) {
            PowerMeanTerm t;
            t.weight = entry.at("weight").get<double>();
            t.signature = signature_from_json(entry.at("signature"));
            t.direction = Point::dense(entry.at("direction").get<std::vector<double>>());
            terms.push_back(std::move(t));
        }
        return make_power_mean_combo(r, std::move(facets), std::move(terms));
    }
    if (variant == "psd_trace") {
        int n = j.at("dim").get<int>();
        Point a = Point::sym(n, j.at("a").get<std::vector<double>>());
        std::optional<Point> b;
        if (j.contains("b") && !j.at("b").is_null()) b = Point::sym(n, j.at("b").get<std::vector<double>>());
        return make_psd_trace(std::move(a), std::move(b));
    }
    if (variant == "composition") {
        std::string inner = j.at("inner").get<std::string>();
        if (inner == "halving") return make_composition(InnerDeformation::Halving);
        if (inner == "phi_k") return make_composition(InnerDeformation::PhiK, j.at("k").get<int>());
        if (inner == "piecewise_linear") {
            std::vector<std::pair<double, double>> bp;
            for (const auto& e : j.at("breakpoints")) bp.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
            return make_composition(InnerDeformation::PiecewiseLinear, 3, std::move(bp));
        }
        throw input_error("unknown composition inner: " + inner);
    }
    if (variant == "lorentz_series")
        return make_lorentz_series(j.at("angles").get<std::vector<double>>(),
                                   j.at("weights").get<std::vector<double>>());
    throw input_error("unknown map variant: " + variant);
}

ojson lattice_to_json(const PartsLattice& l) {
    ojson j = ojson::array();
    for (const auto& p : l.parts) {
        ojson entry;
        entry["signature"] = signature_to_json(p.signature);
        entry["witness"] = p.witness.data;
        entry["height"] = p.height;
        j.push_back(entry);
    }
    return j;
}

ojson eigenpair_to_json(const EigenPair& p) {
    ojson j;
    j["vector"] = point_to_json(p.vector);
    j["value"] = p.value;
    j["residual"] = p.residual;
    j["part"] = p.part ? signature_to_json(*p.part) : ojson(nullptr);
    return j;
}

ojson radius_to_json(const RadiusEstimate& r) {
    ojson j;
    j["lower"] = r.lower;
    j["upper"] = number_or_infinity(r.upper);
    j["value"] = r.value;
    ojson trace = ojson::array();
    for (const auto& [k, v] : r.norm_trace) trace.push_back(ojson::array({k, number_or_infinity(v)}));
    j["norm_trace"] = trace;
    j["analytic"] = r.analytic;
    j["samples"] = r.sample_count;
    j["spread"] = r.sample_spread;
    j["notes"] = r.notes;
    return j;
}

ojson scan_to_json(const SpectrumScan& s) {
    ojson j;
    ojson pairs = ojson::array();
    for (const auto& p : s.pairs) pairs.push_back(eigenpair_to_json(p));
    j["pairs"] = pairs;
    j["distinct_values"] = s.distinct_values;
    j["distinct_count"] = s.distinct_values.size();
    j["part_count"] = s.part_count;
    j["bound"] = s.part_count - 1;
    j["bound_satisfied"] = s.bound_satisfied;
    j["continuum_suspected"] = s.continuum_suspected;
    ojson esc = ojson::array();
    for (const auto& e : s.escapes) {
        ojson entry;
        entry["from"] = signature_to_json(e.from);
        entry["to"] = signature_to_json(e.to);
        entry["value"] = e.value;
        esc.push_back(entry);
    }
    j["escapes"] = esc;
    j["notes"] = s.notes;
    return j;
}

ojson property_report_to_json(const PropertyReport& r) {
    ojson j;
    j["trials"] = r.trials;
    j["violations"] = r.violations;
    j["worst_margin"] = r.worst_margin;
    return j;
}

ojson map_distance_to_json(const MapDistance& d) {
    ojson j;
    j["sampled"] = d.sampled;
    j["bracket"] = d.bracket ? ojson(ojson::array({d.bracket->first, d.bracket->second})) : ojson(nullptr);
    return j;
}

ojson perturbation_to_json(const PerturbationReport& r) {
    ojson j;
    j["base_radius"] = radius_to_json(r.base_radius);
    ojson rows = ojson::array();
    for (const auto& row : r.rows) {
        ojson entry;
        entry["k"] = row.k;
        entry["distance"] = map_distance_to_json(row.distance);
        entry["radius"] = radius_to_json(row.radius);
        rows.push_back(entry);
    }
    j["rows"] = rows;
    j["verdict"] = verdict_name(r.verdict);
    j["distance_source"] = r.distance_source;
    j["sigma_rows"] = r.sigma_rows;
    return j;
}

ojson section3_to_json(const Section3Report& r) {
    ojson j;
    j["base_radius"] = r.base_radius;
    ojson rows = ojson::array();
    for (const auto& row : r.rows) {
        ojson entry;
        entry["k"] = row.k;
        entry["phi_k_at_1"] = row.phi_at_one;
        entry["bracket"] = ojson::array({row.dist_lo, row.dist_hi});
        entry["dist_sampled"] = row.dist_sampled;
        entry["radius_estimate"] = row.radius_estimate;
        ojson trace = ojson::array();
        for (const auto& [m, v] : row.trace) trace.push_back(ojson::array({m, number_or_infinity(v)}));
        entry["trace"] = trace;
        rows.push_back(entry);
    }
    j["rows"] = rows;
    ojson alphas = ojson::array();
    for (const auto& a : r.eigen_family) {
        ojson entry;
        entry["alpha"] = a.alpha;
        entry["eigenvalue"] = a.eigenvalue;
        entry["max_sample_error"] = a.max_sample_error;
        alphas.push_back(entry);
    }
    j["eigen_family"] = alphas;
    j["warnings"] = r.warnings;
    j["perturbation"] = perturbation_to_json(r.perturbation);
    return j;
}

std::string perturbation_to_csv(const PerturbationReport& r) {
    std::string out = "k,dist_lo,dist_hi,dist_sampled,r_k,r_k_lower,r_k_upper\n";
    auto cell = [](double v) {
        std::string s = format_double(v);
        if (!s.empty() && s.front() == '"') s = s.substr(1, s.size() - 2);  // bare infinity in CSV
        return s;
    };
    for (const auto& row : r.rows) {
        out += std::to_string(row.k) + ",";
        out += cell(row.distance.bracket ? row.distance.bracket->first : 0.0) + ",";
        out += cell(row.distance.bracket ? row.distance.bracket->second : 0.0) + ",";
        out += cell(row.distance.sampled) + ",";
        out += cell(row.radius.value) + ",";
        out += cell(row.radius.lower) + ",";
        out += cell(row.radius.upper) + "\n";
    }
    return out;
}

}  // namespace conespec
