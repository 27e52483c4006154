// Command-line front end: every library module exposed as a subcommand with
// deterministic JSON/CSV output for scripting and regression tests.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "conespec/continuity.hpp"
#include "conespec/errors.hpp"
#include "conespec/json_io.hpp"
#include "conespec/maps.hpp"
#include "conespec/parts.hpp"
#include "conespec/spectral.hpp"

using namespace conespec;

namespace {

struct CommonOpts {
    std::string preset;
    std::string map_spec;
    std::string cone_spec;
    std::string out_path;
    int kmax = 64;
    int samples = 64;
    double tol = 1e-9;
    std::uint64_t seed = 42;
    bool seed_given = false;
    int k = 3;
    int n = 3;
    int terms = 20;
    int grid_n = 1024;
    std::string thm55_cone = "square";
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot read file: " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

ojson parse_spec(const std::string& spec) {
    std::string text = spec;
    if (!spec.empty() && spec[0] == '@') text = slurp(spec.substr(1));
    ojson j = ojson::parse(text, nullptr, false);
    if (j.is_discarded()) throw input_error("malformed JSON: " + spec);
    return j;
}

ConeDescriptor resolve_cone(const std::string& spec) {
    if (spec == "square") return ConeDescriptor::square_cone();
    auto colon = spec.find(':');
    if (colon != std::string::npos && spec[0] != '{' && spec[0] != '@') {
        std::string kind = spec.substr(0, colon);
        int n = std::atoi(spec.c_str() + colon + 1);
        if (kind == "orthant") return ConeDescriptor::orthant(n);
        if (kind == "lorentz") return ConeDescriptor::lorentz(n);
        if (kind == "psd") return ConeDescriptor::psd(n);
        if (kind == "grid") return ConeDescriptor::grid_convex(n);
        throw input_error("unknown cone shorthand: " + spec);
    }
    return cone_from_json(parse_spec(spec));
}

PresetParams preset_params(const CommonOpts& o) {
    PresetParams p;
    p.n = o.n;
    p.k = o.k;
    p.terms = o.terms;
    p.grid_n = o.grid_n;
    p.cone_name = o.thm55_cone;
    return p;
}

// Resolves map and cone from --preset / --map / --cone.
PresetSpec resolve_map_and_cone(const CommonOpts& o) {
    if (!o.preset.empty()) {
        PresetSpec spec = make_preset(o.preset, preset_params(o));
        if (!o.cone_spec.empty()) spec.cone = resolve_cone(o.cone_spec);
        return spec;
    }
    if (o.map_spec.empty()) throw input_error("either --preset or --map is required");
    PresetSpec spec{make_preset("zero", preset_params(o)).map, ConeDescriptor::orthant(o.n), {}, {}};
    if (o.map_spec == "zero") {
        spec = make_preset("zero", preset_params(o));
    } else {
        spec.map = map_from_json(parse_spec(o.map_spec));
    }
    if (!o.cone_spec.empty()) spec.cone = resolve_cone(o.cone_spec);
    return spec;
}

ojson config_echo(const std::string& command, const CommonOpts& o) {
    ojson c;
    c["command"] = command;
    if (!o.preset.empty()) c["preset"] = o.preset;
    if (!o.map_spec.empty()) c["map"] = o.map_spec;
    if (!o.cone_spec.empty()) c["cone"] = o.cone_spec;
    c["kmax"] = o.kmax;
    c["samples"] = o.samples;
    c["tol"] = o.tol;
    c["seed"] = o.seed;
    return c;
}

int emit(const ojson& envelope, const std::string& out_path) {
    std::string text = dump_deterministic(envelope);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw input_error("cannot write file: " + out_path);
        out << text;
    }
    return 0;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_map = true) {
    if (with_map) {
        cmd->add_option("--preset", o.preset, "named map preset (paper:T, paper:Tk, paper:psd-f, ...)");
        cmd->add_option("--map", o.map_spec, "map JSON (inline, @file, or 'zero')");
    }
    cmd->add_option("--cone", o.cone_spec, "cone (orthant:N, lorentz:N, psd:N, grid:N, square, JSON, @file)");
    cmd->add_option("--out", o.out_path, "write the JSON envelope to a file instead of stdout");
    cmd->add_option("--kmax", o.kmax, "iteration cap");
    cmd->add_option("--samples", o.samples, "unit-sphere sample count");
    cmd->add_option("--tol", o.tol, "tolerance");
    cmd->add_option("--seed", o.seed, "random seed")->each([&o](const std::string&) { o.seed_given = true; });
    cmd->add_option("--k", o.k, "deformation index for paper:Tk");
    cmd->add_option("--n", o.n, "dimension for lattice/orthant/psd presets");
    cmd->add_option("--K", o.terms, "series length for paper:thm56");
    cmd->add_option("--grid-n", o.grid_n, "grid size for the function cone");
    cmd->add_option("--thm55-cone", o.thm55_cone, "cone for paper:thm55 (square | orthant)");
}

std::vector<int> parse_range(const std::string& text) {
    auto dots = text.find("..");
    if (dots == std::string::npos) return {std::atoi(text.c_str())};
    int from = std::atoi(text.substr(0, dots).c_str());
    int to = std::atoi(text.substr(dots + 2).c_str());
    if (to < from) throw input_error("bad range: " + text);
    std::vector<int> out;
    for (int k = from; k <= to; ++k) out.push_back(k);
    return out;
}

int cmd_radius(const CommonOpts& o) {
    PresetSpec spec = resolve_map_and_cone(o);
    RadiusParams params{o.kmax, o.samples, o.seed, o.tol};
    RadiusEstimate est = bonsall_radius(spec.map, spec.cone, params);
    ojson envelope;
    envelope["config"] = config_echo("radius", o);
    envelope["config"]["resolved_cone"] = cone_to_json(spec.cone);
    envelope["result"] = radius_to_json(est);
    ojson warnings = ojson::array();
    if (!est.analytic) warnings.push_back("value rests on a sampled sup; certificates bound it from both sides");
    for (const auto& n : spec.notes) warnings.push_back(n);
    envelope["warnings"] = warnings;
    return emit(envelope, o.out_path);
}

int cmd_spectrum(const CommonOpts& o, int theta_grid, int per_part_starts) {
    PresetSpec spec = resolve_map_and_cone(o);
    ojson envelope;
    envelope["config"] = config_echo("spectrum", o);
    envelope["config"]["resolved_cone"] = cone_to_json(spec.cone);
    ojson warnings = ojson::array();

    if (std::holds_alternative<PsdTraceMap>(spec.map)) {
        auto pairs = psd_trace_boundary_spectrum(spec.map, theta_grid);
        ojson out;
        ojson jp = ojson::array();
        for (const auto& p : pairs) jp.push_back(eigenpair_to_json(p));
        out["pairs"] = jp;
        out["theta_grid"] = theta_grid;
        out["continuum"] = true;
        envelope["result"] = out;
        warnings.push_back("boundary family sampled directly; the spectrum is a continuum");
    } else {
        PartsLattice lattice = enumerate_parts(spec.cone);
        ScanParams params;
        params.seed = o.seed;
        params.per_part_starts = per_part_starts;
        SpectrumScan scan = spectrum_scan(spec.map, spec.cone, lattice, params);
        envelope["result"] = scan_to_json(scan);
        if (scan.continuum_suspected) warnings.push_back("continuum suspected: eigenvalues spread within one part");
    }
    envelope["warnings"] = warnings;
    return emit(envelope, o.out_path);
}

int cmd_perturb(const CommonOpts& o, const std::string& paper, const std::string& family_preset,
                const std::string& family_spec, const std::string& range, const std::string& csv_path) {
    ojson envelope;
    envelope["config"] = config_echo("perturb", o);
    ojson warnings = ojson::array();
    PerturbationReport report;
    std::optional<Section3Report> section3;

    if (paper == "section3") {
        section3 = reproduce_section3(parse_range(range), o.grid_n, o.kmax);
        report = section3->perturbation;
        for (const auto& w : section3->warnings) warnings.push_back(w);
    } else if (family_preset == "scaled-linear") {
        auto cone = ConeDescriptor::orthant(2);
        auto base = make_linear({{2.0, 0.0}, {0.0, 3.0}});
        std::vector<std::pair<int, MapDescriptor>> fam;
        for (int k : parse_range(range))
            fam.push_back({k, make_linear({{2.0 + 1.0 / k, 0.0}, {0.0, 3.0 + 1.0 / k}})});
        PerturbationParams params;
        params.radius = {o.kmax, o.samples, o.seed, o.tol};
        params.tol = o.tol;
        report = perturbation_run(base, fam, cone, params);
    } else {
        if (family_spec.empty() || family_spec == "empty") throw input_error("perturbation family is empty");
        PresetSpec spec = resolve_map_and_cone(o);
        ojson fam_json = parse_spec(family_spec);
        std::vector<std::pair<int, MapDescriptor>> fam;
        int idx = 1;
        for (const auto& entry : fam_json) fam.push_back({idx++, map_from_json(entry)});
        PerturbationParams params;
        params.radius = {o.kmax, o.samples, o.seed, o.tol};
        params.tol = o.tol;
        report = perturbation_run(spec.map, fam, spec.cone, params);
    }

    if (report.distance_source == "sampled")
        warnings.push_back("distances are sampled sups (lower estimates); no analytic bracket available");
    envelope["result"] = section3 ? section3_to_json(*section3) : perturbation_to_json(report);
    envelope["warnings"] = warnings;
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw input_error("cannot write file: " + csv_path);
        csv << perturbation_to_csv(report);
    }
    return emit(envelope, o.out_path);
}

int cmd_thompson(const CommonOpts& o, const std::string& x_spec, const std::string& y_spec) {
    if (o.cone_spec.empty()) throw input_error("--cone is required");
    ConeDescriptor cone = resolve_cone(o.cone_spec);
    Point x = point_from_json(parse_spec(x_spec));
    Point y = point_from_json(parse_spec(y_spec));
    double d = thompson_distance(cone, x, y);
    ojson envelope;
    envelope["config"] = config_echo("thompson", o);
    ojson result;
    result["distance"] = std::isinf(d) ? ojson("infinity") : ojson(d);
    envelope["result"] = result;
    envelope["warnings"] = ojson::array();
    return emit(envelope, o.out_path);
}

int cmd_parts(const CommonOpts& o) {
    if (o.cone_spec.empty()) throw input_error("--cone is required");
    ConeDescriptor cone = resolve_cone(o.cone_spec);
    PartsLattice lattice = enumerate_parts(cone);
    ojson envelope;
    envelope["config"] = config_echo("parts", o);
    envelope["config"]["resolved_cone"] = cone_to_json(cone);
    envelope["result"] = lattice_to_json(lattice);
    envelope["warnings"] = ojson::array();
    return emit(envelope, o.out_path);
}

int cmd_check(const CommonOpts& o, int trials) {
    PresetSpec spec = resolve_map_and_cone(o);
    ojson envelope;
    envelope["config"] = config_echo("check", o);
    envelope["config"]["trials"] = trials;
    ojson result;
    result["order_preserving"] = property_report_to_json(check_order_preserving(spec.map, spec.cone, trials, o.seed, 1e-8));
    result["homogeneous"] = property_report_to_json(check_homogeneous(spec.map, spec.cone, trials, o.seed, 1e-8));
    envelope["result"] = result;
    ojson warnings = ojson::array();
    for (const auto& n : spec.notes) warnings.push_back(n);
    envelope["warnings"] = warnings;
    return emit(envelope, o.out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cone spectral radius toolkit"};
    app.require_subcommand(1);

    CommonOpts o;
    int theta_grid = 41;
    int per_part_starts = 3;
    int trials = 1000;
    std::string paper, family_preset, family_spec, range = "3..8", csv_path;
    std::string x_spec, y_spec;

    auto* radius = app.add_subcommand("radius", "Bonsall cone spectral radius with certificates");
    add_common(radius, o);

    auto* spectrum = app.add_subcommand("spectrum", "cone spectrum scan / boundary family sampling");
    add_common(spectrum, o);
    spectrum->add_option("--theta-grid", theta_grid, "sample count for the psd boundary family");
    spectrum->add_option("--per-part-starts", per_part_starts, "eigeniteration launches per part");

    auto* perturb = app.add_subcommand("perturb", "perturbation families and continuity verdicts");
    add_common(perturb, o);
    perturb->add_option("--paper", paper, "named reproduction (section3)");
    perturb->add_option("--family-preset", family_preset, "family preset (scaled-linear)");
    perturb->add_option("--family", family_spec, "JSON array of maps (inline or @file)");
    perturb->add_option("--range", range, "family index range, e.g. 3..8");
    perturb->add_option("--csv", csv_path, "write the row table as CSV");

    auto* thompson = app.add_subcommand("thompson", "Thompson metric between two cone points");
    add_common(thompson, o, false);
    thompson->add_option("--x", x_spec, "first point (JSON or @file)")->required();
    thompson->add_option("--y", y_spec, "second point (JSON or @file)")->required();

    auto* parts = app.add_subcommand("parts", "face-part lattice of a polyhedral cone");
    add_common(parts, o, false);

    auto* check = app.add_subcommand("check", "order-preservation and homogeneity testers");
    add_common(check, o);
    check->add_option("--trials", trials, "trial count per property");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (!o.seed_given) {
        if (const char* env = std::getenv("CONESPEC_SEED")) o.seed = std::strtoull(env, nullptr, 10);
    }

    try {
        if (radius->parsed()) return cmd_radius(o);
        if (spectrum->parsed()) return cmd_spectrum(o, theta_grid, per_part_starts);
        if (perturb->parsed()) return cmd_perturb(o, paper, family_preset, family_spec, range, csv_path);
        if (thompson->parsed()) return cmd_thompson(o, x_spec, y_spec);
        if (parts->parsed()) return cmd_parts(o);
        if (check->parsed()) return cmd_check(o, trials);
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const capability_error& e) {
        std::cerr << "capability error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
