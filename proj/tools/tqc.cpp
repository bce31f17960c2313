#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "tqc/conformal.hpp"
#include "tqc/generators.hpp"
#include "tqc/parallel.hpp"
#include "tqc/report.hpp"

using namespace tqc;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string out;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string metric = "chordal";
};

struct Context {
    std::string command;
    Common common;
    std::map<std::string, std::string> inputs;  // path -> fnv1a64 of the bytes
};

Context ctx;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ClosedCurve load_curve(const std::string& path) {
    if (path.empty()) throw UsageError("--curve is required");
    const std::string bytes = read_file(path);
    ctx.inputs[path] = fnv1a64_hex(bytes);
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw UsageError(path + ": malformed JSON: " + e.what());
    }
    try {
        return curve_from_json(j);
    } catch (const std::invalid_argument& e) {
        throw UsageError(path + ": " + e.what());
    }
}

json meta() {
    json in = json::object();
    for (const auto& [p, h] : ctx.inputs) in[p] = h;
    return {{"version", tool_version},
            {"command", ctx.command},
            {"seed", ctx.common.seed},
            {"metric", ctx.common.metric},
            {"inputs", in}};
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
}

void emit(json report) {
    report["meta"] = meta();
    write_text(ctx.common.out, dump(report));
}

void add_common(CLI::App* app) {
    app->add_option("-o,--out", ctx.common.out, "output file (stdout when omitted)");
    app->add_option("--seed", ctx.common.seed, "seed for sampled scans");
    app->add_option("--threads", ctx.common.threads, "OpenMP threads (overrides TQC_THREADS)");
    app->add_option("--metric", ctx.common.metric, "circle metric")->check(CLI::IsMember({"chordal", "arclength"}));
}

// ---- boundary maps ----

struct MapArgs {
    std::string kind = "arclength";
    std::size_t n = 1024;
    std::size_t p = 4;
    std::size_t depth = 3;
};

void add_map_options(CLI::App* app, MapArgs& m) {
    app->add_option("--map", m.kind, "boundary map kind")->check(CLI::IsMember({"tree", "arclength", "conformal"}));
    app->add_option("--n", m.n, "samples of the arclength map");
    app->add_option("--p", m.p, "tree branching");
    app->add_option("--depth", m.depth, "tree depth");
}

BoundaryMap with_metric(BoundaryMap m) {
    m.metric = parse_metric(ctx.common.metric);
    return m;
}

BoundaryMap tree_map(const ClosedCurve& c, std::size_t p, std::size_t depth) {
    return with_metric(build_boundary_map(build_tree(c, p, depth)));
}

BoundaryMap make_map(const ClosedCurve& c, const MapArgs& a) {
    if (a.kind == "tree") return tree_map(c, a.p, a.depth);
    if (a.kind == "arclength") return with_metric(arclength_param(c, a.n));
    return conformal_boundary_map(zipper_fit(c), parse_metric(ctx.common.metric));
}

QsOptions qs_options() {
    QsOptions o;
    o.seed = ctx.common.seed;
    return o;
}

// ---- verbs ----

int run_gen(const CurveSpec& spec, double adaptive, std::size_t refine) {
    ClosedCurve c = generate(spec);
    if (adaptive > 0.0) {
        if (spec.kind != CurveKind::cusp) throw UsageError("--adaptive applies to the cusp only");
        c = adaptive_cusp_sampling(c, c[cusp_tip_index], adaptive);
    }
    if (refine > 1) c = refine_edges(c, refine);
    json j = curve_to_json(c);
    j["spec"] = {{"shape", kind_name(spec.kind)}, {"n", spec.n},        {"a", num(spec.a)},
                 {"b", num(spec.b)},            {"level", spec.level}, {"s", num(spec.s)},
                 {"seed", spec.seed},           {"amplitude", num(spec.amplitude)},
                 {"adaptive", num(adaptive)},   {"refine", refine}};
    emit(j);
    return 0;
}

int run_turning(const std::string& path, double t, bool fit, bool straddle, std::size_t center, bool normalize) {
    ClosedCurve c = load_curve(path);
    if (normalize) c = normalize_unit_diameter(c).first;
    TurningOptions o;
    o.seed = ctx.common.seed;
    json j = to_json(turning_constant(c, t, o));
    if (fit) {
        PairFilter f;
        if (straddle) {
            f.kind = PairFilter::Kind::straddle;
            f.center = center;
        }
        j["exponent_fit"] = to_json(exponent_fit(c, f));
    }
    emit(j);
    return 0;
}

int run_subdivide(const std::string& path, double eps, std::size_t start, std::size_t p, std::size_t resample, double C,
                  double t) {
    ClosedCurve c = normalize_unit_diameter(load_curve(path)).first;
    if (resample > 0) c = resample_arclength(c, resample);
    auto pieces = greedy_subdivide(c, eps, start);
    json j = {{"eps", num(eps)}, {"start", start}, {"greedy", spans_json(c, pieces)}};
    if (p > 0) j["equalized"] = spans_json(c, equalize_count(c, pieces, p));
    j["constants"] = to_json(theoretical_constants(C, t, eps));
    emit(j);
    return 0;
}

int run_tree(const std::string& path, std::size_t p, std::size_t depth, double C) {
    const ClosedCurve c = load_curve(path);
    const SubarcTree tree = build_tree(c, p, depth);
    emit({{"tree", to_json(tree)}, {"verification", to_json(verify_tree(tree))}, {"constants", to_json(tree_constants(p, C))}});
    return 0;
}

int run_param(const std::string& path, const MapArgs& a) {
    emit(to_json(make_map(load_curve(path), a)));
    return 0;
}

int run_qs(const std::string& path, const MapArgs& a, double exponent, std::size_t bins, double kmax, const std::string& csv,
           bool extras) {
    const BoundaryMap m = make_map(load_curve(path), a);
    const QsReport weak = weak_qs_constant(m, exponent, qs_options());
    const QsReport mod = qs_modulus(m, exponent, bins, kmax, qs_options());
    json j = {{"map", map_kind_name(m.kind)}, {"samples", m.size()}, {"weak", to_json(weak)}, {"modulus", to_json(mod)},
              {"eta_fit", to_json(eta_shape_fit(mod))}};
    if (extras) {
        j["m_condition"] = to_json(m_condition(m, exponent));
        j["holder"] = to_json(holder_constants(m, exponent));
    }
    if (!csv.empty()) write_text(csv, qs_csv(mod));
    emit(j);
    return 0;
}

int run_conformal(const std::string& path, std::size_t grid, double rmax, std::size_t pairs, const std::string& svg,
                  double t, bool constants) {
    const DiskMap m = zipper_fit(load_curve(path));
    const KoebeReport k = koebe_check(m, disk_grid(grid, rmax));
    const DerivRatioSummary d = derivative_ratio_scan(m, pairs, rmax, ctx.common.seed);
    json j = {{"map", to_json(m)}, {"koebe", to_json(k)}, {"derivative_ratio", to_json(d)}};
    if (constants) j["lemma_constants"] = to_json(lemma_constants_report(m, t, lemma_grid(6, 12), 64, ctx.common.seed));
    const bool pass = k.pass && d.integrated_fail == 0 && d.prop33_rho_fail == 0;
    j["pass"] = pass;
    if (!svg.empty()) write_text(svg, disk_map_svg(m));
    emit(j);
    return pass ? 0 : 2;
}

// ---- scenarios ----

struct ScenarioArgs {
    std::string name, curve;
    double t = 1.0;
    std::size_t p = 4, depth = 3, n = 512;
    std::size_t radii = 6, angles = 12;
    std::size_t budget = 2'000'000;
};

const std::vector<double> scenario_radii{0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};

json scenario_cor35() {
    const double bound = 1.0 / (18.0 * pi * pi);
    json rows = json::array();
    double lo = INFINITY;
    for (double r : scenario_radii)
        for (int k = 0; k < 8; ++k) {
            const SectorGeometry g = sector_geometry(r, two_pi * k / 8.0);
            const double w = harmonic_measure(g.z, g.A_arcs);
            lo = std::min(lo, w);
            rows.push_back({{"r", num(r)}, {"alpha", num(g.alpha)}, {"omega", num(w)}});
        }
    return {{"bound", num(bound)}, {"min_omega", num(lo)}, {"grid", rows}, {"pass", lo >= bound}};
}

json scenario_cor34() {
    const double bound = 0.5 * std::log(pi);
    json rows = json::array();
    double hi = -INFINITY;
    bool below = true;
    for (double r : scenario_radii) {
        const double d = geodesic_nearest_delta(r);
        const double l = hyperbolic_distance({r, 0}, {d, 0});
        hi = std::max(hi, l);
        below = below && d < r;
        rows.push_back({{"r", num(r)}, {"delta", num(d)}, {"lambda", num(l)}});
    }
    return {{"bound", num(bound)}, {"max_lambda", num(hi)}, {"delta_below_r", below}, {"grid", rows},
            {"pass", hi <= bound && below}};
}

json scenario_thm27(const ScenarioArgs& a) {
    const ClosedCurve c = load_curve(a.curve);
    const QsReport r0 = weak_qs_constant(tree_map(c, a.p, a.depth), a.t, qs_options());
    const QsReport r1 = weak_qs_constant(tree_map(c, a.p, a.depth + 1), a.t, qs_options());
    const double change = std::max(r1.weak_R / r0.weak_R, r0.weak_R / r1.weak_R);
    return {{"t", num(a.t)},
            {"p", a.p},
            {"depth", a.depth},
            {"weak_depth", to_json(r0)},
            {"weak_next_depth", to_json(r1)},
            {"change_factor", num(change)},
            {"pass", std::isfinite(r0.weak_R) && std::isfinite(r1.weak_R) && change < 2.0}};
}

json scenario_prop23(const ScenarioArgs& a) {
    const BoundaryMap m = tree_map(load_curve(a.curve), a.p, a.depth);
    const QsReport r = weak_qs_constant(m, a.t, qs_options());
    std::vector<Point> img;
    for (const MapSample& s : m.samples) img.push_back(s.p);
    const TurningReport tr = turning_constant(ClosedCurve(img, false), a.t);
    return {{"t", num(a.t)}, {"weak", to_json(r)}, {"image_turning", to_json(tr)}, {"bound", num(2 * r.weak_R)},
            {"pass", tr.C_star <= 2 * r.weak_R}};
}

json scenario_thm51(const ScenarioArgs& a) {
    const BoundaryMap m = tree_map(load_curve(a.curve), a.p, a.depth);
    const QsReport r = weak_qs_constant(m, a.t, qs_options());
    const PsiReport ps = psi_bound_check(m, a.t, r.weak_R);
    return {{"t", num(a.t)}, {"weak", to_json(r)}, {"psi", to_json(ps)}, {"pass", ps.pass}};
}

json scenario_prop52(const ScenarioArgs& a) {
    const ClosedCurve c = load_curve(a.curve);
    const double e = a.t * a.t * a.t;
    const QsReport r0 = weak_qs_constant(with_metric(arclength_param(c, a.n)), e, qs_options());
    const QsReport r1 = weak_qs_constant(with_metric(arclength_param(c, 2 * a.n)), e, qs_options());
    const double change = std::max(r1.weak_R / r0.weak_R, r0.weak_R / r1.weak_R);
    return {{"t", num(a.t)},
            {"exponent", num(e)},
            {"n", a.n},
            {"weak_n", to_json(r0)},
            {"weak_2n", to_json(r1)},
            {"change_factor", num(change)},
            {"pass", std::isfinite(r0.weak_R) && std::isfinite(r1.weak_R) && change <= 2.0}};
}

json scenario_thm47(const ScenarioArgs& a) {
    const DiskMap m = zipper_fit(load_curve(a.curve));
    const ConformalConstantsReport L = lemma_constants_report(m, a.t, lemma_grid(a.radii, a.angles), 64, ctx.common.seed);
    const Thm47Report r = thm47_verify(m, a.t, a.budget, L, ctx.common.seed);
    return {{"map", {{"crowding", to_json(m.crowding)}, {"validation", to_json(m.validation)}, {"stages", m.stages.size()}}},
            {"lemma_constants", to_json(L)},
            {"thm47", to_json(r)},
            {"pass", r.pass}};
}

int run_verify(const ScenarioArgs& a) {
    json j;
    if (a.name == "cor35") j = scenario_cor35();
    else if (a.name == "cor34") j = scenario_cor34();
    else if (a.name == "thm27") j = scenario_thm27(a);
    else if (a.name == "prop23") j = scenario_prop23(a);
    else if (a.name == "thm51") j = scenario_thm51(a);
    else if (a.name == "prop52") j = scenario_prop52(a);
    else if (a.name == "thm47") j = scenario_thm47(a);
    else throw UsageError("unknown scenario '" + a.name + "'");
    j["scenario"] = a.name;
    const bool pass = j["pass"].get<bool>();
    emit(j);
    return pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    // program name without its directory; the thread count is left out since it never changes results
    for (int k = 0; k < argc; ++k) {
        std::string a = argv[k];
        if (k == 0) a = a.substr(a.find_last_of('/') == std::string::npos ? 0 : a.find_last_of('/') + 1);
        if (a == "--threads") {
            ++k;
            continue;
        }
        if (a.rfind("--threads=", 0) == 0) continue;
        ctx.command += (ctx.command.empty() ? "" : " ") + a;
    }

    CLI::App app{"t-quasicircle analysis toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    CurveSpec spec;
    std::string shape = "circle";
    double adaptive = 0.0;
    std::size_t refine = 1;
    auto* gen = app.add_subcommand("gen", "generate a curve");
    gen->add_option("--shape", shape)->check(CLI::IsMember({"circle", "ellipse", "koch", "cusp", "perturbed"}));
    gen->add_option("--n", spec.n);
    gen->add_option("--a", spec.a);
    gen->add_option("--b", spec.b);
    gen->add_option("--level", spec.level);
    gen->add_option("--s", spec.s);
    gen->add_option("--amplitude", spec.amplitude);
    gen->add_option("--adaptive", adaptive, "cusp only: geometric grading ratio toward the tip");
    gen->add_option("--refine", refine, "split every edge into this many pieces");
    add_common(gen);

    std::string curve;
    double t = 1.0;
    bool fit = false, straddle = false, normalize = false;
    std::size_t center = 0;
    auto* turning = app.add_subcommand("turning", "turning constant");
    turning->add_option("--curve", curve)->required();
    turning->add_option("--t", t);
    turning->add_flag("--fit", fit, "log-log exponent fit");
    turning->add_flag("--straddle", straddle, "fit only pairs straddling --center");
    turning->add_option("--center", center);
    turning->add_flag("--normalize", normalize, "scale to unit diameter first");
    add_common(turning);

    double eps = 0.5, C = 1.0;
    std::size_t start = 0, p = 0, resample = 0;
    auto* subdivide = app.add_subcommand("subdivide", "greedy subdivision after unit-diameter normalization");
    subdivide->add_option("--curve", curve)->required();
    subdivide->add_option("--eps", eps);
    subdivide->add_option("--start", start);
    subdivide->add_option("--p", p, "equalize to this many pieces");
    subdivide->add_option("--resample", resample, "resample by arclength first");
    subdivide->add_option("--C", C);
    subdivide->add_option("--t", t);
    add_common(subdivide);

    std::size_t branching = 4, depth = 3;
    auto* tree = app.add_subcommand("tree", "subarc tree and its constants");
    tree->add_option("--curve", curve)->required();
    tree->add_option("--p", branching);
    tree->add_option("--depth", depth);
    tree->add_option("--C", C);
    add_common(tree);

    MapArgs margs;
    auto* param = app.add_subcommand("param", "boundary map");
    param->add_option("--curve", curve)->required();
    add_map_options(param, margs);
    add_common(param);

    std::size_t bins = 48;
    double kmax = 8.0;
    std::string csv;
    bool extras = false;
    auto* qs = app.add_subcommand("qs", "quasisymmetry moduli of a boundary map");
    qs->add_option("--curve", curve)->required();
    add_map_options(qs, margs);
    qs->add_option("--t", t, "exponent on the denominator");
    qs->add_option("--bins", bins);
    qs->add_option("--kmax", kmax);
    qs->add_option("--csv", csv, "write (k, max_ratio) bins as CSV");
    qs->add_flag("--extras", extras, "also M-condition and Hoelder constants");
    add_common(qs);

    std::size_t grid = 500, pairs = 200;
    double rmax = 0.95;
    std::string svg;
    bool constants = false;
    auto* conformal = app.add_subcommand("conformal", "fit and validate a Riemann map of the disk");
    conformal->add_option("--curve", curve)->required();
    conformal->add_option("--grid", grid);
    conformal->add_option("--rmax", rmax);
    conformal->add_option("--pairs", pairs);
    conformal->add_option("--svg", svg);
    conformal->add_option("--t", t);
    conformal->add_flag("--constants", constants, "estimate the distortion constants on a 6x12 grid");
    add_common(conformal);

    ScenarioArgs sa;
    auto* verify = app.add_subcommand("verify", "named verification scenario");
    verify->add_option("--scenario", sa.name)->required();
    verify->add_option("--curve", sa.curve);
    verify->add_option("--t", sa.t);
    verify->add_option("--p", sa.p);
    verify->add_option("--depth", sa.depth);
    verify->add_option("--n", sa.n);
    verify->add_option("--radii", sa.radii);
    verify->add_option("--angles", sa.angles);
    verify->add_option("--budget", sa.budget);
    add_common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    int threads = 0;
    if (const char* env = std::getenv("TQC_THREADS")) threads = std::atoi(env);
    if (ctx.common.threads > 0) threads = ctx.common.threads;
    if (threads > 0) set_threads(threads);

    try {
        if (*gen) {
            spec.kind = parse_kind(shape);
            spec.seed = ctx.common.seed;
            return run_gen(spec, adaptive, refine);
        }
        if (*turning) return run_turning(curve, t, fit, straddle, center, normalize);
        if (*subdivide) return run_subdivide(curve, eps, start, p, resample, C, t);
        if (*tree) return run_tree(curve, branching, depth, C);
        if (*param) return run_param(curve, margs);
        if (*qs) return run_qs(curve, margs, t, bins, kmax, csv, extras);
        if (*conformal) return run_conformal(curve, grid, rmax, pairs, svg, t, constants);
        if (*verify) return run_verify(sa);
    } catch (const ValidationError& e) {
        std::cerr << "validation failed: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
