#include "tqc/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace tqc {

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double num_from(const json& j, const std::string& field) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
        if (s == "nan") return NAN;
    }
    throw std::invalid_argument("field '" + field + "': expected a number");
}

json point_json(Point p) { return json::array({num(p.x), num(p.y)}); }

json curve_to_json(const ClosedCurve& c) {
    json v = json::array();
    for (const Point& p : c.vertices()) v.push_back(point_json(p));
    return {{"closed", true}, {"orientation", c.orientation() == Orientation::ccw ? "ccw" : "cw"}, {"vertices", v}};
}

ClosedCurve curve_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("curve: expected a JSON object");
    if (j.contains("closed") && !(j["closed"].is_boolean() && j["closed"].get<bool>()))
        throw std::invalid_argument("field 'closed': must be true");
    if (!j.contains("vertices")) throw std::invalid_argument("field 'vertices': missing");
    const json& v = j["vertices"];
    if (!v.is_array()) throw std::invalid_argument("field 'vertices': expected an array");
    std::vector<Point> pts;
    pts.reserve(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const std::string f = "vertices[" + std::to_string(k) + "]";
        if (!v[k].is_array() || v[k].size() != 2) throw std::invalid_argument("field '" + f + "': expected [x, y]");
        pts.push_back({num_from(v[k][0], f + "[0]"), num_from(v[k][1], f + "[1]")});
    }
    ClosedCurve c;
    try {
        c = ClosedCurve(std::move(pts));
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("field 'vertices': ") + e.what());
    }
    if (j.contains("orientation")) {
        const json& o = j["orientation"];
        if (!o.is_string() || (o != "ccw" && o != "cw")) throw std::invalid_argument("field 'orientation': expected \"ccw\" or \"cw\"");
        if ((o == "ccw") != (c.orientation() == Orientation::ccw))
            throw std::invalid_argument("field 'orientation': does not match the vertex order");
    }
    return c;
}

static json opt_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

static json triple_json(const Triple& w) { return json::array({w.a, w.b, w.x}); }

json to_json(const TurningReport& r) {
    return {{"t", num(r.t)},
            {"C_star", num(r.C_star)},
            {"witness", json::array({r.witness_i, r.witness_j})},
            {"fit_t", opt_num(r.fit_t)},
            {"fit_C", opt_num(r.fit_C)},
            {"residual", opt_num(r.residual)},
            {"pairs", r.pair_count},
            {"strategy", r.strategy}};
}

json to_json(const SubdivisionConstants& c) {
    return {{"C", num(c.C)},       {"t", num(c.t)},         {"eps", num(c.eps)},
            {"alpha", num(c.alpha)}, {"h_alpha", num(c.h_alpha)}, {"p", num(c.p)},
            {"delta", num(c.delta)}, {"log2_delta", {{"value", num(c.log2_delta)}, {"log2", true}}}};
}

json to_json(const TreeConstants& c) {
    json j = {{"p", c.p},
              {"m", c.m},
              {"n", c.n},
              {"mu", {{"value", num(c.log2_mu)}, {"log2", true}}},
              {"c", {{"value", num(c.log2_c)}, {"log2", true}}},
              {"R", {{"value", num(c.log2_R)}, {"log2", true}}},
              {"N_log2", {{"value", num(c.log2_N)}, {"log2", true}}},
              {"two_pow_n_ge_mu_pow_m", c.two_pow_n_ge_mu_pow_m},
              {"four_n_plus_3_le_p_pow_m", c.four_n_plus_3_le_p_pow_m}};
    j["N"] = c.N_exact ? json(c.N) : json(nullptr);
    return j;
}

json to_json(const SubarcTree& t) {
    json nodes = json::array();
    for (std::size_t l = 0; l < t.levels.size(); ++l)
        for (std::size_t i = 0; i < t.levels[l].size(); ++i) {
            const ArcSpan& s = t.levels[l][i];
            nodes.push_back({{"word", t.word(l, i)}, {"start", s.start}, {"end", s.end}});
        }
    return {{"branching", t.branching}, {"depth", t.depth}, {"nodes", nodes}};
}

json to_json(const TreeVerification& v) {
    return {{"prop3", {{"ratio", num(v.prop3_ratio)}, {"level", v.prop3_level}, {"index", v.prop3_index},
                       {"threshold", num(v.prop3_threshold)}, {"pass", v.prop3_pass}}},
            {"prop4", {{"ratio", num(v.prop4_ratio)}, {"level", v.prop4_level}, {"index", v.prop4_index},
                       {"threshold", num(v.prop4_threshold)}, {"pass", v.prop4_pass}}},
            {"partition_ok", v.partition_ok}};
}

json to_json(const BoundaryMap& m) {
    json s = json::array();
    for (const MapSample& q : m.samples) s.push_back({{"theta", num(q.theta)}, {"x", num(q.p.x)}, {"y", num(q.p.y)}});
    return {{"kind", map_kind_name(m.kind)}, {"metric", metric_name(m.metric)}, {"samples", s}};
}

json to_json(const QsReport& r) {
    json bins = json::array();
    for (const QsBin& b : r.bins)
        bins.push_back({{"k_lo", num(b.k_lo)}, {"k_hi", num(b.k_hi)}, {"max_ratio", num(b.max_ratio)},
                        {"witness", triple_json(b.witness)}, {"count", b.count}});
    return {{"exponent", num(r.exponent)},
            {"metric", metric_name(r.metric)},
            {"weak_R", num(r.weak_R)},
            {"witness", triple_json(r.witness)},
            {"bins", bins},
            {"triples", r.triples_scanned},
            {"excluded_denominators", r.excluded_denominators},
            {"strategy", r.strategy}};
}

json to_json(const EtaFit& f) {
    return {{"A", num(f.A)},   {"B", num(f.B)}, {"A_raw", num(f.A_raw)}, {"max_residual", num(f.max_residual)},
            {"rms", num(f.rms)}, {"bins_used", f.bins_used}, {"pass", f.pass}};
}

json to_json(const MConditionReport& r) {
    return {{"value", num(r.value)}, {"witness", triple_json(r.witness)}, {"admissible", r.admissible}, {"tol", num(r.tol)}};
}

json to_json(const HolderReport& r) {
    return {{"K1", num(r.K1)},
            {"K2", num(r.K2)},
            {"t", num(r.t)},
            {"implied_weak_R", num(r.implied_weak_R)},
            {"K1_witness", json::array({r.k1_i, r.k1_j})},
            {"K2_witness", json::array({r.k2_i, r.k2_j})}};
}

json to_json(const PsiReport& r) {
    return {{"t", num(r.t)},
            {"R", num(r.R)},
            {"worst_slack", num(r.worst_slack)},
            {"witness", triple_json(r.witness)},
            {"witness_k", num(r.witness_k)},
            {"witness_m", num(r.witness_m)},
            {"triples", r.triples},
            {"pass", r.pass}};
}

json to_json(const CrowdingInfo& c) {
    json cuts = json::array();
    for (auto [a, b] : c.cuts) cuts.push_back(json::array({a, b}));
    return {{"cuts", cuts},
            {"removed", c.removed},
            {"dropped", c.dropped},
            {"refits", c.refits},
            {"min_dtheta", num(c.min_dtheta)},
            {"min_edge", num(c.min_edge)}};
}

json to_json(const KoebeReport& r) {
    return {{"pass", r.pass},
            {"slack", num(r.slack)},
            {"points", r.points},
            {"outside", r.outside},
            {"lower_margin", num(r.lower_margin)},
            {"upper_margin", num(r.upper_margin)},
            {"lower_witness", point_json(r.lower_witness)},
            {"upper_witness", point_json(r.upper_witness)}};
}

json to_json(const DiskMap& m) {
    json stages = json::array();
    for (const ZipperStage& s : m.stages) stages.push_back({{"invb", num(s.invb)}, {"c", num(s.c)}});
    json corr = json::array();
    for (const BoundaryCorr& b : m.boundary_corr)
        corr.push_back({{"theta", num(b.theta)}, {"x", num(b.p.x)}, {"y", num(b.p.y)}, {"vertex", b.vertex}});
    return {{"stages", stages},
            {"normalization",
             {{"z0", point_json(Point(m.z0))},
              {"z1", point_json(Point(m.z1))},
              {"zeta0_infinite", m.zeta0_infinite},
              {"zeta0", num(m.zeta0)},
              {"sign", m.sign},
              {"wc", point_json(Point(m.wc))},
              {"rotation", num(m.rotation)},
              {"center", point_json(m.center)},
              {"center_image", point_json(m.center_image)}}},
            {"boundary_corr", corr},
            {"domain_vertices", m.domain_curve ? m.domain_curve->size() : 0},
            {"crowding", to_json(m.crowding)},
            {"validation", to_json(m.validation)},
            {"diameter", num(m.diameter)}};
}

json to_json(const DerivRatioReport& r) {
    return {{"z1", point_json(r.z1)},
            {"z2", point_json(r.z2)},
            {"log_ratio", num(r.log_ratio)},
            {"lambda", num(r.lambda)},
            {"integrated_bound", num(r.integrated_bound)},
            {"integrated_pass", r.integrated_pass},
            {"hyperbolic_3lambda_pass", r.prop33_pass},
            {"hyperbolic_6lambda_pass", r.prop33_rho_pass}};
}

json to_json(const DerivRatioSummary& s) {
    return {{"pairs", s.pairs},
            {"integrated_fail", s.integrated_fail},
            {"hyperbolic_3lambda_fail", s.prop33_fail},
            {"hyperbolic_6lambda_fail", s.prop33_rho_fail},
            {"worst_integrated", num(s.worst_integrated)},
            {"worst_ratio_over_lambda", num(s.worst_prop33)},
            {"integrated_witness", to_json(s.integrated_witness)},
            {"hyperbolic_witness", to_json(s.prop33_witness)}};
}

static json witnessed(const Witnessed& w) { return {{"value", num(w.value)}, {"z", point_json(w.z)}}; }

json to_json(const ConformalConstantsReport& r) {
    return {{"t", num(r.t)},
            {"grid", r.grid},
            {"grid_points", r.grid_points},
            {"N3_hat", witnessed(r.N3_hat)},
            {"M_hat", witnessed(r.M_hat)},
            {"N_hat", witnessed(r.N_hat)},
            {"N2_hat", witnessed(r.N2_hat)},
            {"gh_len_ratio", witnessed(r.gh_len_ratio)},
            {"gh_diam_ratio", witnessed(r.gh_diam_ratio)},
            {"c_center", num(r.c_center)}};
}

json to_json(const Thm47Report& r) {
    return {{"t", num(r.t)},
            {"exponent", num(r.exponent)},
            {"M_hat", num(r.M_hat)},
            {"N_hat", num(r.N_hat)},
            {"triples", r.triples},
            {"worst_log_slack", num(r.worst_log_slack)},
            {"witness", json::array({r.a, r.b, r.x})},
            {"witness_k", num(r.witness_k)},
            {"ratios_pass", r.ratios_pass},
            {"chord_arc_pairs", r.chord_arc_pairs},
            {"chord_arc_fail", r.chord_arc_fail},
            {"chord_arc_pass", r.chord_arc_pass},
            {"rho", to_json(r.rho)},
            {"eta_fit", to_json(r.eta)},
            {"pass", r.pass}};
}

json spans_json(const ClosedCurve& c, const std::vector<ArcSpan>& spans) {
    json a = json::array();
    for (const ArcSpan& s : spans)
        a.push_back({{"start", s.start},
                     {"end", s.end},
                     {"direction", s.direction == Direction::positive ? "positive" : "negative"},
                     {"diameter", num(arc_diameter(c, s))}});
    return a;
}

std::string qs_csv(const QsReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "k_lo,k_hi,max_ratio,count\n";
    for (const QsBin& b : r.bins) os << b.k_lo << ',' << b.k_hi << ',' << b.max_ratio << ',' << b.count << '\n';
    return os.str();
}

std::string disk_map_svg(const DiskMap& m, std::size_t rings, std::size_t rays) {
    const ClosedCurve& c = m.domain_curve ? *m.domain_curve : *m.source_curve;
    double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
    for (const Point& p : c.vertices()) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    const double pad = 0.05 * std::max(x1 - x0, y1 - y0);
    std::ostringstream os;
    os.precision(9);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << x0 - pad << ' ' << -(y1 + pad) << ' '
       << x1 - x0 + 2 * pad << ' ' << y1 - y0 + 2 * pad << "\">\n";
    auto poly = [&](const std::vector<Point>& pts, bool closed, const char* style) {
        os << (closed ? "<polygon" : "<polyline") << " fill=\"none\" " << style << " points=\"";
        for (const Point& p : pts) os << p.x << ',' << -p.y << ' ';
        os << "\"/>\n";
    };
    const double w = 0.003 * std::max(x1 - x0, y1 - y0);
    std::ostringstream thin, thick;
    thin << "stroke=\"#4477aa\" stroke-width=\"" << w << "\"";
    thick << "stroke=\"black\" stroke-width=\"" << 2 * w << "\"";
    for (std::size_t k = 1; k <= rings; ++k) {
        const double r = 1.0 - std::pow(0.5, static_cast<double>(k));
        std::vector<Point> ring;
        for (int j = 0; j < 256; ++j) ring.push_back(eval(m, {r * std::cos(two_pi * j / 256), r * std::sin(two_pi * j / 256)}));
        poly(ring, true, thin.str().c_str());
    }
    for (std::size_t k = 0; k < rays; ++k) {
        const double a = two_pi * static_cast<double>(k) / static_cast<double>(rays);
        std::vector<Point> ray;
        for (int j = 0; j <= 128; ++j) {
            const double r = 1.0 - std::pow(1e-4, j / 128.0);
            ray.push_back(eval(m, {r * std::cos(a), r * std::sin(a)}));
        }
        poly(ray, false, thin.str().c_str());
    }
    poly(c.vertices(), true, thick.str().c_str());
    os << "</svg>\n";
    return os.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace tqc
