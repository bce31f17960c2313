#include "tqc/parametrize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tqc {

std::string map_kind_name(MapKind k) {
    switch (k) {
        case MapKind::tree: return "tree";
        case MapKind::arclength: return "arclength";
        case MapKind::reparametrized: return "reparametrized";
        case MapKind::conformal: return "conformal";
    }
    return "?";
}

std::string metric_name(CircleMetric m) { return m == CircleMetric::chordal ? "chordal" : "arclength"; }

CircleMetric parse_metric(const std::string& s) {
    if (s == "chordal") return CircleMetric::chordal;
    if (s == "arclength") return CircleMetric::arclength;
    throw std::invalid_argument("unknown metric '" + s + "'");
}

double circle_distance(double a, double b, CircleMetric m) {
    if (m == CircleMetric::chordal) return 2.0 * std::abs(std::sin(0.5 * (a - b)));
    double d = std::fmod(std::abs(a - b), two_pi);
    return std::min(d, two_pi - d) / two_pi;
}

namespace {

BoundaryMap empty_map(const ClosedCurve& curve, MapKind kind) {
    BoundaryMap m;
    m.source = std::make_shared<const ClosedCurve>(curve);
    m.cum = std::make_shared<const std::vector<double>>(cumulative_arclength(curve));
    m.kind = kind;
    return m;
}

}  // namespace

BoundaryMap build_boundary_map(const SubarcTree& tree, std::size_t min_interior) {
    const ClosedCurve& c = *tree.curve;
    BoundaryMap m = empty_map(c, MapKind::tree);
    const auto& cum = *m.cum;
    const std::size_t n = c.size();
    const auto& leaves = tree.levels.back();
    const double L = static_cast<double>(leaves.size());
    const double total = cum[n];
    double s_prev = -1.0;
    for (std::size_t q = 0; q < leaves.size(); ++q) {
        const ArcSpan& sp = leaves[q];
        double s0 = cum[sp.start];
        double s1 = sp.end == 0 ? total : cum[sp.end];
        if (s1 <= s0) s1 += total;
        if (s0 < s_prev) {
            s0 += total;
            s1 += total;
        }
        const std::size_t K = std::max(min_interior + 1, tree.edges(sp));
        const double th0 = two_pi * static_cast<double>(q) / L;
        const double th1 = two_pi * static_cast<double>(q + 1) / L;
        for (std::size_t j = 0; j < K; ++j) {
            const double f = static_cast<double>(j) / static_cast<double>(K);
            MapSample smp;
            smp.theta = th0 + f * (th1 - th0);
            smp.s = s0 + f * (s1 - s0);
            smp.p = j == 0 ? c[sp.start] : point_at_arclength(c, cum, smp.s);
            m.samples.push_back(smp);
        }
        s_prev = s1;
    }
    return m;
}

BoundaryMap arclength_param(const ClosedCurve& curve, std::size_t n) {
    if (n < 16) throw std::invalid_argument("arclength_param needs n >= 16");
    BoundaryMap m = empty_map(curve, MapKind::arclength);
    const double total = m.cum->back();
    m.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(n);
        m.samples[i].theta = two_pi * f;
        m.samples[i].s = total * f;
        m.samples[i].p = i == 0 ? curve[0] : point_at_arclength(curve, *m.cum, total * f);
    }
    return m;
}

BoundaryMap map_from_correspondence(const ClosedCurve& curve, const std::vector<double>& thetas,
                                    const std::vector<std::size_t>& idx, MapKind kind) {
    if (thetas.size() != idx.size() || thetas.empty()) throw std::invalid_argument("correspondence size mismatch");
    BoundaryMap m = empty_map(curve, kind);
    const double total = m.cum->back();
    double wraps = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (k > 0 && !(thetas[k] > thetas[k - 1])) throw std::invalid_argument("thetas not strictly increasing");
        if (k > 0 && idx[k] <= idx[k - 1]) wraps += total;
        MapSample smp;
        smp.theta = thetas[k];
        smp.p = curve[idx[k]];
        smp.s = (*m.cum)[idx[k]] + wraps;
        m.samples.push_back(smp);
    }
    if (m.samples.back().s - m.samples.front().s >= total) throw std::invalid_argument("correspondence winds more than once");
    return m;
}

CircleHomeo CircleHomeo::identity() { return from_knots({0.0, two_pi}, {0.0, two_pi}); }

CircleHomeo CircleHomeo::from_knots(std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("homeomorphism needs matching knot lists");
    if (x.front() != 0.0 || y.front() != 0.0 || std::abs(x.back() - two_pi) > 1e-12 || std::abs(y.back() - two_pi) > 1e-12)
        throw std::invalid_argument("homeomorphism must fix 0 and 2pi");
    for (std::size_t k = 1; k < x.size(); ++k)
        if (!(x[k] > x[k - 1]) || !(y[k] > y[k - 1]))
            throw std::invalid_argument("homeomorphism knots not strictly increasing");
    x.back() = two_pi;
    y.back() = two_pi;
    CircleHomeo h;
    h.x = std::move(x);
    h.y = std::move(y);
    return h;
}

double CircleHomeo::operator()(double theta) const {
    if (theta <= 0.0) return y.front() + (theta - x.front());
    if (theta >= two_pi) return theta;
    auto it = std::upper_bound(x.begin(), x.end(), theta);
    const std::size_t k = static_cast<std::size_t>(it - x.begin()) - 1;
    if (theta == x[k]) return y[k];
    const double f = (theta - x[k]) / (x[k + 1] - x[k]);
    return y[k] + f * (y[k + 1] - y[k]);
}

CircleHomeo CircleHomeo::inverse() const {
    CircleHomeo h;
    h.x = y;
    h.y = x;
    return h;
}

BoundaryMap reparametrize(const BoundaryMap& map, const CircleHomeo& h) {
    BoundaryMap out = map;
    out.kind = MapKind::reparametrized;
    for (auto& s : out.samples) s.theta = h(s.theta);
    for (std::size_t k = 1; k < out.samples.size(); ++k)
        if (!(out.samples[k].theta > out.samples[k - 1].theta))
            throw std::invalid_argument("reparametrized thetas not strictly increasing");
    return out;
}

Point eval_map(const BoundaryMap& map, double theta) {
    const auto& S = map.samples;
    if (S.empty()) throw std::invalid_argument("empty map");
    const ClosedCurve& c = *map.source;
    const double total = map.cum->back();
    theta = wrap_positive(theta);
    auto it = std::upper_bound(S.begin(), S.end(), theta, [](double v, const MapSample& s) { return v < s.theta; });
    const MapSample* a;
    double ta, tb, sa, sb;
    if (it == S.begin()) {
        a = &S.back();
        ta = S.back().theta - two_pi;
        sa = S.back().s - total;
        tb = S.front().theta;
        sb = S.front().s;
    } else {
        a = &*(it - 1);
        ta = a->theta;
        sa = a->s;
        if (it == S.end()) {
            tb = S.front().theta + two_pi;
            sb = S.front().s + total;
        } else {
            tb = it->theta;
            sb = it->s;
        }
    }
    if (theta == ta) return a->p;
    const double f = (theta - ta) / (tb - ta);
    return point_at_arclength(c, *map.cum, sa + f * (sb - sa));
}

BoundaryMap transformed(const BoundaryMap& map, double scale, double rot, Point shift) {
    const cplx w = std::polar(scale, rot);
    auto T = [&](Point p) { return Point(w * p.c()) + shift; };
    std::vector<Point> v;
    v.reserve(map.source->size());
    for (const auto& p : map.source->vertices()) v.push_back(T(p));
    BoundaryMap out = map;
    out.source = std::make_shared<const ClosedCurve>(std::move(v), false);
    out.cum = std::make_shared<const std::vector<double>>(cumulative_arclength(*out.source));
    for (auto& s : out.samples) {
        s.p = T(s.p);
        s.s *= scale;
    }
    return out;
}

}  // namespace tqc
