#include "tqc/curves.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <set>
#include <stdexcept>

namespace tqc {

double point_segment_dist(Point p, Point a, Point b) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return dist(p, a);
    double t = dot(p - a, ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return dist(p, a + t * ab);
}

double signed_area(const std::vector<Point>& v) {
    const std::size_t n = v.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % n];
        s += a.x * b.y - a.y * b.x;
    }
    return 0.5 * s;
}

namespace {

bool on_segment(Point a, Point b, Point p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool segments_touch(Point a, Point b, Point c, Point d) {
    const double d1 = orient(c, d, a), d2 = orient(c, d, b);
    const double d3 = orient(a, b, c), d4 = orient(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    if (d1 == 0 && on_segment(c, d, a)) return true;
    if (d2 == 0 && on_segment(c, d, b)) return true;
    if (d3 == 0 && on_segment(a, b, c)) return true;
    if (d4 == 0 && on_segment(a, b, d)) return true;
    return false;
}

// edges i and j of the closed polyline conflict
bool edges_conflict(const std::vector<Point>& v, std::size_t i, std::size_t j) {
    const std::size_t n = v.size();
    if (i == j) return false;
    const Point a = v[i], b = v[(i + 1) % n];
    const Point c = v[j], d = v[(j + 1) % n];
    const bool adj_ij = (i + 1) % n == j;
    const bool adj_ji = (j + 1) % n == i;
    if (adj_ij || adj_ji) {
        if (n == 3) return false;
        // shared vertex; only a fold back along the same line is a conflict
        Point shared, u, w;
        if (adj_ij) {
            shared = b;
            u = a - b;
            w = d - b;
        } else {
            shared = a;
            u = b - a;
            w = c - a;
        }
        (void)shared;
        return cross(u, w) == 0.0 && dot(u, w) > 0.0;
    }
    return segments_touch(a, b, c, d);
}

}  // namespace

bool is_simple_bruteforce(const std::vector<Point>& v) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (edges_conflict(v, i, j)) return false;
    return true;
}

bool is_simple(const std::vector<Point>& v) {
    const std::size_t n = v.size();
    if (n < 3) return false;
    // a generic rotation removes vertical edges and equal-x endpoints
    const double ang = 0.5236789123;
    const double ca = std::cos(ang), sa = std::sin(ang);
    std::vector<Point> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = {ca * v[i].x - sa * v[i].y, sa * v[i].x + ca * v[i].y};

    struct Seg {
        Point p, q;
    };
    std::vector<Seg> seg(n);
    auto before = [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); };
    for (std::size_t i = 0; i < n; ++i) {
        Point a = r[i], b = r[(i + 1) % n];
        if (before(b, a)) std::swap(a, b);
        seg[i] = {a, b};
    }
    struct Event {
        Point at;
        int type;  // 0 insert, 1 remove
        std::size_t id;
    };
    std::vector<Event> ev;
    ev.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        ev.push_back({seg[i].p, 0, i});
        ev.push_back({seg[i].q, 1, i});
    }
    std::sort(ev.begin(), ev.end(), [&](const Event& a, const Event& b) {
        if (a.at.x != b.at.x) return a.at.x < b.at.x;
        if (a.at.y != b.at.y) return a.at.y < b.at.y;
        if (a.type != b.type) return a.type < b.type;
        return a.id < b.id;
    });

    double sweep = 0.0;
    auto y_at = [&](const Seg& s) {
        if (sweep <= s.p.x) return s.p.y;
        if (sweep >= s.q.x) return s.q.y;
        const double t = (sweep - s.p.x) / (s.q.x - s.p.x);
        return s.p.y + t * (s.q.y - s.p.y);
    };
    auto slope = [](const Seg& s) {
        const double dx = s.q.x - s.p.x;
        return dx == 0.0 ? INFINITY : (s.q.y - s.p.y) / dx;
    };
    auto cmp = [&](std::size_t a, std::size_t b) {
        if (a == b) return false;
        const double ya = y_at(seg[a]), yb = y_at(seg[b]);
        if (ya != yb) return ya < yb;
        const double sa_ = slope(seg[a]), sb_ = slope(seg[b]);
        if (sa_ != sb_) return sa_ < sb_;
        return a < b;
    };
    std::set<std::size_t, decltype(cmp)> active(cmp);
    std::vector<decltype(active)::iterator> pos(n);

    for (const Event& e : ev) {
        sweep = e.at.x;
        if (e.type == 0) {
            auto it = active.insert(e.id).first;
            pos[e.id] = it;
            if (it != active.begin() && edges_conflict(r, *std::prev(it), e.id)) return false;
            auto nx = std::next(it);
            if (nx != active.end() && edges_conflict(r, *nx, e.id)) return false;
        } else {
            auto it = pos[e.id];
            auto nx = std::next(it);
            if (it != active.begin() && nx != active.end() && edges_conflict(r, *std::prev(it), *nx))
                return false;
            active.erase(it);
        }
    }
    return true;
}

ClosedCurve::ClosedCurve(std::vector<Point> vertices, bool check_simple) : v_(std::move(vertices)) {
    const std::size_t n = v_.size();
    if (n < 3) throw std::invalid_argument("curve needs at least 3 vertices");
    for (std::size_t i = 0; i < n; ++i) {
        if (!finite(v_[i])) throw std::invalid_argument("non-finite vertex " + std::to_string(i));
        if (v_[i] == v_[(i + 1) % n])
            throw std::invalid_argument("consecutive vertices coincide at " + std::to_string(i));
    }
    area_ = tqc::signed_area(v_);
    if (area_ == 0.0 || !std::isfinite(area_)) throw std::invalid_argument("degenerate polygon (zero area)");
    orient_ = area_ > 0 ? Orientation::ccw : Orientation::cw;
    if (check_simple && !is_simple(v_)) throw std::invalid_argument("curve is not simple");
}

const Point& ClosedCurve::at(std::ptrdiff_t i) const {
    const auto n = static_cast<std::ptrdiff_t>(v_.size());
    i %= n;
    if (i < 0) i += n;
    return v_[static_cast<std::size_t>(i)];
}

double ClosedCurve::perimeter() const {
    double s = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) s += dist(v_[i], v_[(i + 1) % v_.size()]);
    return s;
}

std::size_t ArcSpan::count(std::size_t n) const {
    if (full_loop()) return n + 1;
    if (direction == Direction::positive) return (end + n - start) % n + 1;
    return (start + n - end) % n + 1;
}

std::size_t ArcSpan::vertex(std::size_t k, std::size_t n) const {
    if (direction == Direction::positive) return (start + k) % n;
    return (start + n - k % n) % n;
}

ClosedCurve ensure_ccw(const ClosedCurve& curve) {
    if (curve.orientation() == Orientation::ccw) return curve;
    std::vector<Point> v(curve.vertices().rbegin(), curve.vertices().rend());
    return ClosedCurve(std::move(v), false);
}

namespace {

std::vector<Point> hull_of(std::vector<Point> p) {
    std::sort(p.begin(), p.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) return p;
    std::vector<Point> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && orient(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && orient(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    return h;
}

double brute_diameter(const std::vector<Point>& p) {
    double best = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) best = std::max(best, dist2(p[i], p[j]));
    return std::sqrt(best);
}

}  // namespace

double diameter_of(const std::vector<Point>& pts) {
    if (pts.size() <= 64) return brute_diameter(pts);
    return brute_diameter(hull_of(pts));
}

double curve_diameter(const ClosedCurve& curve) { return diameter_of(curve.vertices()); }

double arc_diameter(const ClosedCurve& curve, const ArcSpan& span) {
    const std::size_t n = curve.size();
    const std::size_t m = span.count(n);
    std::vector<Point> pts;
    pts.reserve(m);
    for (std::size_t k = 0; k < m; ++k) pts.push_back(curve[span.vertex(k, n)]);
    return diameter_of(pts);
}

ArcSpan smaller_subarc(const ClosedCurve& curve, std::size_t i, std::size_t j) {
    const std::size_t n = curve.size();
    if (i == j) throw std::invalid_argument("smaller_subarc: i == j");
    if (i >= n || j >= n) throw std::invalid_argument("smaller_subarc: index out of range");
    const std::size_t lo = std::min(i, j), hi = std::max(i, j);
    const ArcSpan p{lo, hi, Direction::positive};
    const ArcSpan q{hi, lo, Direction::positive};
    const double dp = arc_diameter(curve, p), dq = arc_diameter(curve, q);
    bool take_p;
    if (dp != dq)
        take_p = dp < dq;
    else
        take_p = p.count(n) <= q.count(n);
    if (take_p) return {i, j, i == lo ? Direction::positive : Direction::negative};
    return {i, j, i == hi ? Direction::positive : Direction::negative};
}

ClosedCurve scaled(const ClosedCurve& curve, double s) {
    std::vector<Point> v = curve.vertices();
    for (auto& p : v) p = s * p;
    return ClosedCurve(std::move(v), false);
}

ClosedCurve refine_edges(const ClosedCurve& curve, std::size_t pieces) {
    if (pieces == 0) throw std::invalid_argument("refine_edges: pieces must be positive");
    const std::size_t n = curve.size();
    std::vector<Point> v;
    v.reserve(n * pieces);
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = curve[i], b = curve[(i + 1) % n];
        for (std::size_t j = 0; j < pieces; ++j) {
            const double f = static_cast<double>(j) / static_cast<double>(pieces);
            v.push_back(a + f * (b - a));
        }
    }
    return ClosedCurve(std::move(v), false);
}

std::pair<ClosedCurve, double> normalize_unit_diameter(const ClosedCurve& curve) {
    const double d = curve_diameter(curve);
    if (!(d > 0.0)) throw std::invalid_argument("normalize_unit_diameter: zero diameter");
    const double s = 1.0 / d;
    return {scaled(curve, s), s};
}

std::vector<double> cumulative_arclength(const ClosedCurve& curve) {
    const std::size_t n = curve.size();
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + dist(curve[i], curve[(i + 1) % n]);
    return cum;
}

Point point_at_arclength(const ClosedCurve& curve, const std::vector<double>& cum, double s) {
    const std::size_t n = curve.size();
    const double total = cum[n];
    s = std::fmod(s, total);
    if (s < 0) s += total;
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    std::size_t e = static_cast<std::size_t>(std::distance(cum.begin(), it)) - 1;
    if (e >= n) e = n - 1;
    const double len = cum[e + 1] - cum[e];
    const double t = len > 0 ? (s - cum[e]) / len : 0.0;
    const Point a = curve[e], b = curve[(e + 1) % n];
    return a + t * (b - a);
}

ClosedCurve resample_arclength(const ClosedCurve& curve, std::size_t n) {
    if (n < 3) throw std::invalid_argument("resample_arclength: n < 3");
    const auto cum = cumulative_arclength(curve);
    const double total = cum.back();
    std::vector<Point> out(n);
    out[0] = curve[0];
    for (std::size_t k = 1; k < n; ++k)
        out[k] = point_at_arclength(curve, cum, total * static_cast<double>(k) / static_cast<double>(n));
    return ClosedCurve(std::move(out));
}

double polyline_distance(const ClosedCurve& curve, Point p) {
    const std::size_t n = curve.size();
    double best = INFINITY;
    for (std::size_t i = 0; i < n; ++i) best = std::min(best, point_segment_dist(p, curve[i], curve[(i + 1) % n]));
    return best;
}

bool point_inside(const ClosedCurve& curve, Point p) {
    const std::size_t n = curve.size();
    bool in = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point a = curve[i], b = curve[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xint) in = !in;
        }
    }
    return in;
}

}  // namespace tqc
