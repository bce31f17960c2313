#include "tqc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace tqc {

CurveKind parse_kind(const std::string& name) {
    if (name == "circle") return CurveKind::circle;
    if (name == "ellipse") return CurveKind::ellipse;
    if (name == "koch") return CurveKind::koch;
    if (name == "cusp") return CurveKind::cusp;
    if (name == "perturbed") return CurveKind::perturbed;
    throw std::invalid_argument("unknown shape '" + name + "'");
}

std::string kind_name(CurveKind k) {
    switch (k) {
        case CurveKind::circle: return "circle";
        case CurveKind::ellipse: return "ellipse";
        case CurveKind::koch: return "koch";
        case CurveKind::cusp: return "cusp";
        case CurveKind::perturbed: return "perturbed";
    }
    return "?";
}

namespace {

std::vector<Point> ellipse_points(std::size_t n, double a, double b) {
    std::vector<Point> v(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double th = two_pi * static_cast<double>(k) / static_cast<double>(n);
        v[k] = {a * std::cos(th), b * std::sin(th)};
    }
    return v;
}

std::vector<Point> koch_points(int level) {
    const double h = std::sqrt(3.0) / 2.0;
    std::vector<Point> v{{0.0, 1.0}, {-h, -0.5}, {h, -0.5}};
    for (int l = 0; l < level; ++l) {
        std::vector<Point> w;
        w.reserve(4 * v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Point p = v[i], q = v[(i + 1) % v.size()];
            const Point d = (1.0 / 3.0) * (q - p);
            const Point a = p + d, b = p + 2.0 * d;
            // outward side of a ccw edge is on the right: rotate by -60 degrees
            const Point apex = a + Point{0.5 * d.x + h * d.y, -h * d.x + 0.5 * d.y};
            w.push_back(p);
            w.push_back(a);
            w.push_back(apex);
            w.push_back(b);
        }
        v = std::move(w);
    }
    return v;
}

std::vector<Point> cusp_points(std::size_t n, double s) {
    std::size_t seg = (n - 1) / 9;
    if ((n - 1 - seg) % 2 != 0) ++seg;
    const std::size_t K = (n - 1 - seg) / 2;
    std::vector<Point> v;
    v.reserve(n);
    for (std::size_t k = 0; k <= K; ++k) {
        const double x = static_cast<double>(k) / static_cast<double>(K);
        v.push_back({x, std::pow(x, s)});
    }
    for (std::size_t j = 1; j <= seg; ++j) v.push_back({1.0, 1.0 + static_cast<double>(j) / static_cast<double>(seg + 1)});
    for (std::size_t k = K; k >= 1; --k) {
        const double x = static_cast<double>(k) / static_cast<double>(K);
        v.push_back({x, 2.0 * std::pow(x, s)});
    }
    return v;
}

std::vector<Point> perturbed_points(std::size_t n, std::uint64_t seed, double amp) {
    // odd modes only: noise(th + pi) = -noise(th), so the deepest dent equals the amplitude
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int modes[] = {3, 5, 7, 9};
    double ca[4], sa[4];
    for (int k = 0; k < 4; ++k) {
        ca[k] = u(rng) / modes[k];
        sa[k] = u(rng) / modes[k];
    }
    std::vector<double> noise(n);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double th = two_pi * static_cast<double>(i) / static_cast<double>(n);
        double v = 0.0;
        for (int k = 0; k < 4; ++k) v += ca[k] * std::cos(modes[k] * th) + sa[k] * std::sin(modes[k] * th);
        noise[i] = v;
        peak = std::max(peak, std::abs(v));
    }
    const double scale = peak > 0 ? amp / peak : 0.0;
    std::vector<Point> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = two_pi * static_cast<double>(i) / static_cast<double>(n);
        const double r = 1.0 + scale * noise[i];
        if (!(r > 0)) throw std::invalid_argument("perturbation amplitude too large: curve self-intersects");
        v[i] = {r * std::cos(th), r * std::sin(th)};
    }
    return v;
}

}  // namespace

ClosedCurve generate(const CurveSpec& spec) {
    if (spec.kind != CurveKind::koch && spec.n < 16) throw std::invalid_argument("n must be >= 16");
    std::vector<Point> v;
    switch (spec.kind) {
        case CurveKind::circle:
            if (!(spec.a > 0)) throw std::invalid_argument("radius must be positive");
            v = ellipse_points(spec.n, spec.a, spec.a);
            break;
        case CurveKind::ellipse:
            if (!(spec.a > 0 && spec.b > 0)) throw std::invalid_argument("semi-axes must be positive");
            v = ellipse_points(spec.n, spec.a, spec.b);
            break;
        case CurveKind::koch:
            if (spec.level < 0 || spec.level > 7) throw std::invalid_argument("koch level must be in [0, 7]");
            v = koch_points(spec.level);
            break;
        case CurveKind::cusp:
            if (!(spec.s >= 1.0 && spec.s <= 6.0)) throw std::invalid_argument("cusp order must be in [1, 6]");
            v = cusp_points(spec.n, spec.s);
            break;
        case CurveKind::perturbed:
            if (!(spec.amplitude >= 0)) throw std::invalid_argument("amplitude must be >= 0");
            v = perturbed_points(spec.n, spec.seed, spec.amplitude);
            break;
    }
    ClosedCurve c(std::move(v));
    if (c.orientation() != Orientation::ccw) return ensure_ccw(c);
    return c;
}

ClosedCurve adaptive_cusp_sampling(const ClosedCurve& curve, Point focus, double ratio) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("ratio must lie in (0, 1)");
    const std::size_t n = curve.size();
    const auto cum = cumulative_arclength(curve);
    const double L = cum[n];

    double best = INFINITY, s_focus = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = curve[i], b = curve[(i + 1) % n];
        const Point ab = b - a;
        double t = dot(focus - a, ab) / dot(ab, ab);
        t = std::clamp(t, 0.0, 1.0);
        const double d = dist(focus, a + t * ab);
        if (d < best) {
            best = d;
            s_focus = cum[i] + t * (cum[i + 1] - cum[i]);
        }
    }
    if (!(best <= 1e-9)) throw std::invalid_argument("focus is not on the curve");

    std::size_t G = static_cast<std::size_t>(std::ceil(std::log(1e-6) / std::log(ratio)));
    G = std::min(G, n / 4);
    const std::size_t mu = n - 2 * G;
    const double geo = (1.0 - std::pow(ratio, static_cast<double>(G))) / (1.0 - ratio);
    const double hu = L / (static_cast<double>(mu) + 2.0 * geo);

    std::vector<double> gaps;
    gaps.reserve(n);
    for (std::size_t k = G; k-- > 0;) gaps.push_back(hu * std::pow(ratio, static_cast<double>(k)));
    for (std::size_t k = 0; k < mu; ++k) gaps.push_back(hu);
    for (std::size_t k = 0; k < G; ++k) gaps.push_back(hu * std::pow(ratio, static_cast<double>(k)));

    std::vector<Point> out;
    out.reserve(n);
    out.push_back(focus);
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < gaps.size(); ++k) {
        s += gaps[k];
        out.push_back(point_at_arclength(curve, cum, s_focus + s));
    }
    return ClosedCurve(std::move(out));
}

}  // namespace tqc
