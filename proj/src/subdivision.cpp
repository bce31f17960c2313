#include "tqc/subdivision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tqc/parallel.hpp"
#include "tqc/turning.hpp"

namespace tqc {

double h_of(double alpha) {
    const double v = alpha * std::sqrt(2.0) + 1.0;
    return 4.0 * v * v;
}

SubdivisionConstants theoretical_constants(double C, double t, double eps) {
    if (!(C >= 1.0)) throw std::invalid_argument("C must be >= 1");
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("t must lie in (0, 1]");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
    SubdivisionConstants k;
    k.C = C;
    k.t = t;
    k.eps = eps;
    k.alpha = std::pow(4.0 * C / eps, 1.0 / t);
    k.h_alpha = h_of(k.alpha);
    k.p = std::ceil(k.h_alpha);
    k.log2_delta = -(k.p + 1.0) + std::log2(eps);
    k.delta = k.p < 2000 ? std::ldexp(eps, -static_cast<int>(k.p) - 1) : 0.0;
    return k;
}

namespace {

constexpr std::uint64_t sat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > sat / a) return sat;
    return a * b;
}

std::uint64_t sat_pow(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    for (std::uint64_t k = 0; k < e; ++k) {
        r = sat_mul(r, b);
        if (r == sat) break;
    }
    return r;
}

}  // namespace

TreeConstants tree_constants(std::uint64_t p, double C) {
    if (p < 2) throw std::invalid_argument("p must be >= 2");
    if (!(C > 0)) throw std::invalid_argument("C must be positive");
    TreeConstants k;
    k.p = p;
    k.log2_mu = static_cast<double>(p + 1);
    k.m = 2;
    k.n = k.m * (p + 1);
    // 4n+3 <= p^m decided exactly; p^m saturates at 2^64-1, far above any reachable 4n+3
    while (sat_mul(4, k.n) + 3 > sat_pow(p, k.m)) {
        k.m *= 2;
        k.n *= 2;
    }
    const std::uint64_t pm = sat_pow(p, k.m);
    const std::uint64_t extra = sat_mul(sat_mul(2, k.n), p - 1);
    k.N_exact = pm != sat && pm <= sat - extra;
    if (k.N_exact) {
        k.N = pm + extra;
        k.log2_N = std::log2(static_cast<double>(k.N));
    } else {
        // log2(p^m + e) = m log2 p + log2(1 + e / p^m)
        const double lpm = static_cast<double>(k.m) * std::log2(static_cast<double>(p));
        k.log2_N = lpm + std::log2(1.0 + std::exp2(std::log2(static_cast<double>(extra)) - lpm));
    }
    k.log2_c = static_cast<double>(k.m + 2) * k.log2_mu;
    k.log2_R = 3.0 + k.log2_N + 5.0 * std::exp2(k.log2_N) * k.log2_c + std::log2(C);
    k.two_pow_n_ge_mu_pow_m = static_cast<double>(k.n) >= static_cast<double>(k.m) * k.log2_mu;
    k.four_n_plus_3_le_p_pow_m = sat_mul(4, k.n) + 3 <= pm;
    return k;
}

std::size_t SubarcTree::edges(const ArcSpan& s) const {
    const std::size_t n = curve->size();
    return s.full_loop() ? n : (s.end + n - s.start) % n;
}

std::vector<int> SubarcTree::word(std::size_t level, std::size_t index) const {
    std::vector<int> w(level);
    for (std::size_t k = level; k-- > 0;) {
        w[k] = static_cast<int>(index % branching) + 1;
        index /= branching;
    }
    return w;
}

std::size_t balancing_split(const ClosedCurve& curve, std::size_t s, std::size_t m, std::size_t min_edges) {
    const std::size_t n = curve.size();
    if (m < 2 * min_edges) throw std::invalid_argument("span too short to split");
    const std::size_t e = (s + m) % n;
    const auto fwd = prefix_diameters(curve, s % n);
    const auto bwd = prefix_diameters_backward(curve, e);
    auto f = [&](std::size_t j) { return fwd[std::min(j, n - 1)]; };
    auto b = [&](std::size_t j) { return bwd[std::min(j, n - 1)]; };
    std::size_t best = min_edges;
    double best_v = -1.0;
    for (std::size_t k = min_edges; k + min_edges <= m; ++k) {
        const double v = std::min(f(k), b(m - k));
        if (v > best_v) {
            best_v = v;
            best = k;
        }
    }
    return best;
}

std::vector<ArcSpan> greedy_subdivide(const ClosedCurve& curve, double eps, std::size_t start) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
    const std::size_t n = curve.size();
    if (start >= n) throw std::invalid_argument("start index out of range");
    const double diam = curve_diameter(curve);
    if (std::abs(diam - 1.0) > 1e-9) throw std::invalid_argument("curve must be normalized to diameter 1");
    double max_edge = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_edge = std::max(max_edge, dist(curve[i], curve[(i + 1) % n]));
    if (max_edge > eps / 16.0)
        throw std::invalid_argument("curve too coarse for eps: an edge exceeds eps/16, resample first");

    const double r = eps / 4.0;
    std::vector<ArcSpan> pieces;
    std::size_t s = 0;  // offset from start
    bool last_is_fragment = false;
    while (s < n) {
        const Point c = curve[(start + s) % n];
        // offsets run to n, where offset n is the start vertex closing the loop
        std::size_t e = s;
        while (e + 1 <= n && dist(curve[(start + e + 1) % n], c) <= r) ++e;
        if (e == n) last_is_fragment = true;
        pieces.push_back({(start + s) % n, (start + e) % n, Direction::positive});
        s = e;
    }
    if (last_is_fragment && pieces.size() >= 2) {
        const ArcSpan frag = pieces.back();
        pieces.pop_back();
        pieces.back().end = frag.end;
    }
    for (const auto& p : pieces) {
        const double d = arc_diameter(curve, p);
        if (d < eps / 8.0 || d > eps)
            throw ValidationError("greedy piece diameter " + std::to_string(d) + " outside [eps/8, eps]");
    }
    return pieces;
}

std::vector<ArcSpan> equalize_count(const ClosedCurve& curve, std::vector<ArcSpan> pieces, std::size_t p) {
    if (p < pieces.size()) throw std::invalid_argument("target count below current piece count");
    const std::size_t n = curve.size();
    std::vector<double> diam(pieces.size());
    for (std::size_t k = 0; k < pieces.size(); ++k) diam[k] = arc_diameter(curve, pieces[k]);
    auto edges = [&](const ArcSpan& s) { return s.full_loop() ? n : (s.end + n - s.start) % n; };
    while (pieces.size() < p) {
        std::size_t pick = pieces.size();
        for (std::size_t k = 0; k < pieces.size(); ++k) {
            if (edges(pieces[k]) < 2) continue;
            if (pick == pieces.size() || diam[k] > diam[pick]) pick = k;
        }
        if (pick == pieces.size()) throw std::invalid_argument("no piece left with an interior vertex to split at");
        const ArcSpan sp = pieces[pick];
        const std::size_t m = edges(sp);
        const std::size_t k = balancing_split(curve, sp.start, m, 1);
        const std::size_t mid = (sp.start + k) % n;
        const ArcSpan left{sp.start, mid, Direction::positive}, right{mid, sp.end, Direction::positive};
        pieces[pick] = left;
        diam[pick] = arc_diameter(curve, left);
        pieces.insert(pieces.begin() + static_cast<std::ptrdiff_t>(pick) + 1, right);
        diam.insert(diam.begin() + static_cast<std::ptrdiff_t>(pick) + 1, arc_diameter(curve, right));
    }
    return pieces;
}

namespace {

std::vector<ArcSpan> split_node(const ClosedCurve& curve, const ArcSpan& span, std::size_t branching, std::size_t min_edges) {
    const std::size_t n = curve.size();
    auto edges = [&](const ArcSpan& s) { return s.full_loop() ? n : (s.end + n - s.start) % n; };
    std::vector<ArcSpan> kids{span};
    std::vector<double> diam{arc_diameter(curve, span)};
    while (kids.size() < branching) {
        std::size_t pick = kids.size();
        for (std::size_t k = 0; k < kids.size(); ++k) {
            if (edges(kids[k]) < 2 * min_edges) continue;
            if (pick == kids.size() || diam[k] > diam[pick]) pick = k;
        }
        if (pick == kids.size()) throw std::invalid_argument("insufficient vertices for the requested tree");
        const ArcSpan sp = kids[pick];
        const std::size_t k = balancing_split(curve, sp.start, edges(sp), min_edges);
        const std::size_t mid = (sp.start + k) % n;
        const ArcSpan left{sp.start, mid, Direction::positive}, right{mid, sp.end, Direction::positive};
        kids[pick] = left;
        diam[pick] = arc_diameter(curve, left);
        kids.insert(kids.begin() + static_cast<std::ptrdiff_t>(pick) + 1, right);
        diam.insert(diam.begin() + static_cast<std::ptrdiff_t>(pick) + 1, arc_diameter(curve, right));
    }
    return kids;
}

}  // namespace

SubarcTree build_tree(const ClosedCurve& curve, std::size_t branching, std::size_t depth) {
    if (branching < 2) throw std::invalid_argument("branching must be >= 2");
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    const std::size_t n = curve.size();
    std::size_t leaves = 1;
    for (std::size_t d = 0; d < depth; ++d) {
        leaves *= branching;
        if (leaves > n) throw std::invalid_argument("insufficient vertices: branching^depth exceeds vertex count");
    }
    SubarcTree tree;
    tree.curve = &curve;
    tree.branching = branching;
    tree.depth = depth;
    tree.levels.push_back({ArcSpan{0, 0, Direction::positive}});
    for (std::size_t l = 0; l < depth; ++l) {
        std::size_t below = 1;
        for (std::size_t d = l + 1; d < depth; ++d) below *= branching;
        const auto& parents = tree.levels[l];
        std::vector<ArcSpan> next(parents.size() * branching);
        parallel_for(parents.size(), [&](std::size_t q) {
            const auto kids = split_node(curve, parents[q], branching, below);
            std::copy(kids.begin(), kids.end(), next.begin() + static_cast<std::ptrdiff_t>(q * branching));
        });
        tree.levels.push_back(std::move(next));
    }
    return tree;
}

TreeVerification verify_tree(const SubarcTree& tree, double prop3_threshold, double prop4_threshold) {
    const ClosedCurve& c = *tree.curve;
    TreeVerification v;
    v.prop3_threshold = prop3_threshold;
    v.prop4_threshold = prop4_threshold;
    const double D = curve_diameter(c);
    for (std::size_t l = 1; l < tree.levels.size(); ++l) {
        const auto& lev = tree.levels[l];
        const auto& par = tree.levels[l - 1];
        for (std::size_t q = 0; q < par.size(); ++q) {
            const std::size_t b = tree.branching;
            std::size_t total = 0;
            bool chain = lev[q * b].start == par[q].start && lev[q * b + b - 1].end == par[q].end;
            for (std::size_t k = 0; k < b; ++k) {
                total += tree.edges(lev[q * b + k]);
                if (k + 1 < b) chain = chain && lev[q * b + k].end == lev[q * b + k + 1].start;
            }
            if (!chain || total != tree.edges(par[q])) v.partition_ok = false;
        }
        std::vector<double> d(lev.size());
        parallel_for(lev.size(), [&](std::size_t q) { d[q] = arc_diameter(c, lev[q]); });
        const double scale = std::ldexp(1.0, static_cast<int>(l)) / D;
        for (std::size_t q = 0; q < lev.size(); ++q) {
            if (d[q] * scale > v.prop3_ratio) {
                v.prop3_ratio = d[q] * scale;
                v.prop3_level = l;
                v.prop3_index = q;
            }
            const double a = d[q], b = d[(q + 1) % lev.size()];
            if (lev.size() < 2) continue;
            const double r = std::max(a, b) / std::min(a, b);
            if (r > v.prop4_ratio) {
                v.prop4_ratio = r;
                v.prop4_level = l;
                v.prop4_index = q;
            }
        }
    }
    v.prop3_pass = v.prop3_ratio <= prop3_threshold;
    v.prop4_pass = v.prop4_ratio <= prop4_threshold;
    return v;
}

}  // namespace tqc
