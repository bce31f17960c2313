#include "tqc/turning.hpp"
#include "tqc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>


namespace tqc {

namespace {

std::vector<double> prefix_scan(const ClosedCurve& c, std::size_t i, bool forward) {
    const std::size_t n = c.size();
    auto pt = [&](std::size_t k) { return forward ? c[(i + k) % n] : c[(i + n - k % n) % n]; };
    std::vector<double> out(n, 0.0);
    double best = 0.0;
    Point e1 = pt(0), e2 = pt(0);
    bool hull = false;
    std::deque<Point> dq;
    for (std::size_t k = 1; k < n; ++k) {
        const Point p = pt(k);
        if (!hull) {
            best = std::max({best, dist2(p, e1), dist2(p, e2)});
            const double o = orient(e1, e2, p);
            if (o == 0.0 || e1 == e2) {
                // still collinear: keep the two extreme points
                const double d12 = dist2(e1, e2), d1p = dist2(e1, p), d2p = dist2(e2, p);
                if (d1p >= d12 && d1p >= d2p)
                    e2 = p;
                else if (d2p >= d12 && d2p >= d1p)
                    e1 = p;
            } else {
                hull = true;
                if (o > 0)
                    dq = {p, e1, e2, p};
                else
                    dq = {p, e2, e1, p};
            }
        } else {
            for (const Point& q : dq) best = std::max(best, dist2(p, q));
            const std::size_t m = dq.size();
            if (!(orient(dq[m - 2], dq[m - 1], p) > 0 && orient(dq[0], dq[1], p) > 0)) {
                while (dq.size() >= 2 && orient(dq[dq.size() - 2], dq[dq.size() - 1], p) <= 0) dq.pop_back();
                dq.push_back(p);
                while (dq.size() >= 2 && orient(p, dq[0], dq[1]) <= 0) dq.pop_front();
                dq.push_front(p);
            }
        }
        out[k] = std::sqrt(best);
    }
    return out;
}

struct Best {
    double ratio = -1.0;
    std::size_t i = 0, j = 0;
    std::uint64_t pairs = 0;

    void offer(double r, std::size_t a, std::size_t b) {
        if (a > b) std::swap(a, b);
        if (r > ratio || (r == ratio && (a < i || (a == i && b < j)))) {
            ratio = r;
            i = a;
            j = b;
        }
    }
    void merge(const Best& o) {
        pairs += o.pairs;
        if (o.ratio >= 0) offer(o.ratio, o.i, o.j);
    }
};

struct FitSums {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    std::uint64_t count = 0;
    void add(double x, double y) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        ++count;
    }
    void merge(const FitSums& o) {
        sx += o.sx;
        sy += o.sy;
        sxx += o.sxx;
        sxy += o.sxy;
        syy += o.syy;
        count += o.count;
    }
};

double chord(const ClosedCurve& c, std::size_t i, std::size_t j) {
    const double d = dist(c[i], c[j]);
    if (d == 0.0) throw std::invalid_argument("coincident vertices " + std::to_string(i) + " and " + std::to_string(j));
    return d;
}

// visits every unordered pair once as (i, i+m), m in [1, n/2], with both side diameters
template <class Visit>
void exact_block(const ClosedCurve& c, std::size_t lo, std::size_t hi, Visit&& visit) {
    const std::size_t n = c.size();
    const std::size_t half = n / 2;
    const std::size_t w = half + 1;
    const std::size_t rows = hi - lo;
    std::vector<double> F(rows * w);

    {
        std::vector<double> full = prefix_scan(c, hi - 1, true);
        std::copy(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(w), F.begin() + static_cast<std::ptrdiff_t>((rows - 1) * w));
    }
    for (std::size_t r = rows - 1; r-- > 0;) {
        const std::size_t i = lo + r;
        double* cur = &F[r * w];
        const double* nxt = &F[(r + 1) * w];
        cur[0] = 0.0;
        for (std::size_t m = 1; m < w; ++m)
            cur[m] = std::max({nxt[m - 1], cur[m - 1], dist(c[i], c[(i + m) % n])});
    }

    std::vector<double> G = prefix_scan(c, lo, false);
    std::vector<double> G2(n);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t i = lo + r;
        const double* Fi = &F[r * w];
        for (std::size_t m = 1; m <= half; ++m) {
            if (2 * m == n && i >= half) continue;
            visit(i, (i + m) % n, Fi[m], G[n - m]);
        }
        if (r + 1 < rows) {
            const std::size_t i1 = i + 1;
            G2[0] = 0.0;
            for (std::size_t k = 1; k < n; ++k)
                G2[k] = std::max({G[k - 1], G2[k - 1], dist(c[i1], c[(i1 + n - k) % n])});
            std::swap(G, G2);
        }
    }
}

std::vector<std::pair<std::size_t, std::size_t>> make_blocks(std::size_t n) {
    const std::size_t half = n / 2 + 1;
    // block layout depends on n only, so merged sums do not depend on the thread count
    std::size_t B = std::max<std::size_t>(1, (std::size_t{1} << 22) / half);
    B = std::max<std::size_t>(1, std::min(B, (n + 7) / 8));
    std::vector<std::pair<std::size_t, std::size_t>> blocks;
    for (std::size_t lo = 0; lo < n; lo += B) blocks.emplace_back(lo, std::min(n, lo + B));
    return blocks;
}

std::vector<std::size_t> sampled_anchors(std::size_t n, std::size_t count, std::uint64_t seed) {
    std::vector<std::size_t> a;
    a.push_back(0);
    for (std::size_t s = 1; s < n; s *= 2) a.push_back(s);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> u(0, n - 1);
    while (a.size() < count + 1) a.push_back(u(rng));
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

// visits pairs (i, i+m) for sampled anchors i and all m in [1, n-1]
template <class Visit>
void sampled_anchor(const ClosedCurve& c, std::size_t i, Visit&& visit) {
    const std::size_t n = c.size();
    const auto F = prefix_scan(c, i, true);
    const auto G = prefix_scan(c, i, false);
    for (std::size_t m = 1; m < n; ++m) visit(i, (i + m) % n, F[m], G[n - m]);
}

}  // namespace

std::vector<double> prefix_diameters(const ClosedCurve& curve, std::size_t i) { return prefix_scan(curve, i, true); }

std::vector<double> prefix_diameters_backward(const ClosedCurve& curve, std::size_t i) {
    return prefix_scan(curve, i, false);
}

TurningReport turning_constant(const ClosedCurve& curve, double t, const TurningOptions& opt) {
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("t must lie in (0, 1]");
    const std::size_t n = curve.size();
    TurningReport rep;
    rep.t = t;
    Best total;
    auto visit_into = [&](Best& b) {
        return [&](std::size_t i, std::size_t j, double P, double Q) {
            b.offer(std::min(P, Q) / std::pow(chord(curve, i, j), t), i, j);
            ++b.pairs;
        };
    };
    if (n <= opt.exact_limit) {
        const auto blocks = make_blocks(n);
        std::vector<Best> part(blocks.size());
        parallel_for(blocks.size(), [&](std::size_t b) { exact_block(curve, blocks[b].first, blocks[b].second, visit_into(part[b])); });
        for (const auto& p : part) total.merge(p);
        rep.strategy = "exact";
    } else {
        const auto anchors = sampled_anchors(n, opt.sampled_anchors, opt.seed);
        std::vector<Best> part(anchors.size());
        parallel_for(anchors.size(), [&](std::size_t a) { sampled_anchor(curve, anchors[a], visit_into(part[a])); });
        for (const auto& p : part) total.merge(p);
        rep.strategy = "sampled-anchors";
    }
    rep.C_star = total.ratio;
    rep.witness_i = total.i;
    rep.witness_j = total.j;
    rep.pair_count = total.pairs;
    return rep;
}

TurningReport turning_constant_serial(const ClosedCurve& curve, double t) {
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("t must lie in (0, 1]");
    const std::size_t n = curve.size();
    Best b;
    for (std::size_t i = 0; i < n; ++i) {
        const auto F = prefix_diameters(curve, i);
        const auto G = prefix_diameters_backward(curve, i);
        for (std::size_t m = 1; m <= n / 2; ++m) {
            if (2 * m == n && i >= n / 2) continue;
            const std::size_t j = (i + m) % n;
            b.offer(std::min(F[m], G[n - m]) / std::pow(chord(curve, i, j), t), i, j);
            ++b.pairs;
        }
    }
    TurningReport rep;
    rep.t = t;
    rep.C_star = b.ratio;
    rep.witness_i = b.i;
    rep.witness_j = b.j;
    rep.pair_count = b.pairs;
    rep.strategy = "serial";
    return rep;
}

TurningReport exponent_fit(const ClosedCurve& curve, const PairFilter& filter) {
    const std::size_t n = curve.size();
    FitSums sums;
    std::vector<std::pair<std::size_t, std::size_t>> kept;
    std::vector<std::pair<double, double>> kept_xy;
    std::string strategy;

    if (filter.kind == PairFilter::Kind::straddle) {
        if (filter.center >= n) throw std::invalid_argument("straddle center out of range");
        for (std::size_t k = 1; 2 * k < n; ++k) {
            const std::size_t a = (filter.center + n - k) % n, b = (filter.center + k) % n;
            const double d = chord(curve, a, b);
            if (!(d < filter.max_chord)) continue;
            const ArcSpan inner{a, b, Direction::positive};
            const ArcSpan outer{b, a, Direction::positive};
            const double D = std::min(arc_diameter(curve, inner), arc_diameter(curve, outer));
            sums.add(std::log(d), std::log(D));
            kept.emplace_back(a, b);
            kept_xy.emplace_back(d, D);
        }
        strategy = "straddle";
    } else {
        auto visit_into = [&](FitSums& s) {
            return [&](std::size_t i, std::size_t j, double P, double Q) {
                const double d = chord(curve, i, j);
                if (d < filter.max_chord) s.add(std::log(d), std::log(std::min(P, Q)));
            };
        };
        if (n <= 4096) {
            const auto blocks = make_blocks(n);
            std::vector<FitSums> part(blocks.size());
            parallel_for(blocks.size(), [&](std::size_t b) { exact_block(curve, blocks[b].first, blocks[b].second, visit_into(part[b])); });
            for (const auto& p : part) sums.merge(p);
            strategy = "all-pairs";
        } else {
            const auto anchors = sampled_anchors(n, 256, 1);
            std::vector<FitSums> part(anchors.size());
            parallel_for(anchors.size(), [&](std::size_t a) { sampled_anchor(curve, anchors[a], visit_into(part[a])); });
            for (const auto& p : part) sums.merge(p);
            strategy = "sampled-anchors";
        }
    }
    if (sums.count < 50) throw std::invalid_argument("exponent_fit: fewer than 50 admitted pairs");

    const double N = static_cast<double>(sums.count);
    const double vx = sums.sxx - sums.sx * sums.sx / N;
    if (!(vx > 0)) throw std::invalid_argument("exponent_fit: chords do not vary");
    const double slope_raw = (sums.sxy - sums.sx * sums.sy / N) / vx;
    const double intercept = (sums.sy - slope_raw * sums.sx) / N;
    double sse = sums.syy - 2 * intercept * sums.sy - 2 * slope_raw * sums.sxy + N * intercept * intercept +
                 2 * intercept * slope_raw * sums.sx + slope_raw * slope_raw * sums.sxx;
    sse = std::max(sse, 0.0);

    TurningReport rep;
    rep.fit_t = std::clamp(slope_raw, 1e-9, 1.2);
    rep.fit_C = std::exp(intercept);
    rep.residual = std::sqrt(sse / N);
    rep.pair_count = sums.count;
    rep.strategy = strategy;
    rep.t = std::min(*rep.fit_t, 1.0);

    if (filter.kind == PairFilter::Kind::straddle) {
        Best b;
        for (std::size_t k = 0; k < kept.size(); ++k)
            b.offer(kept_xy[k].second / std::pow(kept_xy[k].first, rep.t), kept[k].first, kept[k].second);
        rep.C_star = b.ratio;
        rep.witness_i = b.i;
        rep.witness_j = b.j;
    } else {
        const auto tr = turning_constant(curve, rep.t);
        rep.C_star = tr.C_star;
        rep.witness_i = tr.witness_i;
        rep.witness_j = tr.witness_j;
    }
    return rep;
}

}  // namespace tqc
