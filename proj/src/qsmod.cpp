#include "tqc/qsmod.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "tqc/parallel.hpp"

namespace tqc {

bool triple_less(const Triple& p, const Triple& q) {
    if (p.a != q.a) return p.a < q.a;
    if (p.b != q.b) return p.b < q.b;
    return p.x < q.x;
}

double domain_distance(const BoundaryMap& map, std::size_t i, std::size_t j) {
    return circle_distance(map.samples[i].theta, map.samples[j].theta, map.metric);
}

double triple_ratio(const BoundaryMap& map, const Triple& w, double exponent) {
    const auto& S = map.samples;
    return dist(S[w.a].p, S[w.x].p) / std::pow(dist(S[w.b].p, S[w.x].p), exponent);
}

namespace {

struct Best {
    double v = -INFINITY;
    Triple w;
    void offer(double r, const Triple& t) {
        if (r > v || (r == v && triple_less(t, w))) {
            v = r;
            w = t;
        }
    }
};

// samples other than x sorted by (domain distance, index)
struct XView {
    std::vector<std::uint32_t> idx;
    std::vector<double> d;    // domain distance
    std::vector<double> img;  // image distance
};

XView view_from(const BoundaryMap& map, std::size_t x) {
    const std::size_t n = map.size();
    XView v;
    v.idx.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j)
        if (j != x) v.idx.push_back(static_cast<std::uint32_t>(j));
    std::vector<double> dd(n);
    for (std::size_t j = 0; j < n; ++j) dd[j] = j == x ? 0.0 : domain_distance(map, j, x);
    std::sort(v.idx.begin(), v.idx.end(), [&](std::uint32_t a, std::uint32_t b) { return dd[a] < dd[b] || (dd[a] == dd[b] && a < b); });
    v.d.resize(v.idx.size());
    v.img.resize(v.idx.size());
    const Point px = map.samples[x].p;
    for (std::size_t k = 0; k < v.idx.size(); ++k) {
        v.d[k] = dd[v.idx[k]];
        v.img[k] = dist(map.samples[v.idx[k]].p, px);
    }
    return v;
}

// sparse table over positions returning the preferred position under `better`
template <class Better>
struct Sparse {
    std::vector<std::vector<std::uint32_t>> t;
    Better better;
    explicit Sparse(std::size_t n, Better b) : better(b) {
        t.emplace_back(n);
        std::iota(t[0].begin(), t[0].end(), 0u);
        for (std::size_t w = 1; (std::size_t{1} << w) <= n; ++w) {
            const std::size_t len = n - (std::size_t{1} << w) + 1;
            t.emplace_back(len);
            for (std::size_t i = 0; i < len; ++i) {
                const auto p = t[w - 1][i], q = t[w - 1][i + (std::size_t{1} << (w - 1))];
                t[w][i] = better(q, p) ? q : p;
            }
        }
    }
    // inclusive range [l, r]
    std::uint32_t query(std::size_t l, std::size_t r) const {
        const std::size_t w = static_cast<std::size_t>(std::bit_width(r - l + 1)) - 1;
        const auto p = t[w][l], q = t[w][r + 1 - (std::size_t{1} << w)];
        return better(q, p) ? q : p;
    }
};

std::vector<std::size_t> x_indices(std::size_t n, const QsOptions& opt, std::string& strategy) {
    std::vector<std::size_t> xs;
    if (n <= opt.exact_limit) {
        xs.resize(n);
        std::iota(xs.begin(), xs.end(), 0u);
        strategy = "exact";
        return xs;
    }
    xs.push_back(0);
    for (std::size_t s = 1; s < n; s *= 2) xs.push_back(s);
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::size_t> u(0, n - 1);
    while (xs.size() < opt.sampled_x) xs.push_back(u(rng));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    strategy = "sampled-x";
    return xs;
}

void check_map(const BoundaryMap& map, std::size_t min_n) {
    if (map.size() < min_n) throw std::invalid_argument("map needs at least " + std::to_string(min_n) + " samples");
    for (std::size_t i = 0; i < map.size(); ++i)
        if (map.samples[i].p == map.samples[(i + 1) % map.size()].p) throw std::invalid_argument("degenerate map: repeated points");
}

struct WeakPart {
    Best best;
    std::uint64_t scanned = 0, excluded = 0;
};

WeakPart weak_for_x(const BoundaryMap& map, std::size_t x, double e) {
    const XView v = view_from(map, x);
    const std::size_t m = v.idx.size();
    WeakPart out;
    // suffix minimum of admissible denominators, ties to the smaller sample index
    std::vector<std::uint32_t> sm(m + 1, UINT32_MAX);
    std::vector<std::uint32_t> usable(m + 1, 0);
    for (std::size_t q = m; q-- > 0;) {
        sm[q] = sm[q + 1];
        usable[q] = usable[q + 1] + (v.img[q] < min_denominator ? 0 : 1);
        if (v.img[q] < min_denominator) {
            ++out.excluded;
            continue;
        }
        const auto c = sm[q];
        if (c == UINT32_MAX || v.img[q] < v.img[c] || (v.img[q] == v.img[c] && v.idx[q] < v.idx[c]))
            sm[q] = static_cast<std::uint32_t>(q);
    }
    for (std::size_t p = 0; p < m; ++p) {
        // first position q with k(p, q) <= 1
        std::size_t q = p;
        while (q > 0 && k_ratio(v.d[p], v.d[q - 1]) <= 1.0) --q;
        out.scanned += usable[q];
        const auto b = sm[q];
        if (b == UINT32_MAX) continue;
        out.best.offer(v.img[p] / std::pow(v.img[b], e), {v.idx[p], v.idx[b], x});
    }
    return out;
}

}  // namespace

QsReport weak_qs_constant(const BoundaryMap& map, double exponent, const QsOptions& opt) {
    if (!(exponent > 0.0 && exponent <= 1.0)) throw std::invalid_argument("exponent must lie in (0, 1]");
    check_map(map, 32);
    QsReport r;
    r.exponent = exponent;
    r.metric = map.metric;
    const auto xs = x_indices(map.size(), opt, r.strategy);
    std::vector<WeakPart> parts(xs.size());
    parallel_for(xs.size(), [&](std::size_t k) { parts[k] = weak_for_x(map, xs[k], exponent); });
    Best best;
    for (const auto& p : parts) {
        if (p.best.v > -INFINITY) best.offer(p.best.v, p.best.w);
        r.triples_scanned += p.scanned;
        r.excluded_denominators += p.excluded;
    }
    r.weak_R = best.v;
    r.witness = best.w;
    return r;
}

QsReport weak_qs_constant_serial(const BoundaryMap& map, double exponent) {
    if (!(exponent > 0.0 && exponent <= 1.0)) throw std::invalid_argument("exponent must lie in (0, 1]");
    check_map(map, 32);
    const std::size_t n = map.size();
    QsReport r;
    r.exponent = exponent;
    r.metric = map.metric;
    r.strategy = "serial";
    Best best;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t b = 0; b < n; ++b) {
            if (b == x) continue;
            const double den = dist(map.samples[b].p, map.samples[x].p);
            if (den < min_denominator) {
                ++r.excluded_denominators;
                continue;
            }
            const double db = domain_distance(map, b, x);
            for (std::size_t a = 0; a < n; ++a) {
                if (a == x || !(k_ratio(domain_distance(map, a, x), db) <= 1.0)) continue;
                ++r.triples_scanned;
                best.offer(dist(map.samples[a].p, map.samples[x].p) / std::pow(den, exponent), {a, b, x});
            }
        }
    r.weak_R = best.v;
    r.witness = best.w;
    return r;
}

QsReport qs_modulus(const BoundaryMap& map, double exponent, std::size_t bins, double k_max, const QsOptions& opt) {
    if (!(exponent > 0.0 && exponent <= 1.0)) throw std::invalid_argument("exponent must lie in (0, 1]");
    if (bins < 4) throw std::invalid_argument("need at least 4 bins");
    if (!(k_max >= 1.0)) throw std::invalid_argument("k_max must be >= 1");
    check_map(map, 32);
    QsReport r;
    r.exponent = exponent;
    r.metric = map.metric;
    const long top = static_cast<long>(std::ceil(4.0 * std::log2(k_max) - 1e-9));
    std::vector<double> edge(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) edge[i] = std::exp2(static_cast<double>(top - static_cast<long>(bins) + static_cast<long>(i)) / 4.0);
    r.bins.resize(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        r.bins[i].k_lo = i == 0 ? 0.0 : edge[i];
        r.bins[i].k_hi = edge[i + 1];
        r.bins[i].max_ratio = -INFINITY;
    }
    const auto xs = x_indices(map.size(), opt, r.strategy);

    struct Part {
        std::vector<Best> best;
        std::vector<std::uint64_t> count;
        std::uint64_t excluded = 0;
    };
    std::vector<Part> parts(xs.size());
    parallel_for(xs.size(), [&](std::size_t k) {
        const std::size_t x = xs[k];
        const XView v = view_from(map, x);
        const std::size_t m = v.idx.size();
        Part& P = parts[k];
        P.best.resize(bins);
        P.count.assign(bins, 0);
        auto better = [&](std::uint32_t p, std::uint32_t q) { return v.img[p] > v.img[q] || (v.img[p] == v.img[q] && v.idx[p] < v.idx[q]); };
        const Sparse<decltype(better)> rmq(m, better);
        std::vector<std::size_t> cut(bins + 1);
        for (std::size_t q = 0; q < m; ++q) {
            if (v.img[q] < min_denominator) {
                ++P.excluded;
                continue;
            }
            const double den = std::pow(v.img[q], exponent);
            // cut[i] = first position whose k = d_p / d_q exceeds the lower edge of bin i
            std::size_t p = 0;
            for (std::size_t i = 0; i <= bins; ++i) {
                const double lo = i == 0 ? 0.0 : edge[i];
                while (p < m && k_ratio(v.d[p], v.d[q]) <= lo) ++p;
                cut[i] = p;
            }
            for (std::size_t i = 0; i < bins; ++i) {
                const std::size_t l = cut[i], h = cut[i + 1];
                if (l >= h) continue;
                P.count[i] += h - l;
                const auto a = rmq.query(l, h - 1);
                P.best[i].offer(v.img[a] / den, {v.idx[a], v.idx[q], x});
            }
        }
    });
    for (const auto& P : parts) {
        r.excluded_denominators += P.excluded;
        for (std::size_t i = 0; i < bins; ++i) {
            r.bins[i].count += P.count[i];
            r.triples_scanned += P.count[i];
            if (P.best[i].v > r.bins[i].max_ratio ||
                (P.best[i].v == r.bins[i].max_ratio && P.best[i].v > -INFINITY && triple_less(P.best[i].w, r.bins[i].witness))) {
                r.bins[i].max_ratio = P.best[i].v;
                r.bins[i].witness = P.best[i].w;
            }
        }
    }
    Best weak;
    for (const auto& b : r.bins)
        if (b.k_hi <= 1.0 && b.count > 0) weak.offer(b.max_ratio, b.witness);
    r.weak_R = weak.v;
    r.witness = weak.w;
    return r;
}

EtaFit eta_shape_fit(const QsReport& report) {
    std::vector<double> xs, ys;
    for (const auto& b : report.bins)
        if (b.k_lo >= 1.0 && b.count > 0 && b.max_ratio > 0) {
            xs.push_back(b.k_hi);
            ys.push_back(std::log(b.max_ratio));
        }
    if (xs.size() < 4) throw std::invalid_argument("eta_shape_fit needs at least 4 nonempty bins with k >= 1");
    const double N = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / N;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / N;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    EtaFit f;
    f.B = sxx > 0 ? sxy / sxx : 0.0;
    f.A_raw = my - f.B * mx;
    double ss = 0;
    f.max_residual = -INFINITY;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double res = ys[i] - (f.A_raw + f.B * xs[i]);
        ss += res * res;
        f.max_residual = std::max(f.max_residual, res);
    }
    f.rms = std::sqrt(ss / N);
    f.A = f.A_raw + std::max(0.0, f.max_residual);
    f.bins_used = xs.size();
    f.pass = true;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (!(std::exp(ys[i]) <= std::exp(f.A + f.B * xs[i]) * (1 + 1e-6))) f.pass = false;
    return f;
}

MConditionReport m_condition(const BoundaryMap& map, double t, double tol) {
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("t must lie in (0, 1]");
    check_map(map, 3);
    const std::size_t n = map.size();
    struct Part {
        Best best;
        std::uint64_t count = 0;
    };
    std::vector<Part> parts(n);
    parallel_for(n, [&](std::size_t x) {
        const XView v = view_from(map, x);
        const std::size_t m = v.idx.size();
        auto smaller = [&](std::uint32_t p, std::uint32_t q) { return v.img[p] < v.img[q] || (v.img[p] == v.img[q] && v.idx[p] < v.idx[q]); };
        const Sparse<decltype(smaller)> rmq(m, smaller);
        Part& P = parts[x];
        std::size_t lo = 0, hi = 0;
        for (std::size_t p = 0; p < m; ++p) {
            const double dlo = v.d[p] * (1 - tol), dhi = v.d[p] / (1 - tol);
            while (lo < m && v.d[lo] < dlo) ++lo;
            if (hi < p) hi = p;
            while (hi + 1 < m && v.d[hi + 1] <= dhi) ++hi;
            std::uint32_t b = UINT32_MAX;
            auto take = [&](std::size_t l, std::size_t h) {
                if (l > h) return;
                const auto c = rmq.query(l, h);
                if (b == UINT32_MAX || smaller(c, b)) b = c;
            };
            if (lo < p) take(lo, p - 1);
            if (p + 1 <= hi) take(p + 1, hi);
            if (b == UINT32_MAX) continue;
            P.count += hi - lo;
            if (v.img[b] < min_denominator) continue;
            P.best.offer(std::pow(v.img[p], 1.0 / t) / std::pow(v.img[b], t), {v.idx[p], v.idx[b], x});
        }
    });
    MConditionReport r;
    r.tol = tol;
    Best best;
    for (const auto& P : parts) {
        r.admissible += P.count;
        if (P.best.v > -INFINITY) best.offer(P.best.v, P.best.w);
    }
    if (r.admissible == 0 || best.v == -INFINITY) throw std::invalid_argument("m_condition: no admissible triples");
    r.value = best.v;
    r.witness = best.w;
    return r;
}

HolderReport holder_constants(const BoundaryMap& map, double t) {
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("t must lie in (0, 1]");
    const std::size_t n = map.size();
    struct Part {
        double k1 = INFINITY, k2 = -INFINITY;
        std::size_t i1 = 0, j1 = 0, i2 = 0, j2 = 0;
    };
    std::vector<Part> parts(n);
    parallel_for(n, [&](std::size_t i) {
        Part& P = parts[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = domain_distance(map, i, j);
            const double w = dist(map.samples[i].p, map.samples[j].p);
            const double r2 = w / std::pow(d, t), r1 = w / std::pow(d, 1.0 / t);
            if (r2 > P.k2) {
                P.k2 = r2;
                P.i2 = i;
                P.j2 = j;
            }
            if (r1 < P.k1) {
                P.k1 = r1;
                P.i1 = i;
                P.j1 = j;
            }
        }
    });
    HolderReport h;
    h.t = t;
    h.K1 = INFINITY;
    h.K2 = -INFINITY;
    for (const auto& P : parts) {
        if (P.k2 > h.K2) {
            h.K2 = P.k2;
            h.k2_i = P.i2;
            h.k2_j = P.j2;
        }
        if (P.k1 < h.K1) {
            h.K1 = P.k1;
            h.k1_i = P.i1;
            h.k1_j = P.j1;
        }
    }
    h.implied_weak_R = h.K2 / std::pow(h.K1, t * t);
    return h;
}

double psi_pow_t(double k, double R, double t) {
    if (!(k > 0.0 && k <= 1.0 / 256.0)) throw std::invalid_argument("psi is defined for 0 < k <= 1/256");
    const double q = std::log(1.0 / k) / std::log(256.0) - 1.0;
    if (q <= 0.0) return INFINITY;
    return std::sqrt(2.0) * R * std::pow(2.0 * R, 1.0 / t) / q;
}

PsiReport psi_bound_check(const BoundaryMap& map, double t, double R, std::size_t near) {
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("t must lie in (0, 1]");
    if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
    check_map(map, 32);
    const std::size_t n = map.size();
    struct Part {
        Best best;
        double k = 0, m = 0;
        std::uint64_t count = 0;
    };
    std::vector<Part> parts(n);
    const double kmax = 1.0 / 256.0;
    parallel_for(n, [&](std::size_t x) {
        const XView v = view_from(map, x);
        const std::size_t m = v.idx.size();
        Part& P = parts[x];
        for (std::size_t p = 0; p < std::min(near, m); ++p) {
            for (std::size_t q = m; q-- > 0;) {
                const double k = k_ratio(v.d[p], v.d[q]);
                if (!(k <= kmax)) break;
                if (v.img[q] < min_denominator) continue;
                ++P.count;
                const double mm = v.img[p] / std::pow(v.img[q], t * t);
                const double slack = std::pow(mm, t) / psi_pow_t(k, R, t);
                const Triple w{v.idx[p], v.idx[q], x};
                if (slack > P.best.v || (slack == P.best.v && triple_less(w, P.best.w))) {
                    P.best.v = slack;
                    P.best.w = w;
                    P.k = k;
                    P.m = mm;
                }
            }
        }
    });
    PsiReport r;
    r.t = t;
    r.R = R;
    Best best;
    for (const auto& P : parts) {
        r.triples += P.count;
        if (P.best.v > best.v || (P.best.v == best.v && P.best.v > -INFINITY && triple_less(P.best.w, best.w))) {
            best = P.best;
            r.witness_k = P.k;
            r.witness_m = P.m;
        }
    }
    if (r.triples == 0) throw std::invalid_argument("no triples with k <= 1/256: densify the map");
    r.worst_slack = best.v;
    r.witness = best.w;
    r.pass = r.worst_slack <= 1.0;
    return r;
}

}  // namespace tqc
