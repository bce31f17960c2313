#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "tqc/generators.hpp"
#include "tqc/parallel.hpp"
#include "tqc/qsmod.hpp"

using namespace tqc;

namespace {

ClosedCurve make(CurveKind k, std::size_t n, double s = 2.0) {
    CurveSpec c;
    c.kind = k;
    c.n = n;
    c.s = s;
    return generate(c);
}

BoundaryMap identity_map(std::size_t n) { return arclength_param(make(CurveKind::circle, n), n); }

struct TripleOracle {
    double v = -INFINITY;
    Triple w;
};

// literal scan of every triple in lexicographic order, first maximum kept
TripleOracle brute_weak(const BoundaryMap& m, double e) {
    const std::size_t n = m.size();
    TripleOracle r;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t x = 0; x < n; ++x) {
                if (a == x || b == x) continue;
                if (!(k_ratio(domain_distance(m, a, x), domain_distance(m, b, x)) <= 1.0)) continue;
                const double den = dist(m.samples[b].p, m.samples[x].p);
                if (den < min_denominator) continue;
                const double v = dist(m.samples[a].p, m.samples[x].p) / std::pow(den, e);
                if (v > r.v) r = {v, {a, b, x}};
            }
    return r;
}

BoundaryMap wobbly(std::size_t n, unsigned seed) {
    const ClosedCurve c(oracle::random_star(n, seed, 0.4));
    auto m = arclength_param(c, n);
    // uneven parameter speed
    const auto h = CircleHomeo::from_knots({0, 1.0, 2.0, two_pi}, {0, 2.0, 2.5, two_pi});
    return reparametrize(m, h);
}

}  // namespace

TEST_CASE("weak constant: identity map") {
    const auto m = identity_map(128);
    const auto r = weak_qs_constant(m, 1.0);
    CHECK(r.weak_R == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weak constant matches brute-force triple scan") {
    std::vector<BoundaryMap> maps{wobbly(60, 1), wobbly(97, 2), arclength_param(make(CurveKind::cusp, 400), 80)};
    auto arc = wobbly(70, 3);
    arc.metric = CircleMetric::arclength;
    maps.push_back(arc);
    for (const auto& m : maps)
        for (double e : {1.0, 0.5, 0.125}) {
            const auto o = brute_weak(m, e);
            const auto r = weak_qs_constant(m, e);
            const auto s = weak_qs_constant_serial(m, e);
            CHECK(std::abs(r.weak_R - o.v) <= 1e-12 * o.v);
            CHECK(r.witness == o.w);
            CHECK(s.weak_R == r.weak_R);
            CHECK(s.witness == r.witness);
            CHECK(s.triples_scanned == r.triples_scanned);
            CHECK(std::abs(triple_ratio(m, r.witness, e) - r.weak_R) <= 1e-12 * r.weak_R);
        }
}

TEST_CASE("weak constant: scaling and isometries") {
    const auto m = wobbly(80, 5);
    const double t = 0.6, s = 2.0;
    const auto base = weak_qs_constant(m, t);
    const auto big = weak_qs_constant(transformed(m, s, 0.0, {0, 0}), t);
    CHECK(big.weak_R == doctest::Approx(base.weak_R * std::pow(s, 1 - t)).epsilon(1e-12));
    const auto moved = weak_qs_constant(transformed(m, 1.0, 0.7, {3, -2}), t);
    CHECK(moved.weak_R == doctest::Approx(base.weak_R).epsilon(1e-12));
    const auto q1 = qs_modulus(m, t, 24, 8.0);
    const auto q2 = qs_modulus(transformed(m, 1.0, -1.3, {0.5, 0.5}), t, 24, 8.0);
    for (std::size_t i = 0; i < q1.bins.size(); ++i) {
        CHECK(q1.bins[i].count == q2.bins[i].count);
        if (q1.bins[i].count) CHECK(q2.bins[i].max_ratio == doctest::Approx(q1.bins[i].max_ratio).epsilon(1e-12));
    }
    // rotating the parameter circle
    auto rotated = m;
    for (auto& smp : rotated.samples) smp.theta += 0.3;
    CHECK(weak_qs_constant(rotated, t).weak_R == doctest::Approx(base.weak_R).epsilon(1e-12));
}

TEST_CASE("cusp arclength map: exponent 1/8 finite, exponent 1 diverges") {
    // at exponent 1 the constant behaves like 2/h for sample spacing h, approaching
    // doubling from below, so each doubling is checked at 1.95 and two doublings at 2
    const auto c = make(CurveKind::cusp, 4097);
    std::vector<double> r1, r8;
    for (std::size_t n : {128u, 256u, 512u}) {
        const auto m = arclength_param(c, n);
        r1.push_back(weak_qs_constant(m, 1.0).weak_R);
        r8.push_back(weak_qs_constant(m, 0.125).weak_R);
        CHECK(std::isfinite(r8.back()));
    }
    for (std::size_t k = 1; k < r1.size(); ++k) {
        CHECK(r1[k] >= 1.95 * r1[k - 1]);
        CHECK(r8[k] <= 2 * r8[k - 1]);
    }
    CHECK(r1.back() >= 2 * r1.front());
}

TEST_CASE("qs_modulus bins match brute force and agree with weak constant") {
    const auto m = wobbly(64, 9);
    const double e = 0.7;
    const auto q = qs_modulus(m, e, 20, 4.0);
    REQUIRE(q.bins.size() == 20);
    CHECK(q.bins.front().k_lo == 0.0);
    CHECK(q.bins.back().k_hi == doctest::Approx(4.0));
    bool has_one = false;
    for (const auto& b : q.bins) has_one = has_one || b.k_hi == 1.0;
    CHECK(has_one);
    const std::size_t n = m.size();
    std::vector<double> mx(q.bins.size(), -INFINITY);
    std::vector<std::uint64_t> cnt(q.bins.size(), 0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t x = 0; x < n; ++x) {
                if (a == x || b == x) continue;
                const double den = dist(m.samples[b].p, m.samples[x].p);
                if (den < min_denominator) continue;
                const double k = k_ratio(domain_distance(m, a, x), domain_distance(m, b, x));
                for (std::size_t i = 0; i < q.bins.size(); ++i)
                    if (k > q.bins[i].k_lo && k <= q.bins[i].k_hi) {
                        ++cnt[i];
                        mx[i] = std::max(mx[i], dist(m.samples[a].p, m.samples[x].p) / std::pow(den, e));
                    }
            }
    for (std::size_t i = 0; i < q.bins.size(); ++i) {
        CHECK(q.bins[i].count == cnt[i]);
        if (cnt[i]) {
            CHECK(std::abs(q.bins[i].max_ratio - mx[i]) <= 1e-12 * mx[i]);
            CHECK(std::abs(triple_ratio(m, q.bins[i].witness, e) - q.bins[i].max_ratio) <= 1e-12 * mx[i]);
        }
    }
    CHECK(q.weak_R == weak_qs_constant(m, e).weak_R);
}

TEST_CASE("qs_modulus identity map") {
    const auto m = identity_map(200);
    const auto q = qs_modulus(m, 1.0, 40, 16.0);
    for (const auto& b : q.bins) {
        if (!b.count) continue;
        if (b.k_hi <= 1.0) CHECK(b.max_ratio <= b.k_hi + 1e-9);
        CHECK(b.max_ratio <= std::min(b.k_hi, 2.0 / (2.0 * std::sin(pi / 200))) + 1e-9);
    }
    const auto f = eta_shape_fit(q);
    CHECK(f.pass);
    CHECK(std::abs(f.B) < 0.2);
    CHECK_THROWS(qs_modulus(m, 1.0, 3, 4.0));
    CHECK_THROWS(qs_modulus(m, 1.0, 8, 0.5));
}

TEST_CASE("eta_shape_fit dominates its data") {
    const auto q = qs_modulus(wobbly(120, 4), 0.5, 40, 32.0);
    const auto f = eta_shape_fit(q);
    CHECK(f.pass);
    for (const auto& b : q.bins)
        if (b.k_lo >= 1.0 && b.count) CHECK(b.max_ratio <= std::exp(f.A + f.B * b.k_hi) * (1 + 1e-6));
    QsReport few = q;
    few.bins.resize(3);
    CHECK_THROWS(eta_shape_fit(few));
}

TEST_CASE("m_condition") {
    const auto id = identity_map(128);
    const auto r = m_condition(id, 1.0);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-3));
    const auto m = wobbly(90, 6);
    const auto mc = m_condition(m, 1.0);
    // brute force of the classical M-quasisymmetry constant over near-equidistant triples
    double best = 0;
    const std::size_t n = m.size();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                if (a == x || b == x || a == b) continue;
                const double da = domain_distance(m, a, x), db = domain_distance(m, b, x);
                if (db < da * (1 - 1e-3) || db > da / (1 - 1e-3)) continue;
                best = std::max(best, dist(m.samples[a].p, m.samples[x].p) / dist(m.samples[b].p, m.samples[x].p));
            }
    CHECK(std::abs(mc.value - best) <= 1e-12 * best);
    CHECK(std::abs(m_condition(m, 0.5).value - std::pow(dist(m.samples[m_condition(m, 0.5).witness.a].p, m.samples[m_condition(m, 0.5).witness.x].p), 2) /
                                                     std::pow(dist(m.samples[m_condition(m, 0.5).witness.b].p, m.samples[m_condition(m, 0.5).witness.x].p), 0.5)) < 1e-12);
}

TEST_CASE("holder constants") {
    const auto id = identity_map(64);
    const auto h = holder_constants(id, 1.0);
    CHECK(h.K1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.K2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.implied_weak_R == doctest::Approx(1.0).epsilon(1e-12));
    for (unsigned seed : {1u, 2u, 3u})
        for (double t : {1.0, 0.7, 0.4}) {
            const auto m = wobbly(80, seed);
            const auto hr = holder_constants(m, t);
            CHECK(hr.K1 > 0);
            CHECK(weak_qs_constant(m, t * t).weak_R <= hr.implied_weak_R * (1 + 1e-9));
            const auto hs = holder_constants(transformed(m, 3.0, 0.0, {0, 0}), t);
            CHECK(hs.K1 == doctest::Approx(3 * hr.K1).epsilon(1e-12));
            CHECK(hs.K2 == doctest::Approx(3 * hr.K2).epsilon(1e-12));
            CHECK(hs.implied_weak_R == doctest::Approx(hr.implied_weak_R * std::pow(3.0, 1 - t * t)).epsilon(1e-12));
        }
}

TEST_CASE("psi") {
    CHECK(psi_pow_t(std::exp2(-16), 1.0, 1.0) == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(psi_pow_t(std::exp2(-16), 1.0, 1.0) - 2 * std::sqrt(2.0)) <= 1e-9);
    CHECK(std::isinf(psi_pow_t(1.0 / 256, 1.0, 1.0)));
    double prev = 0;
    for (int j = 200; j >= 33; --j) {
        const double v = psi_pow_t(std::exp2(-j / 4.0), 2.0, 0.8);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(psi_pow_t(1e-300, 1.0, 1.0) < 0.03);
    CHECK_THROWS(psi_pow_t(0.01, 1.0, 1.0));

    const auto id = identity_map(2048);
    const auto r = psi_bound_check(id, 1.0, 1.0);
    CHECK(r.pass);
    CHECK(r.triples > 0);
    for (double k : {1.0 / 300, 1e-3, 1e-4, 1e-6}) CHECK(k <= std::pow(psi_pow_t(k, 1.0, 1.0), 1.0));
    CHECK_THROWS(psi_bound_check(identity_map(64), 1.0, 1.0));
}

TEST_CASE("thread count does not change reports") {
    const auto m = wobbly(150, 8);
    set_threads(1);
    const auto a = qs_modulus(m, 0.5, 30, 8.0);
    const auto wa = weak_qs_constant(m, 0.5);
    set_threads(3);
    const auto b = qs_modulus(m, 0.5, 30, 8.0);
    const auto wb = weak_qs_constant(m, 0.5);
    set_threads(0);
    CHECK(wa.weak_R == wb.weak_R);
    CHECK(wa.witness == wb.witness);
    for (std::size_t i = 0; i < a.bins.size(); ++i) {
        CHECK(a.bins[i].max_ratio == b.bins[i].max_ratio);
        CHECK(a.bins[i].witness == b.bins[i].witness);
    }
}

TEST_CASE("sampled strategy and degenerate maps") {
    const auto m = wobbly(200, 2);
    QsOptions o;
    o.exact_limit = 100;
    o.sampled_x = 40;
    const auto r = weak_qs_constant(m, 0.5, o);
    CHECK(r.strategy == "sampled-x");
    CHECK(r.weak_R <= weak_qs_constant(m, 0.5).weak_R);
    CHECK_THROWS(weak_qs_constant(identity_map(16), 1.0));
    auto bad = identity_map(64);
    bad.samples[5].p = bad.samples[4].p;
    CHECK_THROWS(weak_qs_constant(bad, 1.0));
}
