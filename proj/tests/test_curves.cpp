#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "tqc/curves.hpp"
#include "tqc/generators.hpp"

using namespace tqc;

namespace {

ClosedCurve circle(std::size_t n, double r = 1.0) {
    CurveSpec s;
    s.n = n;
    s.a = r;
    return generate(s);
}

}  // namespace

TEST_CASE("ensure_ccw") {
    const ClosedCurve sq(oracle::unit_square());
    CHECK(sq.orientation() == Orientation::ccw);
    CHECK(ensure_ccw(sq).vertices() == sq.vertices());

    auto rv = oracle::unit_square();
    std::reverse(rv.begin(), rv.end());
    const ClosedCurve cw(rv);
    CHECK(cw.orientation() == Orientation::cw);
    const auto fixed = ensure_ccw(cw);
    CHECK(fixed.orientation() == Orientation::ccw);
    CHECK(fixed.signed_area() > 0);
    CHECK(fixed[0] == rv.back());

    CHECK_THROWS(ClosedCurve({{0, 0}, {1, 1}, {2, 2}}));
}

TEST_CASE("validation rejects bad input") {
    CHECK_THROWS(ClosedCurve({{0, 0}, {1, 0}}));
    CHECK_THROWS(ClosedCurve({{0, 0}, {1, 0}, {1, 0}, {0, 1}}));
    CHECK_THROWS(ClosedCurve({{0, 0}, {1, 0}, {NAN, 1}}));
    // bow tie
    CHECK_THROWS(ClosedCurve({{0, 0}, {1, 1}, {1, 0}, {0, 1}}));
    // spike folding back along an edge
    CHECK_THROWS(ClosedCurve({{0, 0}, {2, 0}, {1, 0}, {1, 1}}));
}

TEST_CASE("sweep simplicity agrees with brute force") {
    int simple_seen = 0, nonsimple_seen = 0;
    for (unsigned seed = 0; seed < 300; ++seed) {
        const std::size_t n = 4 + seed % 9;
        const auto v = seed % 3 == 0 ? oracle::random_star(n, seed) : oracle::random_points(n, seed);
        const bool a = is_simple(v), b = is_simple_bruteforce(v);
        CHECK(a == b);
        (a ? simple_seen : nonsimple_seen)++;
    }
    CHECK(simple_seen > 20);
    CHECK(nonsimple_seen > 20);

    for (unsigned seed = 0; seed < 20; ++seed) {
        auto v = oracle::random_star(200, seed);
        CHECK(is_simple(v));
        // push one vertex across the polygon
        v[50] = {-v[50].x * 1.5, -v[50].y * 1.5};
        CHECK(is_simple(v) == is_simple_bruteforce(v));
    }

    CurveSpec k;
    k.kind = CurveKind::koch;
    k.level = 4;
    CHECK(is_simple(generate(k).vertices()));
}

TEST_CASE("curve_diameter") {
    CHECK(curve_diameter(circle(512)) == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(curve_diameter(ClosedCurve(oracle::unit_square())) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    for (unsigned seed = 0; seed < 10; ++seed) {
        const auto v = oracle::random_star(300, seed);
        const ClosedCurve c(v);
        CHECK(curve_diameter(c) == oracle::diameter(v));
        const double s = 3.7;
        CHECK(curve_diameter(scaled(c, s)) == doctest::Approx(s * curve_diameter(c)).epsilon(1e-12));
    }
}

TEST_CASE("smaller_subarc examples") {
    const auto c = circle(360);
    const auto sp = smaller_subarc(c, 0, 10);
    CHECK(sp.count(360) == 11);
    CHECK(sp.start == 0);
    CHECK(sp.end == 10);
    CHECK(sp.direction == Direction::positive);

    const auto a = smaller_subarc(c, 0, 180);
    const auto b = smaller_subarc(c, 0, 180);
    CHECK(a == b);
    CHECK(a.count(360) == 181);

    CHECK_THROWS(smaller_subarc(c, 3, 3));

    CurveSpec k;
    k.kind = CurveKind::koch;
    k.level = 3;
    const auto koch = generate(k);
    const std::size_t n = koch.size();
    for (std::size_t i = 0; i < n; i += 7) {
        const auto s = smaller_subarc(koch, i, (i + 1) % n);
        CHECK(s.count(n) == 2);
        CHECK(arc_diameter(koch, s) == oracle::diameter({koch[i], koch[(i + 1) % n]}));
    }
}

TEST_CASE("smaller_subarc exhaustive property") {
    const ClosedCurve c(oracle::random_star(120, 7));
    const std::size_t n = c.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto s = smaller_subarc(c, i, j);
            CHECK(s.start == i);
            CHECK(s.end == j);
            const bool fwd = s.direction == Direction::positive;
            const double mine = oracle::diameter(oracle::span_points(c, i, j, fwd));
            const double other = oracle::diameter(oracle::span_points(c, i, j, !fwd));
            REQUIRE(arc_diameter(c, s) == mine);
            REQUIRE(mine <= other);
            const auto r = smaller_subarc(c, j, i);
            REQUIRE(arc_diameter(c, r) == mine);
            REQUIRE(r.count(n) == s.count(n));
            REQUIRE(mine <= curve_diameter(c));
        }
}

TEST_CASE("arc_diameter") {
    const auto c = circle(512);
    CHECK(arc_diameter(c, {0, 1, Direction::positive}) == dist(c[0], c[1]));
    CHECK(arc_diameter(c, {0, 256, Direction::positive}) == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(arc_diameter(c, {0, 0, Direction::positive}) == curve_diameter(c));
    const ClosedCurve r(oracle::random_star(200, 3));
    for (std::size_t i = 0; i < 200; i += 13)
        for (std::size_t j = 0; j < 200; j += 17) {
            if (i == j) continue;
            CHECK(arc_diameter(r, {i, j, Direction::positive}) == oracle::diameter(oracle::span_points(r, i, j, true)));
            CHECK(arc_diameter(r, {i, j, Direction::negative}) == oracle::diameter(oracle::span_points(r, i, j, false)));
        }
}

TEST_CASE("normalize_unit_diameter") {
    auto [u, s] = normalize_unit_diameter(circle(512));
    CHECK(s == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(curve_diameter(u) == doctest::Approx(1.0).epsilon(1e-12));
    auto [u2, s2] = normalize_unit_diameter(u);
    CHECK(s2 == doctest::Approx(1.0).epsilon(1e-12));
    auto [q, s3] = normalize_unit_diameter(ClosedCurve(oracle::unit_square()));
    CHECK(s3 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(curve_diameter(q) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("resample_arclength") {
    const auto sq = resample_arclength(ClosedCurve(oracle::unit_square()), 8);
    REQUIRE(sq.size() == 8);
    CHECK(sq[0] == Point{0, 0});
    CHECK(sq[1].x == doctest::Approx(0.5));
    CHECK(sq[1].y == doctest::Approx(0.0));
    CHECK(sq[3].x == doctest::Approx(1.0));
    CHECK(sq[3].y == doctest::Approx(0.5));
    CHECK(sq.orientation() == Orientation::ccw);

    const auto c = circle(360);
    const auto d = resample_arclength(c, 720);
    CHECK(curve_diameter(d) == doctest::Approx(curve_diameter(c)).epsilon(1e-6));
    CHECK(d[0] == c[0]);

    CurveSpec ps;
    ps.kind = CurveKind::perturbed;
    ps.n = 64;
    ps.amplitude = 0.15;
    const auto r = generate(ps);
    for (std::size_t m : {256u, 512u, 1000u}) {
        const auto rr = resample_arclength(r, m);
        CHECK(rr.perimeter() == doctest::Approx(r.perimeter()).epsilon(1e-3));
    }
    const ClosedCurve square(oracle::unit_square());
    CHECK(resample_arclength(square, 16).perimeter() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("refine_edges keeps the polyline") {
    const ClosedCurve r(oracle::random_star(40, 2));
    const auto f = refine_edges(r, 4);
    REQUIRE(f.size() == 160);
    for (std::size_t i = 0; i < 40; ++i) CHECK(f[4 * i] == r[i]);
    CHECK(f.perimeter() == doctest::Approx(r.perimeter()).epsilon(1e-12));
    CHECK(curve_diameter(f) == curve_diameter(r));
    for (std::size_t k = 0; k < f.size(); ++k) CHECK(polyline_distance(r, f[k]) < 1e-12);
    CHECK(refine_edges(r, 1).vertices() == r.vertices());
    CHECK_THROWS(refine_edges(r, 0));
}

TEST_CASE("scale equivariance") {
    const ClosedCurve r(oracle::random_star(80, 5));
    const double s = 0.37;
    const auto rs = scaled(r, s);
    for (std::size_t i = 0; i < 80; i += 9)
        for (std::size_t j = i + 1; j < 80; j += 7) {
            const auto a = smaller_subarc(r, i, j), b = smaller_subarc(rs, i, j);
            CHECK(arc_diameter(rs, b) == doctest::Approx(s * arc_diameter(r, a)).epsilon(1e-12));
        }
    CHECK(rs.perimeter() == doctest::Approx(s * r.perimeter()).epsilon(1e-12));
}

TEST_CASE("polyline distance and inside test") {
    const ClosedCurve sq(oracle::unit_square());
    CHECK(polyline_distance(sq, {0.5, 0.5}) == doctest::Approx(0.5));
    CHECK(polyline_distance(sq, {2.0, 0.5}) == doctest::Approx(1.0));
    CHECK(point_inside(sq, {0.5, 0.5}));
    CHECK_FALSE(point_inside(sq, {1.5, 0.5}));
}
