#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tqc/conformal.hpp"
#include "tqc/generators.hpp"
#include "tqc/parallel.hpp"

using namespace tqc;

namespace {

ClosedCurve make(CurveKind k, std::size_t n, double a = 1.0, double b = 1.0) {
    CurveSpec c;
    c.kind = k;
    c.n = n;
    c.a = a;
    c.b = b;
    c.level = static_cast<int>(n);
    return generate(c);
}

const DiskMap& disk_map() {
    static const DiskMap m = [] {
        ZipperOptions o;
        o.center_hint = Point{0, 0};
        return zipper_fit(make(CurveKind::circle, 512), o);
    }();
    return m;
}

const DiskMap& ellipse_map() {
    static const DiskMap m = zipper_fit(make(CurveKind::ellipse, 512, 2.0, 1.0));
    return m;
}

const DiskMap& cusp_map() {
    static const DiskMap m = [] {
        const ClosedCurve c = make(CurveKind::cusp, 1024);
        return zipper_fit(adaptive_cusp_sampling(c, c[cusp_tip_index], 0.95));
    }();
    return m;
}

// closed form: angle subtended by the arc at z, less the central share
double omega_closed(Point z, double t1, double t2) {
    const cplx w = z.c();
    const cplx q = (std::polar(1.0, t2) - w) / (std::polar(1.0, t1) - w);
    double a = std::arg(q);
    if (a < 0) a += two_pi;
    return a / pi - (t2 - t1) / two_pi;
}

cplx automorphism(cplx a, cplx w) { return (w - a) / (1.0 - std::conj(a) * w); }

}  // namespace

TEST_CASE("hyperbolic distance closed forms") {
    CHECK(hyperbolic_distance({0.3, -0.2}, {0.3, -0.2}) == 0.0);
    for (double r : {0.1, 0.5, 0.9, 0.999})
        CHECK(hyperbolic_distance({0, 0}, {r, 0}) == doctest::Approx(0.5 * std::log((1 + r) / (1 - r))).epsilon(1e-12));
    CHECK(hyperbolic_distance({0.75, 0}, {0.41421, 0}) == doctest::Approx(0.5324).epsilon(1e-3));
    CHECK_THROWS(hyperbolic_distance({1.0, 0}, {0, 0}));
}

TEST_CASE("hyperbolic distance is invariant under disk automorphisms") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-0.6, 0.6);
    for (int k = 0; k < 50; ++k) {
        const cplx a(U(rng), U(rng)), z(U(rng), U(rng)), w(U(rng), U(rng));
        const double d0 = hyperbolic_distance(Point(z), Point(w));
        const double d1 = hyperbolic_distance(Point(automorphism(a, z)), Point(automorphism(a, w)));
        CHECK(d1 == doctest::Approx(d0).epsilon(1e-10));
    }
}

TEST_CASE("geodesic nearest delta") {
    CHECK(geodesic_nearest_delta(0.5) == 0.0);
    CHECK(geodesic_nearest_delta(0.75) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
    CHECK(std::abs(geodesic_nearest_delta(0.75) - 0.41421) < 1e-5);
    CHECK_THROWS(geodesic_nearest_delta(0.49));
    CHECK_THROWS(geodesic_nearest_delta(1.0));
    for (int k = 0; k < 100; ++k) {
        const double r = 0.5 + 0.4999 * k / 99.0;
        const double d = geodesic_nearest_delta(r);
        CHECK(d < r);
        CHECK(hyperbolic_distance({r, 0}, {d, 0}) <= 0.5 * std::log(pi) + 1e-12);
    }
}

TEST_CASE("geodesic nearest delta matches the sampled geodesic between I(z) endpoints") {
    for (double r : {0.55, 0.7, 0.9}) {
        const SectorGeometry g = sector_geometry(r, 0.0);
        const auto S = geodesic_between({std::cos(g.I_arc.lo), std::sin(g.I_arc.lo)},
                                        {std::cos(g.I_arc.hi), std::sin(g.I_arc.hi)}, 20001);
        double best = INFINITY;
        for (const Point& p : S) best = std::min(best, std::sqrt(dist2(p, {0, 0})));
        CHECK(best == doctest::Approx(geodesic_nearest_delta(r)).epsilon(1e-6));
    }
}

TEST_CASE("harmonic measure matches center and full circle values and the closed form") {
    for (double L : {0.1, 1.0, 3.0, 6.0}) CHECK(std::abs(harmonic_measure({0, 0}, {{0.4, 0.4 + L}}) - L / two_pi) < 1e-10);
    CHECK(std::abs(harmonic_measure({0.3, 0.5}, {{0.0, two_pi}}) - 1.0) < 1e-8);
    CHECK(std::abs(harmonic_measure({0.0, 0.99}, {{-1.0, -1.0 + two_pi}}) - 1.0) < 1e-8);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double r = 0.99 * std::sqrt(U(rng)), a = two_pi * U(rng);
        const Point z{r * std::cos(a), r * std::sin(a)};
        const double t1 = two_pi * U(rng), t2 = t1 + 6.0 * U(rng);
        CHECK(std::abs(harmonic_measure(z, {{t1, t2}}) - omega_closed(z, t1, t2)) < 1e-8);
    }
}

TEST_CASE("harmonic measure is additive and Moebius covariant") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 40; ++k) {
        const double r = 0.95 * std::sqrt(U(rng)), a = two_pi * U(rng);
        const Point z{r * std::cos(a), r * std::sin(a)};
        const double t1 = two_pi * U(rng), t2 = t1 + 2.0 * U(rng), t3 = t2 + 2.0 * U(rng);
        const double whole = harmonic_measure(z, {{t1, t3}});
        CHECK(std::abs(whole - harmonic_measure(z, {{t1, t2}, {t2, t3}})) < 1e-9);
        CHECK(std::abs(whole - harmonic_measure(z, {{t1, t2}}) - harmonic_measure(z, {{t2, t3}})) < 1e-9);

        // push the arc forward by the automorphism sending z to 0
        const double s1 = std::arg(automorphism(z.c(), std::polar(1.0, t1)));
        double s3 = std::arg(automorphism(z.c(), std::polar(1.0, t3)));
        while (s3 <= s1) s3 += two_pi;
        CHECK(std::abs(whole - harmonic_measure({0, 0}, {{s1, s3}})) < 1e-7);
    }
}

TEST_CASE("harmonic measure of A(z) stays above 1/(18 pi^2)") {
    const double bound = 1.0 / (18.0 * pi * pi);
    for (int k = 0; k < 60; ++k) {
        const double r = 0.5 + 0.4999 * k / 59.0;
        for (double alpha : {0.0, 1.0, -2.5}) {
            const SectorGeometry g = sector_geometry(r, alpha);
            CHECK(harmonic_measure(g.z, g.A_arcs) >= bound);
        }
    }
}

TEST_CASE("sector geometry and arc_to_center") {
    const SectorGeometry g = sector_geometry(0.8, 1.0);
    CHECK(g.I_arc.hi - g.I_arc.lo == doctest::Approx(2 * pi * 0.2));
    for (const auto& A : g.A_arcs) {
        // disjoint from I(z)
        CHECK((A.lo >= g.I_arc.hi || A.hi <= g.I_arc.lo));
        CHECK(A.hi - A.lo == doctest::Approx(0.5 * pi * 0.2));
    }
    CHECK(arc_to_center(pi / 2, -pi / 2).r == doctest::Approx(0.5));
    CHECK(arc_to_center(1.0 + 0.02, 1.0).r == doctest::Approx(1 - 0.02 / two_pi).epsilon(1e-12));
    CHECK(arc_to_center(1.02, 1.0).r == doctest::Approx(0.99682).epsilon(1e-5));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(-pi, pi);
    for (int k = 0; k < 200; ++k) {
        const double a = U(rng), x = U(rng);
        const SectorGeometry s = arc_to_center(a, x);
        const SectorGeometry t = sector_geometry(s.r, s.alpha);
        const double e1 = std::abs(wrap_angle(t.I_arc.lo - std::min(x, x + wrap_angle(a - x))));
        const double e2 = std::abs(wrap_angle(t.I_arc.hi - std::max(x, x + wrap_angle(a - x))));
        CHECK(e1 < 1e-12);
        CHECK(e2 < 1e-12);
    }
    // antipodal: arc runs positively from x
    const SectorGeometry anti = arc_to_center(pi, 0.0);
    CHECK(anti.alpha == doctest::Approx(pi / 2));
    CHECK_THROWS(arc_to_center(0.3, 0.3));
}

TEST_CASE("geodesic_between gives diameters and orthogonal arcs") {
    const auto d = geodesic_between({0.5, 0}, {-0.5, 0}, 11);
    for (const Point& p : d) CHECK(p.y == 0.0);
    const auto v = geodesic_between({0, 1}, {0, -1}, 101);
    CHECK(std::abs(v[50].y) < 1e-12);
    CHECK(std::abs(v[50].x) < 1e-12);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const double a1 = two_pi * U(rng), a2 = a1 + 0.3 + 5.0 * U(rng);
        const Point z1{std::cos(a1), std::sin(a1)}, z2{std::cos(a2), std::sin(a2)};
        const auto S = geodesic_between(z1, z2, 65);
        CHECK(S.front() == z1);
        CHECK(S.back() == z2);
        for (const Point& p : S) CHECK(dist2(p, {0, 0}) <= 1.0 + 1e-12);
        // circle through three samples; orthogonal to T iff |c|^2 - R^2 = 1
        const Point p = S[0], q = S[32], s = S[64];
        const double D = 2 * (p.x * (q.y - s.y) + q.x * (s.y - p.y) + s.x * (p.y - q.y));
        if (std::abs(D) < 1e-9) continue;
        const double pp = dist2(p, {0, 0}), qq = dist2(q, {0, 0}), ss = dist2(s, {0, 0});
        const Point c{(pp * (q.y - s.y) + qq * (s.y - p.y) + ss * (p.y - q.y)) / D,
                      (pp * (s.x - q.x) + qq * (p.x - s.x) + ss * (q.x - p.x)) / D};
        const double R2 = dist2(p, c);
        CHECK(std::abs(dist2(c, {0, 0}) - R2 - 1.0) < 1e-9 * std::max(1.0, R2));
        // tangent at the endpoint is radial
        const Point tan{-(p.y - c.y), p.x - c.x};
        CHECK(std::abs(cross(tan, p)) / std::sqrt(dist2(tan, {0, 0})) < 1e-9);
    }
}

TEST_CASE("zipper on the circle reproduces the identity") {
    const DiskMap& m = disk_map();
    double err = 0.0;
    for (const Point& z : disk_grid(400, 0.9)) err = std::max(err, dist(eval(m, z), z));
    CHECK(err < 2e-2);
    CHECK(dist(m.center_image, {0, 0}) <= 1e-9);
    for (const Point& z : disk_grid(60, 0.9)) {
        CHECK(deriv_abs(m, z) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(dist_to_boundary(m, z) == doctest::Approx(std::cos(pi / 512) - std::sqrt(dist2(z, {0, 0}))).epsilon(2e-4));
    }
    CHECK(dist_to_boundary(m, {0, 0}) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(m.validation.pass);
}

TEST_CASE("fitted maps satisfy their own invariants") {
    for (const DiskMap* m : {&disk_map(), &ellipse_map(), &cusp_map()}) {
        const auto& bc = m->boundary_corr;
        REQUIRE(bc.size() >= 64);
        for (std::size_t k = 1; k < bc.size(); ++k) CHECK(bc[k].theta > bc[k - 1].theta);
        CHECK(bc.front().theta >= 0.0);
        CHECK(bc.back().theta < two_pi);
        // vertices in curve order
        std::size_t wraps = 0;
        for (std::size_t k = 1; k < bc.size(); ++k) wraps += bc[k].vertex < bc[k - 1].vertex;
        CHECK(wraps <= 1);
        CHECK(dist(eval(*m, {0, 0}), m->center_image) == 0.0);
        CHECK(dist(m->center_image, m->center) <= 1e-9 * m->diameter);
        double res = 0.0;
        for (const auto& b : bc) res = std::max(res, dist(eval(*m, {std::cos(b.theta), std::sin(b.theta)}), b.p));
        CHECK(res <= 1e-3 * m->diameter);
        // round trip through the forward map
        for (const Point& z : disk_grid(50, 0.9)) CHECK(std::abs(to_disk(*m, eval(*m, z).c()) - z.c()) < 1e-8);
    }
}

TEST_CASE("eval is injective and maps into the domain") {
    for (const DiskMap* m : {&ellipse_map(), &cusp_map()}) {
        const auto grid = disk_grid(100, 0.99);
        std::vector<Point> img;
        for (const Point& z : grid) img.push_back(eval(*m, z));
        double sep = INFINITY;
        for (std::size_t i = 0; i < img.size(); ++i) {
            CHECK(point_inside(*m->domain_curve, img[i]));
            for (std::size_t j = i + 1; j < img.size(); ++j) sep = std::min(sep, dist(img[i], img[j]));
        }
        CHECK(sep > 0.0);
    }
}

TEST_CASE("derivative stencils agree") {
    const DiskMap& m = ellipse_map();
    for (const Point& z : disk_grid(200, 0.99)) {
        const double d2 = deriv_abs(m, z), d4 = deriv_abs_4pt(m, z);
        const double exact = std::abs(eval_with_derivative(m, z.c()).second);
        CHECK(std::abs(d4 / d2 - 1.0) < 1e-5);
        CHECK(std::abs(d2 / exact - 1.0) < 1e-6);
    }
}

TEST_CASE("derivative scales with the domain") {
    const ClosedCurve c = make(CurveKind::ellipse, 256, 2.0, 1.0);
    const DiskMap a = zipper_fit(c);
    ZipperOptions o;
    o.center_hint = 3.0 * a.center;
    const DiskMap b = zipper_fit(scaled(c, 3.0), o);
    for (const Point& z : disk_grid(40, 0.9)) CHECK(deriv_abs(b, z) == doctest::Approx(3.0 * deriv_abs(a, z)).epsilon(1e-6));
}

TEST_CASE("distance to boundary decreases toward the circle") {
    const DiskMap& m = ellipse_map();
    for (double a : {0.0, 1.0, 2.5, 4.0}) {
        double prev = INFINITY;
        for (int k = 0; k <= 20; ++k) {
            const double r = 1.0 - 0.5 * std::pow(2e-3, k / 20.0);
            const double d = dist_to_boundary(m, {r * std::cos(a), r * std::sin(a)});
            CHECK(d < prev);
            prev = d;
        }
        CHECK(prev < 0.01 * m.diameter);
    }
}

TEST_CASE("Koebe sandwich holds on fitted maps and fails on the negative control") {
    CHECK(koebe_check(disk_map(), disk_grid(500, 0.99)).pass);
    CHECK(koebe_check(ellipse_map(), disk_grid(500, 0.95)).pass);
    CHECK(koebe_check(cusp_map(), disk_grid(500, 0.95)).pass);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<Point> rnd;
    for (int k = 0; k < 200; ++k) {
        const double r = 0.98 * std::sqrt(U(rng)), a = two_pi * U(rng);
        rnd.push_back({r * std::cos(a), r * std::sin(a)});
    }
    CHECK(koebe_check(ellipse_map(), rnd).pass);
    for (const DiskMap* m : {&disk_map(), &ellipse_map(), &cusp_map()}) CHECK_FALSE(koebe_check(corrupted(*m, 0), disk_grid(500, 0.95)).pass);
}

TEST_CASE("zipper rejects bad input") {
    CHECK_THROWS(zipper_fit(make(CurveKind::circle, 32)));
    std::vector<Point> v = make(CurveKind::circle, 128).vertices();
    std::reverse(v.begin(), v.end());
    CHECK_THROWS(zipper_fit(ClosedCurve(v)));
    std::vector<Point> bow;
    for (int k = 0; k < 128; ++k) {
        const double t = two_pi * k / 128;
        bow.push_back({std::sin(t), std::sin(t) * std::cos(t)});
    }
    CHECK_THROWS(zipper_fit(ClosedCurve(bow, false)));
}

TEST_CASE("cusp fit records its crowding handling") {
    const DiskMap& m = cusp_map();
    CHECK(!m.crowding.cuts.empty());
    CHECK(m.crowding.min_dtheta >= ZipperOptions{}.crowding_tol);
    CHECK(m.crowding.dropped == 0);
    CHECK(m.validation.pass);
    CHECK(m.domain_curve->size() + m.crowding.removed >= m.source_curve->size());
}

TEST_CASE("derivative ratio bounds") {
    const DiskMap& m = ellipse_map();
    const auto same = derivative_ratio_check(m, {0.3, 0.2}, {0.3, 0.2});
    CHECK(same.log_ratio == 0.0);
    CHECK(same.integrated_pass);
    CHECK(same.prop33_pass);
    CHECK_THROWS(derivative_ratio_check(m, {0.5, 0}, {0.1, 0}));
    const auto d = derivative_ratio_scan(disk_map(), 200, 0.99, 1);
    CHECK(d.integrated_fail == 0);
    CHECK(d.prop33_fail == 0);
    const auto e = derivative_ratio_scan(m, 200, 0.99, 2);
    CHECK(e.integrated_fail == 0);
    CHECK(e.prop33_fail == 0);
    CHECK(e.prop33_rho_fail == 0);
}

TEST_CASE("lemma constants on the disk match closed forms") {
    const auto grid = lemma_grid(8, 8);
    REQUIRE(grid.size() == 64);
    const auto rep = lemma_constants_report(disk_map(), 1.0, grid, 16);
    // chord of I(z) is 2 sin(pi u) with u = 1 - r and |f'| = 1
    double mmax = 0.0, nmin = INFINITY;
    for (const Point& z : grid) {
        const double u = 1.0 - std::sqrt(dist2(z, {0, 0}));
        mmax = std::max(mmax, 2 * std::sin(pi * u) / u);
        nmin = std::min(nmin, 2 * std::sin(pi * u) / u);
    }
    CHECK(rep.M_hat.value == doctest::Approx(mmax).epsilon(2e-3));
    CHECK(rep.N_hat.value == doctest::Approx(nmin).epsilon(2e-3));
    CHECK(rep.N_hat.value > 0.0);
    CHECK(rep.c_center == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(std::isfinite(rep.N3_hat.value));
    CHECK(std::isfinite(rep.N2_hat.value));
    CHECK(rep.gh_len_ratio.value > 0.0);
    CHECK_THROWS(lemma_constants_report(disk_map(), 1.0, lemma_grid(4, 12)));
}

TEST_CASE("lemma constants are stable under grid refinement") {
    const auto a = lemma_constants_report(ellipse_map(), 1.0, lemma_grid(6, 12), 16);
    const auto b = lemma_constants_report(ellipse_map(), 1.0, lemma_grid(6, 24), 16);
    for (auto [x, y] : {std::pair{a.N3_hat.value, b.N3_hat.value}, {a.M_hat.value, b.M_hat.value}, {a.N_hat.value, b.N_hat.value}}) {
        CHECK(y <= 2 * x);
        CHECK(x <= 2 * y);
    }
}

TEST_CASE("thm47 on the disk and the ellipse") {
    const auto grid = lemma_grid(6, 12);
    for (const DiskMap* m : {&disk_map(), &ellipse_map()}) {
        const auto L = lemma_constants_report(*m, 1.0, grid, 16);
        const auto r = thm47_verify(*m, 1.0, 2'000'000, L);
        CHECK(r.chord_arc_pass);
        CHECK(r.chord_arc_fail == 0);
        CHECK(r.ratios_pass);
        CHECK(r.worst_log_slack < 0.0);
        CHECK(r.eta.pass);
        CHECK(r.pass);
        CHECK(r.triples > 0);
    }
    CHECK_THROWS(thm47_verify(disk_map(), 1.0, 1000, std::nullopt));
}

TEST_CASE("eta is increasing and dominates identity ratios") {
    double prev = -INFINITY;
    for (int k = 0; k < 50; ++k) {
        const double kk = 1.0 + 0.2 * k;
        const double v = log_eta_hat(kk, 0.5, 3.0, 2.0);
        CHECK(v > prev);
        prev = v;
        // on the circle m = k for k >= 1 up to the chord ceiling
        CHECK(std::log(std::min(kk, 2.0)) <= log_eta_hat(kk, 1.0, 2 * pi, 4.0));
    }
}

TEST_CASE("conformal checks are thread independent") {
    const int saved = max_threads();
    set_threads(1);
    const auto a = derivative_ratio_scan(ellipse_map(), 60, 0.95, 3);
    const auto ka = koebe_check(ellipse_map(), disk_grid(100, 0.95));
    set_threads(4);
    const auto b = derivative_ratio_scan(ellipse_map(), 60, 0.95, 3);
    const auto kb = koebe_check(ellipse_map(), disk_grid(100, 0.95));
    set_threads(saved);
    CHECK(a.worst_integrated == b.worst_integrated);
    CHECK(a.worst_prop33 == b.worst_prop33);
    CHECK(ka.lower_margin == kb.lower_margin);
    CHECK(ka.upper_margin == kb.upper_margin);
}
