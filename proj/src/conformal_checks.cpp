#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>
#include <sstream>

#include "tqc/conformal.hpp"
#include "tqc/parallel.hpp"

namespace tqc {

double hyperbolic_distance(Point z, Point w) {
    const cplx a = z.c(), b = w.c();
    if (std::abs(a) >= 1.0 || std::abs(b) >= 1.0) throw std::invalid_argument("hyperbolic_distance: points must lie in the open disk");
    const double p = std::abs(a - b) / std::abs(1.0 - std::conj(a) * b);
    return std::atanh(p);
}

double geodesic_nearest_delta(double r) {
    if (!(r >= 0.5 && r < 1.0)) throw std::invalid_argument("geodesic_nearest_delta: r must lie in [1/2, 1)");
    if (r == 0.5) return 0.0;
    const double a = pi * (1.0 - r);
    return (1.0 - std::sin(a)) / std::cos(a);
}

double harmonic_measure(Point z, const std::vector<AngleArc>& arcs) {
    const double r2 = dist2(z, {0, 0});
    if (r2 >= 1.0) throw std::invalid_argument("harmonic_measure: z must lie in the open disk");
    const double phi = std::atan2(z.y, z.x);
    auto kernel = [&](double th) {
        const double dx = std::cos(th) - z.x, dy = std::sin(th) - z.y;
        return (1.0 - r2) / (dx * dx + dy * dy) / two_pi;
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double total = 0.0;
    for (const AngleArc& arc : arcs) {
        if (!(arc.hi >= arc.lo) || arc.hi - arc.lo > two_pi + 1e-12) throw std::invalid_argument("harmonic_measure: bad arc");
        // split at the kernel peak when it lies inside the arc
        std::vector<double> cuts{arc.lo};
        double peak = arc.lo + wrap_positive(phi - arc.lo);
        while (peak < arc.hi) {
            if (peak > arc.lo) cuts.push_back(peak);
            peak += two_pi;
        }
        cuts.push_back(arc.hi);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            if (cuts[k + 1] <= cuts[k]) continue;
            double err = 0.0;
            total += GK::integrate(kernel, cuts[k], cuts[k + 1], 15, 1e-10, &err);
        }
    }
    return total;
}

SectorGeometry sector_geometry(double r, double alpha) {
    if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("sector_geometry: r must lie in [0, 1)");
    SectorGeometry g;
    g.r = r;
    g.u = 1.0 - r;
    g.alpha = alpha;
    g.z = {r * std::cos(alpha), r * std::sin(alpha)};
    const double u = 1.0 - r;
    g.I_arc = {alpha - pi * u, alpha + pi * u};
    g.A_arcs = {{alpha + 1.5 * pi * u, alpha + 2.0 * pi * u}, {alpha - 2.0 * pi * u, alpha - 1.5 * pi * u}};
    return g;
}

SectorGeometry arc_to_center(double a, double x) {
    double d = wrap_angle(a - x);
    if (d == 0.0) throw std::invalid_argument("arc_to_center: a and x coincide");
    // antipodal points: wrap_angle returns +pi, so the arc runs in the positive direction from x
    const double r = 1.0 - std::abs(d) / two_pi;
    SectorGeometry g = sector_geometry(r, x + d / 2.0);
    g.u = std::abs(d) / two_pi;
    g.I_arc = {std::min(x, x + d), std::max(x, x + d)};
    return g;
}

std::vector<Point> geodesic_between(Point z1, Point z2, std::size_t samples) {
    if (z1 == z2) throw std::invalid_argument("geodesic_between: endpoints coincide");
    if (dist2(z1, {0, 0}) > 1.0 + 1e-12 || dist2(z2, {0, 0}) > 1.0 + 1e-12)
        throw std::invalid_argument("geodesic_between: endpoints must lie in the closed disk");
    samples = std::max<std::size_t>(samples, 2);
    std::vector<Point> out(samples);
    const double det = 2.0 * cross(z1, z2);
    const double scale = std::sqrt(dist2(z1, {0, 0}) * dist2(z2, {0, 0}));
    if (std::abs(det) <= 1e-13 * std::max(scale, 1e-300) || scale == 0.0) {
        for (std::size_t k = 0; k < samples; ++k) out[k] = z1 + (double(k) / double(samples - 1)) * (z2 - z1);
    } else {
        const double r1 = 1.0 + dist2(z1, {0, 0}), r2 = 1.0 + dist2(z2, {0, 0});
        const Point c{(r1 * z2.y - r2 * z1.y) / det, (z1.x * r2 - z2.x * r1) / det};
        const double R = dist(z1, c);
        const double p1 = std::atan2(z1.y - c.y, z1.x - c.x);
        const double dp = wrap_angle(std::atan2(z2.y - c.y, z2.x - c.x) - p1);
        for (std::size_t k = 0; k < samples; ++k) {
            const double a = p1 + dp * double(k) / double(samples - 1);
            out[k] = {c.x + R * std::cos(a), c.y + R * std::sin(a)};
        }
    }
    out.front() = z1;
    out.back() = z2;
    return out;
}

DerivRatioReport derivative_ratio_check(const DiskMap& map, Point z1, Point z2, double slack) {
    const double r1 = std::sqrt(dist2(z1, {0, 0})), r2 = std::sqrt(dist2(z2, {0, 0}));
    if (!(r1 <= r2) || r2 > 1.0 - 1e-4) throw std::invalid_argument("derivative_ratio_check: need |z1| <= |z2| <= 1 - 1e-4");
    DerivRatioReport rep;
    rep.z1 = z1;
    rep.z2 = z2;
    rep.log_ratio = std::log(deriv_abs(map, z1) / deriv_abs(map, z2));
    rep.lambda = hyperbolic_distance(z1, z2);
    const double dang = r1 == 0.0 ? 0.0 : std::abs(wrap_angle(std::atan2(z1.y, z1.x) - std::atan2(z2.y, z2.x)));
    rep.integrated_bound = 4.0 * r2 / (1.0 - r2 * r2) * dang + std::log((1.0 - r1) / (1.0 - r2)) + std::log(8.0);
    const double ls = std::log(slack);
    rep.integrated_pass = rep.log_ratio <= rep.integrated_bound + ls;
    rep.prop33_pass = std::abs(rep.log_ratio) <= 3.0 * rep.lambda + ls;
    rep.prop33_rho_pass = std::abs(rep.log_ratio) <= 6.0 * rep.lambda + ls;
    return rep;
}

DerivRatioSummary derivative_ratio_scan(const DiskMap& map, std::size_t pairs, double rmax, std::uint64_t seed,
                                        double slack) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<std::pair<Point, Point>> zs(pairs);
    for (auto& [a, b] : zs) {
        Point p[2];
        for (auto& q : p) {
            const double r = rmax * std::sqrt(U(rng)), th = two_pi * U(rng);
            q = {r * std::cos(th), r * std::sin(th)};
        }
        if (dist2(p[0], {0, 0}) > dist2(p[1], {0, 0})) std::swap(p[0], p[1]);
        a = p[0];
        b = p[1];
    }
    std::vector<DerivRatioReport> reps(pairs);
    parallel_for(pairs, [&](std::size_t k) { reps[k] = derivative_ratio_check(map, zs[k].first, zs[k].second, slack); });
    DerivRatioSummary s;
    s.pairs = pairs;
    for (const auto& r : reps) {
        s.integrated_fail += !r.integrated_pass;
        s.prop33_fail += !r.prop33_pass;
        s.prop33_rho_fail += !r.prop33_rho_pass;
        const double gi = r.log_ratio - r.integrated_bound;
        if (gi > s.worst_integrated) {
            s.worst_integrated = gi;
            s.integrated_witness = r;
        }
        const double gp = r.lambda > 0.0 ? std::abs(r.log_ratio) / r.lambda : 0.0;
        if (gp > s.worst_prop33) {
            s.worst_prop33 = gp;
            s.prop33_witness = r;
        }
    }
    return s;
}

std::vector<Point> lemma_grid(std::size_t radii, std::size_t angles) {
    std::vector<Point> g;
    for (std::size_t i = 0; i < radii; ++i) {
        const double u = radii == 1 ? 0.5 : 0.5 * std::pow(2e-3, double(i) / double(radii - 1));
        for (std::size_t j = 0; j < angles; ++j) {
            const double a = two_pi * double(j) / double(angles);
            g.emplace_back((1.0 - u) * std::cos(a), (1.0 - u) * std::sin(a));
        }
    }
    return g;
}

namespace {

std::vector<Point> images(const DiskMap& map, const std::vector<Point>& zs) {
    std::vector<Point> out(zs.size());
    for (std::size_t k = 0; k < zs.size(); ++k) out[k] = eval(map, zs[k]);
    return out;
}

double polyline_length(const std::vector<Point>& p) {
    double s = 0.0;
    for (std::size_t k = 1; k < p.size(); ++k) s += dist(p[k - 1], p[k]);
    return s;
}

Point polar_pt(double r, double a) { return {r * std::cos(a), r * std::sin(a)}; }

// boundary sweep of B(z) plus an interior fill
std::vector<Point> sector_fill(double r, double alpha, std::size_t boundary, std::size_t fill) {
    const double h = pi * (1.0 - r);
    std::vector<Point> pts;
    const std::size_t arc = boundary * 3 / 8, side = (boundary - 2 * arc) / 2;
    for (std::size_t k = 0; k < arc; ++k) {
        const double a = alpha - h + 2.0 * h * double(k) / double(arc - 1);
        pts.push_back(polar_pt(r, a));
        pts.push_back(polar_pt(1.0, a));
    }
    for (std::size_t k = 0; k < side; ++k) {
        const double rr = r + (1.0 - r) * double(k) / double(side - 1);
        pts.push_back(polar_pt(rr, alpha - h));
        pts.push_back(polar_pt(rr, alpha + h));
    }
    for (std::size_t i = 0; i < fill; ++i)
        for (std::size_t j = 0; j < fill; ++j)
            pts.push_back(polar_pt(r + (1.0 - r) * (double(i) + 0.5) / double(fill),
                                   alpha - h + 2.0 * h * (double(j) + 0.5) / double(fill)));
    return pts;
}

}  // namespace

ConformalConstantsReport lemma_constants_report(const DiskMap& map, double t, const std::vector<Point>& grid,
                                                std::size_t pairs, std::uint64_t seed) {
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("lemma_constants_report: t must lie in (0, 1]");
    if (grid.size() < 50) throw std::invalid_argument("lemma_constants_report: grid too sparse (fewer than 50 points)");
    const std::size_t n = grid.size();
    std::vector<double> n3(n, NAN), mh(n, NAN), nh(n, NAN);
    parallel_for(n, [&](std::size_t k) {
        const Point z = grid[k];
        const double r = std::sqrt(dist2(z, {0, 0})), alpha = std::atan2(z.y, z.x);
        if (r >= 1.0) throw std::invalid_argument("lemma_constants_report: grid point outside the disk");
        const double fp = deriv_abs(map, z);
        const double df = dist_to_boundary(map, z);
        n3[k] = diameter_of(images(map, sector_fill(r, alpha, 256, 16))) / std::pow(df, t);
        if (r >= 0.5) {
            const double h = pi * (1.0 - r);
            const double chord = dist(eval(map, polar_pt(1.0, alpha - h)), eval(map, polar_pt(1.0, alpha + h)));
            mh[k] = chord / std::pow((1.0 - r) * fp, t);
            nh[k] = std::pow(chord, t) / ((1.0 - r) * fp);
        }
    });
    ConformalConstantsReport rep;
    rep.t = t;
    rep.grid_points = n;
    double rmin = INFINITY, rmax = 0.0;
    for (const Point& z : grid) {
        const double r = std::sqrt(dist2(z, {0, 0}));
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    std::ostringstream os;
    os << n << " points, r in [" << rmin << ", " << rmax << "]";
    rep.grid = os.str();
    rep.N3_hat.value = rep.M_hat.value = 0.0;
    rep.N_hat.value = INFINITY;
    for (std::size_t k = 0; k < n; ++k) {
        if (n3[k] > rep.N3_hat.value) rep.N3_hat = {n3[k], grid[k]};
        if (std::isnan(mh[k])) continue;
        if (mh[k] > rep.M_hat.value) rep.M_hat = {mh[k], grid[k]};
        if (nh[k] < rep.N_hat.value) rep.N_hat = {nh[k], grid[k]};
    }
    if (std::isinf(rep.N_hat.value)) throw std::invalid_argument("lemma_constants_report: no grid point with |z| >= 1/2");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    struct Pair {
        double a, b, ra, rb;
    };
    std::vector<Pair> pp(pairs);
    for (auto& p : pp) {
        p.a = two_pi * U(rng);
        p.b = p.a + (0.02 + 0.96 * U(rng)) * two_pi;
        p.ra = 0.5 + 0.45 * U(rng);
        p.rb = 0.5 + 0.45 * U(rng);
    }
    std::vector<double> n2(pairs), gl(pairs), gd(pairs);
    parallel_for(pairs, [&](std::size_t k) {
        const Pair& p = pp[k];
        const Point b1 = polar_pt(1.0, p.a), b2 = polar_pt(1.0, p.b);
        const auto S = images(map, geodesic_between(b1, b2, 64));
        n2[k] = diameter_of(S) / std::pow(dist(S.front(), S.back()), t);

        const Point z1 = polar_pt(p.ra, p.a), z2 = polar_pt(p.rb, p.b);
        const auto G = images(map, geodesic_between(z1, z2, 64));
        // competitor: radially out, along a circle, radially back in
        const double rho = 0.5 * (1.0 + std::max(p.ra, p.rb));
        const double da = wrap_angle(p.b - p.a);
        std::vector<Point> L;
        for (std::size_t j = 0; j < 64; ++j) L.push_back(polar_pt(p.ra + (rho - p.ra) * double(j) / 63.0, p.a));
        for (std::size_t j = 1; j < 64; ++j) L.push_back(polar_pt(rho, p.a + da * double(j) / 63.0));
        for (std::size_t j = 1; j < 64; ++j) L.push_back(polar_pt(rho + (p.rb - rho) * double(j) / 63.0, p.b));
        const auto FL = images(map, L);
        gl[k] = polyline_length(G) / polyline_length(FL);
        gd[k] = diameter_of(G) / diameter_of(FL);
    });
    for (std::size_t k = 0; k < pairs; ++k) {
        if (n2[k] > rep.N2_hat.value) rep.N2_hat = {n2[k], polar_pt(1.0, pp[k].a)};
        if (gl[k] > rep.gh_len_ratio.value) rep.gh_len_ratio = {gl[k], polar_pt(pp[k].ra, pp[k].a)};
        if (gd[k] > rep.gh_diam_ratio.value) rep.gh_diam_ratio = {gd[k], polar_pt(pp[k].ra, pp[k].a)};
    }
    rep.c_center = dist_to_boundary(map, {0, 0}) / curve_diameter(*map.domain_curve);
    return rep;
}

double log_eta_hat(double k, double t, double M_hat, double N_hat) {
    return t * (std::log(4.0 * pi * k) + 4.0 * pi * pi * k) + std::log(M_hat) - t * std::log(N_hat) +
           t * std::log(k * pi / 2.0);
}

Thm47Report thm47_verify(const DiskMap& map, double t, std::size_t triple_budget,
                         const std::optional<ConformalConstantsReport>& constants, std::uint64_t seed) {
    if (!constants) throw std::invalid_argument("thm47_verify: missing constants report");
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("thm47_verify: t must lie in (0, 1]");
    const BoundaryMap bm = conformal_boundary_map(map);
    const std::size_t n = bm.size();
    if (n < 512) throw std::invalid_argument("thm47_verify: boundary correspondence needs at least 512 samples");
    Thm47Report rep;
    rep.t = t;
    rep.exponent = t * t;
    rep.M_hat = constants->M_hat.value;
    rep.N_hat = constants->N_hat.value;

    const std::size_t nx = std::clamp<std::size_t>(triple_budget / (n * n), 1, n);
    const std::size_t offset = static_cast<std::size_t>(seed % n);
    struct Worst {
        double slack = -INFINITY;
        std::size_t a = 0, b = 0, x = 0;
        double k = 0.0;
        std::size_t count = 0;
        std::size_t ca = 0, ca_fail = 0;
    };
    std::vector<Worst> ws(nx);
    parallel_for(nx, [&](std::size_t ix) {
        const std::size_t x = (offset + ix * n / nx) % n;
        Worst& w = ws[ix];
        w.x = x;
        std::vector<double> dd(n), fd(n);
        for (std::size_t j = 0; j < n; ++j) {
            dd[j] = domain_distance(bm, j, x);
            fd[j] = dist(bm.samples[j].p, bm.samples[x].p);
        }
        for (std::size_t a = 0; a < n; ++a) {
            if (a == x) continue;
            const SectorGeometry g = arc_to_center(bm.samples[a].theta, bm.samples[x].theta);
            const double u = g.u;
            // chord of the I(z) endpoints of the constructed center
            const double chord = 2.0 * std::sin((g.I_arc.hi - g.I_arc.lo) / 2.0);
            ++w.ca;
            if (!(4.0 * u <= chord * (1.0 + 1e-12) && chord <= two_pi * u * (1.0 + 1e-12))) ++w.ca_fail;
            for (std::size_t b = 0; b < n; ++b) {
                if (b == x || fd[b] < min_denominator) continue;
                const double k = k_ratio(dd[a], dd[b]);
                if (k < 1.0) continue;
                ++w.count;
                const double s = std::log(fd[a]) - rep.exponent * std::log(fd[b]) - log_eta_hat(k, t, rep.M_hat, rep.N_hat);
                if (s > w.slack) {
                    w.slack = s;
                    w.a = a;
                    w.b = b;
                    w.k = k;
                }
            }
        }
    });
    for (const Worst& w : ws) {
        rep.triples += w.count;
        rep.chord_arc_pairs += w.ca;
        rep.chord_arc_fail += w.ca_fail;
        if (w.slack > rep.worst_log_slack) {
            rep.worst_log_slack = w.slack;
            rep.a = w.a;
            rep.b = w.b;
            rep.x = w.x;
            rep.witness_k = w.k;
        }
    }
    rep.ratios_pass = rep.triples > 0 && rep.worst_log_slack <= 0.0 && std::isfinite(rep.M_hat) && rep.N_hat > 0.0;
    rep.chord_arc_pass = rep.chord_arc_fail == 0;
    rep.rho = qs_modulus(bm, rep.exponent, 48, 8.0);
    rep.eta = eta_shape_fit(rep.rho);
    rep.pass = rep.ratios_pass && rep.chord_arc_pass && rep.eta.pass;
    return rep;
}

}  // namespace tqc
