#include "tqc/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "tqc/parallel.hpp"

namespace tqc {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
const cplx I(0.0, 1.0);

cplx stage_forward(cplx w, const ZipperStage& s) {
    const cplx h = w / (1.0 - w * s.invb);
    return h * std::sqrt(1.0 + s.c * s.c / (h * h)) / s.c;
}

// real axis points; 0 is the tip just zipped and goes to the left prime end
double stage_forward_real(double x, const ZipperStage& s) {
    if (x == 0.0) return -1.0;
    double h;
    if (std::isinf(x)) {
        if (s.invb == 0.0) return x;
        h = -1.0 / s.invb;
    } else {
        const double d = 1.0 - x * s.invb;
        if (d == 0.0) return INFINITY;
        h = x / d;
    }
    return std::copysign(std::hypot(h, s.c), h) / s.c;
}

struct ZipRun {
    std::vector<ZipperStage> stages;
    std::vector<double> img;  // real coordinate per vertex, NaN when skipped
    std::vector<char> accepted;
    double z0img = INFINITY;
    cplx center;
};

ZipRun zip(const std::vector<cplx>& P, cplx center, double tol) {
    const std::size_t n = P.size();
    const cplx z0 = P[0], z1 = P[1];
    ZipRun r;
    r.img.assign(n, NAN);
    r.accepted.assign(n, 0);
    r.accepted[0] = r.accepted[1] = 1;
    r.img[1] = 0.0;
    std::vector<cplx> cur(n);
    for (std::size_t k = 2; k < n; ++k) cur[k] = I * std::sqrt((P[k] - z1) / (P[k] - z0));
    cplx cc = I * std::sqrt((center - z1) / (center - z0));
    std::vector<std::size_t> done{1};
    for (std::size_t j = 2; j < n; ++j) {
        const cplx a = cur[j];
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || !(a.imag() > 0.0)) continue;
        ZipperStage st{a.real() / std::norm(a), std::norm(a) / a.imag()};
        if (!std::isfinite(st.invb) || !std::isfinite(st.c)) continue;
        const cplx p = stage_forward(cc, st);
        const double om = std::atan2(p.imag(), std::norm(p) + p.real()) / pi;
        if (!(two_pi * om >= tol)) continue;
        r.stages.push_back(st);
        cc = p;
        for (std::size_t k = j + 1; k < n; ++k) cur[k] = stage_forward(cur[k], st);
        for (std::size_t k : done) r.img[k] = stage_forward_real(r.img[k], st);
        r.z0img = stage_forward_real(r.z0img, st);
        r.img[j] = 0.0;
        r.accepted[j] = 1;
        done.push_back(j);
    }
    r.center = cc;
    return r;
}

cplx final_map(double zeta0, bool inf, cplx w) { return inf ? w : zeta0 * w / (zeta0 - w); }

// upper half plane of the final coordinate -> disk, before rotation
cplx half_to_disk(const DiskMap& m, cplx u) {
    if (std::isinf(u.real()) || std::isinf(u.imag())) return 1.0;
    return (u - m.wc) / (u - std::conj(m.wc));
}

std::size_t nearest_vertex(const std::vector<Point>& W, Point c) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < W.size(); ++k)
        if (dist2(W[k], c) < dist2(W[best], c)) best = k;
    return best;
}

struct Assembled {
    DiskMap map;
    std::vector<std::size_t> skipped;  // working indices
};

Assembled assemble(const std::vector<Point>& W, const std::vector<std::size_t>& src, Point center, double tol) {
    const std::size_t n = W.size();
    std::vector<cplx> P(n);
    for (std::size_t k = 0; k < n; ++k) P[k] = W[k].c();
    ZipRun r = zip(P, center.c(), tol);

    Assembled out;
    DiskMap& m = out.map;
    m.z0 = P[0];
    m.z1 = P[1];
    m.stages = r.stages;
    m.zeta0_infinite = std::isinf(r.z0img);
    m.zeta0 = m.zeta0_infinite ? 0.0 : r.z0img;
    const cplx mc = final_map(m.zeta0, m.zeta0_infinite, r.center);
    const cplx uc = mc * mc;
    m.sign = uc.imag() > 0.0 ? 1 : -1;
    m.wc = double(m.sign) * uc;
    m.rotation = 0.0;
    m.center = center;
    m.source_index = src;

    const auto [f0, d0] = eval_with_derivative(m, cplx(0.0, 0.0));
    (void)f0;
    m.rotation = std::arg(d0);

    // angles closer than tol to the previous accepted vertex are unresolved as well
    double prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double theta = NAN;
        if (k == 0) {
            theta = m.rotation;
        } else if (r.accepted[k]) {
            const cplx w = final_map(m.zeta0, m.zeta0_infinite, cplx(r.img[k], 0.0));
            const cplx u = double(m.sign) * w * w;
            theta = std::arg(half_to_disk(m, u)) + m.rotation;
            const double gap = wrap_positive(theta - prev);
            if (!(gap >= tol) || gap > pi) theta = NAN;
        }
        if (std::isnan(theta)) {
            out.skipped.push_back(k);
            continue;
        }
        prev = theta;
        m.boundary_corr.push_back({wrap_positive(theta), W[k], k});
    }
    return out;
}

}  // namespace

Point deepest_point(const ClosedCurve& curve) {
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const Point& p : curve.vertices()) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const std::size_t g = 48;
    std::vector<double> val(g * g, -1.0);
    parallel_for(g * g, [&](std::size_t k) {
        const Point p{xmin + (xmax - xmin) * (double(k % g) + 0.5) / g, ymin + (ymax - ymin) * (double(k / g) + 0.5) / g};
        if (point_inside(curve, p)) val[k] = polyline_distance(curve, p);
    });
    const std::size_t kb = static_cast<std::size_t>(std::max_element(val.begin(), val.end()) - val.begin());
    if (val[kb] <= 0.0) throw std::invalid_argument("no interior grid point found");
    Point best{xmin + (xmax - xmin) * (double(kb % g) + 0.5) / g, ymin + (ymax - ymin) * (double(kb / g) + 0.5) / g};
    double bestv = val[kb];
    double hx = (xmax - xmin) / g, hy = (ymax - ymin) / g;
    for (int round = 0; round < 4; ++round) {
        const Point c = best;
        for (int i = -5; i <= 5; ++i)
            for (int j = -5; j <= 5; ++j) {
                const Point p{c.x + hx * i / 5.0, c.y + hy * j / 5.0};
                if (!point_inside(curve, p)) continue;
                const double v = polyline_distance(curve, p);
                if (v > bestv) {
                    bestv = v;
                    best = p;
                }
            }
        hx /= 5.0;
        hy /= 5.0;
    }
    return best;
}

std::vector<Point> disk_grid(std::size_t count, double rmax) {
    std::vector<Point> g;
    g.reserve(count);
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < count; ++k) {
        const double r = rmax * std::sqrt((double(k) + 0.5) / double(count));
        g.emplace_back(r * std::cos(golden * double(k)), r * std::sin(golden * double(k)));
    }
    return g;
}

std::pair<cplx, cplx> eval_with_derivative(const DiskMap& m, cplx z) {
    const double az = std::abs(z);
    if (az > 1.0 - 1e-9) z *= (1.0 - 1e-9) / az;
    const cplx rot = std::polar(1.0, -m.rotation);
    const cplx zr = z * rot;
    cplx d = rot;
    // Cayley form keeps Im u = (1 - |z|^2) / |1 - z|^2 exact in sign near the circle
    const double q2 = 1.0 - std::norm(zr), den2 = std::norm(1.0 - zr);
    const cplx cay((-2.0 * zr.imag()) / den2, q2 / den2);
    const cplx u = m.wc.real() + m.wc.imag() * cay;
    d *= m.wc.imag() * 2.0 * I / ((1.0 - zr) * (1.0 - zr));
    const cplx mm = m.sign > 0 ? std::sqrt(u) : I * std::sqrt(u);
    d *= double(m.sign) / (2.0 * mm);
    cplx zeta = mm;
    if (!m.zeta0_infinite) {
        zeta = m.zeta0 * mm / (m.zeta0 + mm);
        d *= m.zeta0 * m.zeta0 / ((m.zeta0 + mm) * (m.zeta0 + mm));
    }
    for (auto it = m.stages.rbegin(); it != m.stages.rend(); ++it) {
        const cplx U = zeta * it->c;
        const cplx h = std::sqrt(U - it->c) * std::sqrt(U + it->c);
        d *= it->c * U / h;
        const cplx den = 1.0 + h * it->invb;
        zeta = h / den;
        if (!(zeta.imag() > 0.0)) zeta.imag(0.0);
        d /= den * den;
    }
    const cplx q = -zeta * zeta;
    d *= -2.0 * zeta;
    const cplx w = (q * m.z0 - m.z1) / (q - 1.0);
    d *= (m.z1 - m.z0) / ((q - 1.0) * (q - 1.0));
    return {w, d};
}

Point eval(const DiskMap& map, Point z) { return Point(eval_with_derivative(map, z.c()).first); }

cplx to_disk(const DiskMap& m, cplx w) {
    cplx zeta = I * std::sqrt((w - m.z1) / (w - m.z0));
    for (const auto& st : m.stages) zeta = stage_forward(zeta, st);
    const cplx mm = final_map(m.zeta0, m.zeta0_infinite, zeta);
    return half_to_disk(m, double(m.sign) * mm * mm) * std::polar(1.0, m.rotation);
}

double deriv_abs(const DiskMap& map, Point z) {
    const cplx zc = z.c();
    const double h = 1e-4 * (1.0 - std::abs(zc));
    auto D = [&](double s) {
        return (eval_with_derivative(map, zc + s).first - eval_with_derivative(map, zc - s).first) / (2.0 * s);
    };
    return std::abs((4.0 * D(h / 2) - D(h)) / 3.0);
}

double deriv_abs_4pt(const DiskMap& map, Point z) {
    const cplx zc = z.c();
    const double h = 1e-4 * (1.0 - std::abs(zc));
    auto f = [&](double s) { return eval_with_derivative(map, zc + s).first; };
    return std::abs((-f(2 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2 * h)) / (12.0 * h));
}

double dist_to_boundary(const DiskMap& map, Point z) { return polyline_distance(*map.domain_curve, eval(map, z)); }

KoebeReport koebe_check(const DiskMap& map, const std::vector<Point>& grid, double slack) {
    const std::size_t n = grid.size();
    std::vector<double> lo(n), up(n);
    std::vector<char> in(n);
    parallel_for(n, [&](std::size_t k) {
        const Point z = grid[k];
        const double q = 1.0 - dist2(z, {0, 0});
        const Point w = eval(map, z);
        const double df = polyline_distance(*map.domain_curve, w);
        const double fp = deriv_abs(map, z);
        in[k] = point_inside(*map.domain_curve, w) && finite(w);
        lo[k] = df / (0.25 * q * fp);
        up[k] = q * fp / df;
        if (!std::isfinite(lo[k])) lo[k] = 0.0;
        if (!std::isfinite(up[k])) up[k] = 0.0;
    });
    KoebeReport r;
    r.slack = slack;
    r.points = n;
    r.lower_margin = r.upper_margin = INFINITY;
    for (std::size_t k = 0; k < n; ++k) {
        if (!in[k]) ++r.outside;
        if (lo[k] < r.lower_margin) {
            r.lower_margin = lo[k];
            r.lower_witness = grid[k];
        }
        if (up[k] < r.upper_margin) {
            r.upper_margin = up[k];
            r.upper_witness = grid[k];
        }
    }
    r.pass = r.outside == 0 && r.lower_margin * slack >= 1.0 && r.upper_margin * slack >= 1.0;
    return r;
}

DiskMap zipper_fit(const ClosedCurve& curve, const ZipperOptions& opt) {
    const std::size_t N = curve.size();
    if (N < 64) throw std::invalid_argument("zipper_fit needs at least 64 vertices");
    if (!is_simple(curve.vertices())) throw std::invalid_argument("zipper_fit: curve is not simple");
    if (curve.orientation() != Orientation::ccw) throw std::invalid_argument("zipper_fit: curve must be counterclockwise");
    const Point center = opt.center_hint ? *opt.center_hint : deepest_point(curve);
    if (!point_inside(curve, center) || polyline_distance(curve, center) <= 0.0)
        throw std::invalid_argument("zipper_fit: center is not interior");

    std::vector<Point> W = curve.vertices();
    std::vector<std::size_t> src(N);
    std::iota(src.begin(), src.end(), std::size_t{0});
    std::size_t refits = 0;
    Assembled fit;
    for (;;) {
        const std::size_t s0 = nearest_vertex(W, center);
        std::rotate(W.begin(), W.begin() + static_cast<std::ptrdiff_t>(s0), W.end());
        std::rotate(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(s0), src.end());
        fit = assemble(W, src, center, opt.crowding_tol);
        if (fit.skipped.empty() || refits >= opt.max_refits) break;

        // cut every run of skipped vertices by a straight cross-cut, widening until simple
        std::vector<std::pair<std::size_t, std::size_t>> runs;
        for (std::size_t k : fit.skipped) {
            if (!runs.empty() && k <= runs.back().second + 3) runs.back().second = k;
            else runs.emplace_back(k, k);
        }
        std::vector<Point> nW;
        std::vector<std::size_t> nsrc;
        bool ok = false;
        for (std::size_t extra = 1; extra < W.size() && !ok; extra *= 2) {
            nW.clear();
            nsrc.clear();
            std::vector<char> drop(W.size(), 0);
            for (auto [s, e] : runs) {
                const std::size_t g = extra - 1;
                const std::size_t lo = s > g + 2 ? s - g : 2;
                const std::size_t hi = std::min(W.size() - 1, e + g);
                for (std::size_t k = lo; k <= hi; ++k) drop[k] = 1;
            }
            for (std::size_t k = 0; k < W.size(); ++k) {
                if (drop[k]) continue;
                nW.push_back(W[k]);
                nsrc.push_back(src[k]);
                if (k + 1 < W.size() && drop[k + 1]) {
                    std::size_t q = k + 1;
                    while (q < W.size() && drop[q]) ++q;
                    q %= W.size();
                    const Point a = W[k], b = W[q];
                    const double el = 0.5 * (dist(a, W[k - 1]) + dist(b, W[(q + 1) % W.size()]));
                    const std::size_t pieces =
                        std::clamp<std::size_t>(std::size_t(std::ceil(dist(a, b) / el)), 1, std::max<std::size_t>(1, (q + W.size() - k - 1) % W.size() / 2));
                    for (std::size_t j = 1; j < pieces; ++j) {
                        nW.push_back(a + (double(j) / double(pieces)) * (b - a));
                        nsrc.push_back(npos);
                    }
                }
            }
            ok = nW.size() >= 64 && is_simple(nW) && signed_area(nW) > 0.0;
            if (ok) {
                const ClosedCurve test(nW, false);
                ok = point_inside(test, center) && polyline_distance(test, center) > 0.0;
            }
        }
        if (!ok) break;
        W = std::move(nW);
        src = std::move(nsrc);
        ++refits;
    }

    DiskMap m = std::move(fit.map);
    m.domain_curve = std::make_shared<const ClosedCurve>(W, false);
    m.source_curve = std::make_shared<const ClosedCurve>(curve);
    m.diameter = curve_diameter(*m.domain_curve);

    // orientation: angles must wind once, strictly increasing along the boundary
    auto& bc = m.boundary_corr;
    double total = 0.0, min_gap = INFINITY;
    for (std::size_t k = 0; k < bc.size(); ++k) {
        const double gap = wrap_positive(bc[(k + 1) % bc.size()].theta - bc[k].theta);
        total += gap;
        min_gap = std::min(min_gap, gap);
    }
    if (!(min_gap > 0.0) || std::abs(total - two_pi) > 1e-6) {
        std::ostringstream os;
        os << "zipper_fit: boundary correspondence does not wind once (total " << total << ", min gap " << min_gap << ")";
        throw ValidationError(os.str());
    }
    const auto first = std::min_element(bc.begin(), bc.end(), [](auto& a, auto& b) { return a.theta < b.theta; });
    std::rotate(bc.begin(), first, bc.end());

    CrowdingInfo& cr = m.crowding;
    cr.refits = refits;
    cr.dropped = fit.skipped.size();
    cr.min_dtheta = min_gap;
    cr.min_edge = INFINITY;
    for (std::size_t k = 0; k < W.size(); ++k) cr.min_edge = std::min(cr.min_edge, dist(W[k], W[(k + 1) % W.size()]));
    std::size_t prev = npos;
    for (std::size_t k = 0; k <= W.size(); ++k) {
        const std::size_t s = src[k % W.size()];
        if (s == npos) continue;
        if (prev != npos && s != (prev + 1) % N && k > 0) {
            cr.cuts.emplace_back(prev, s);
            cr.removed += (s + N - prev) % N - 1;
        }
        prev = s;
    }

    m.center_image = eval(m, {0.0, 0.0});
    if (dist(m.center_image, center) > 1e-9 * m.diameter) {
        std::ostringstream os;
        os << "zipper_fit: f(0) misses the center by " << dist(m.center_image, center);
        throw ValidationError(os.str());
    }
    if (opt.validate) {
        m.validation = koebe_check(m, disk_grid(opt.validation_points, opt.validation_rmax), opt.koebe_slack);
        if (!m.validation.pass) {
            std::ostringstream os;
            os << "zipper_fit: Koebe check failed (lower margin " << m.validation.lower_margin << ", upper margin "
               << m.validation.upper_margin << ", outside " << m.validation.outside << ")";
            throw ValidationError(os.str());
        }
    }
    return m;
}

DiskMap corrupted(const DiskMap& map, std::size_t stage) {
    DiskMap m = map;
    if (stage >= m.stages.size()) throw std::invalid_argument("corrupted: stage out of range");
    m.stages.erase(m.stages.begin() + static_cast<std::ptrdiff_t>(stage));
    m.center_image = eval(m, {0.0, 0.0});
    return m;
}

BoundaryMap conformal_boundary_map(const DiskMap& map, CircleMetric metric) {
    std::vector<double> th;
    std::vector<std::size_t> idx;
    for (const auto& b : map.boundary_corr) {
        th.push_back(b.theta);
        idx.push_back(b.vertex);
    }
    BoundaryMap bm = map_from_correspondence(*map.domain_curve, th, idx, MapKind::conformal);
    bm.metric = metric;
    return bm;
}

}  // namespace tqc
