#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tqc/curves.hpp"
#include "tqc/geometry.hpp"
#include "tqc/parametrize.hpp"
#include "tqc/qsmod.hpp"

namespace tqc {

// one slit stage: Moebius w -> w / (1 - w invb), then sqrt(w^2 + c^2) / c
struct ZipperStage {
    double invb = 0.0;
    double c = 1.0;
};

struct BoundaryCorr {
    double theta = 0.0;
    Point p;
    std::size_t vertex = 0;  // index into domain_curve
};

struct CrowdingInfo {
    // (first kept vertex before the cut, first kept vertex after), source indices
    std::vector<std::pair<std::size_t, std::size_t>> cuts;
    std::size_t removed = 0;  // source vertices removed by cuts
    std::size_t dropped = 0;  // vertices skipped by the final fit
    std::size_t refits = 0;
    double min_dtheta = 0.0;
    double min_edge = 0.0;
};

struct KoebeReport {
    bool pass = false;
    double slack = 1.05;
    std::size_t points = 0;
    std::size_t outside = 0;   // images not inside the domain curve
    double lower_margin = 0.0;  // min d_f / (1/4 (1-|z|^2)|f'|)
    double upper_margin = 0.0;  // min (1-|z|^2)|f'| / d_f
    Point lower_witness, upper_witness;
};

struct DiskMap {
    cplx z0, z1;  // first edge of the zipped polygon
    std::vector<ZipperStage> stages;
    bool zeta0_infinite = true;
    double zeta0 = 0.0;
    int sign = 1;
    cplx wc;  // center image in the upper half plane
    double rotation = 0.0;
    Point center;         // requested f(0)
    Point center_image;   // evaluated f(0)
    std::vector<BoundaryCorr> boundary_corr;  // thetas strictly increasing in [0, 2pi)
    std::shared_ptr<const ClosedCurve> domain_curve;
    std::shared_ptr<const ClosedCurve> source_curve;
    std::vector<std::size_t> source_index;  // domain vertex -> source vertex, npos for cut points
    CrowdingInfo crowding;
    KoebeReport validation;
    double diameter = 1.0;
};

struct ZipperOptions {
    std::optional<Point> center_hint;
    double crowding_tol = 1e-8;  // minimal boundary angle gap accepted per vertex
    std::size_t max_refits = 40;
    std::size_t validation_points = 50;
    double validation_rmax = 0.95;
    double koebe_slack = 1.05;
    bool validate = true;
};

DiskMap zipper_fit(const ClosedCurve& curve, const ZipperOptions& opt = {});

// disk -> domain; points with |z| > 1 - 1e-9 are evaluated radially at 1 - 1e-9
Point eval(const DiskMap& map, Point z);
// value and derivative through the stage composition
std::pair<cplx, cplx> eval_with_derivative(const DiskMap& map, cplx z);
// domain -> disk
cplx to_disk(const DiskMap& map, cplx w);

// central differences with h = 1e-4 (1 - |z|), one Richardson step
double deriv_abs(const DiskMap& map, Point z);
// five-point stencil at the same step
double deriv_abs_4pt(const DiskMap& map, Point z);
double dist_to_boundary(const DiskMap& map, Point z);

// interior point maximizing distance to the curve over refined grids
Point deepest_point(const ClosedCurve& curve);

// deterministic sunflower grid in |z| <= rmax
std::vector<Point> disk_grid(std::size_t count, double rmax);

KoebeReport koebe_check(const DiskMap& map, const std::vector<Point>& grid, double slack = 1.05);

// copy with one stage removed; a negative control for the checks
DiskMap corrupted(const DiskMap& map, std::size_t stage);

BoundaryMap conformal_boundary_map(const DiskMap& map, CircleMetric metric = CircleMetric::chordal);

// ---- disk geometry ----

double hyperbolic_distance(Point z, Point w);
double geodesic_nearest_delta(double r);

struct AngleArc {
    double lo = 0.0;
    double hi = 0.0;  // lo <= hi, hi - lo <= 2pi
};

double harmonic_measure(Point z, const std::vector<AngleArc>& arcs);

struct SectorGeometry {
    Point z;
    double r = 0.0;
    double u = 1.0;  // 1 - r, kept exact for arcs shorter than double resolution of r
    double alpha = 0.0;
    AngleArc I_arc;
    std::vector<AngleArc> A_arcs;
};

SectorGeometry sector_geometry(double r, double alpha);
SectorGeometry arc_to_center(double a, double x);

std::vector<Point> geodesic_between(Point z1, Point z2, std::size_t samples);

struct DerivRatioReport {
    Point z1, z2;
    double log_ratio = 0.0;  // log |f'(z1)| / |f'(z2)|
    double lambda = 0.0;
    double integrated_bound = 0.0;
    bool integrated_pass = false;
    bool prop33_pass = false;      // |log ratio| <= 3 lambda
    bool prop33_rho_pass = false;  // |log ratio| <= 6 lambda
};

// requires |z1| <= |z2| <= 1 - 1e-4
DerivRatioReport derivative_ratio_check(const DiskMap& map, Point z1, Point z2, double slack = 1.05);

struct DerivRatioSummary {
    std::size_t pairs = 0;
    std::size_t integrated_fail = 0;
    std::size_t prop33_fail = 0;
    std::size_t prop33_rho_fail = 0;
    double worst_integrated = -INFINITY;  // max log_ratio - bound
    double worst_prop33 = -INFINITY;      // max |log_ratio| / lambda
    DerivRatioReport integrated_witness, prop33_witness;
};

// seeded pairs with radii drawn on [0, rmax]
DerivRatioSummary derivative_ratio_scan(const DiskMap& map, std::size_t pairs, double rmax, std::uint64_t seed,
                                        double slack = 1.05);

// ---- lemma constants ----

struct Witnessed {
    double value = 0.0;
    Point z;
};

struct ConformalConstantsReport {
    double t = 1.0;
    std::string grid;
    std::size_t grid_points = 0;
    Witnessed N3_hat, M_hat, N_hat, N2_hat, gh_len_ratio, gh_diam_ratio;
    double c_center = 0.0;
};

// radii geometric in 1 - r on [0.5, 0.999] times a full angle sweep
std::vector<Point> lemma_grid(std::size_t radii, std::size_t angles);

ConformalConstantsReport lemma_constants_report(const DiskMap& map, double t, const std::vector<Point>& grid,
                                                std::size_t pairs = 64, std::uint64_t seed = 1);

struct Thm47Report {
    double t = 1.0;
    double exponent = 1.0;  // t^2
    double M_hat = 0.0, N_hat = 0.0;
    std::size_t triples = 0;
    double worst_log_slack = -INFINITY;  // max log ratio - log eta(k)
    std::size_t a = 0, b = 0, x = 0;
    double witness_k = 0.0;
    bool ratios_pass = false;
    std::size_t chord_arc_pairs = 0;
    std::size_t chord_arc_fail = 0;
    bool chord_arc_pass = false;
    QsReport rho;
    EtaFit eta;
    bool pass = false;
};

double log_eta_hat(double k, double t, double M_hat, double N_hat);

Thm47Report thm47_verify(const DiskMap& map, double t, std::size_t triple_budget,
                         const std::optional<ConformalConstantsReport>& constants, std::uint64_t seed = 1);

}  // namespace tqc
