#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tqc/curves.hpp"
#include "tqc/subdivision.hpp"

namespace tqc {

enum class MapKind { tree, arclength, reparametrized, conformal };
enum class CircleMetric { chordal, arclength };

std::string map_kind_name(MapKind k);
std::string metric_name(CircleMetric m);
CircleMetric parse_metric(const std::string& s);

struct MapSample {
    double theta = 0.0;
    Point p;
    double s = 0.0;  // arclength position on the source polyline, nondecreasing and below s_0 + perimeter
};

struct BoundaryMap {
    std::vector<MapSample> samples;
    std::shared_ptr<const ClosedCurve> source;
    std::shared_ptr<const std::vector<double>> cum;  // cumulative arclength of source
    MapKind kind = MapKind::arclength;
    CircleMetric metric = CircleMetric::chordal;

    std::size_t size() const { return samples.size(); }
};

// circle distance between angles under the chosen metric; arclength is normalized by 2pi
double circle_distance(double a, double b, CircleMetric m);

BoundaryMap build_boundary_map(const SubarcTree& tree, std::size_t min_interior = 4);
BoundaryMap arclength_param(const ClosedCurve& curve, std::size_t n);
// samples (thetas[k], curve vertex idx[k]) in strictly increasing theta order
BoundaryMap map_from_correspondence(const ClosedCurve& curve, const std::vector<double>& thetas,
                                    const std::vector<std::size_t>& idx, MapKind kind);

// piecewise-linear increasing homeomorphism of [0, 2pi] given by knots
struct CircleHomeo {
    std::vector<double> x, y;

    static CircleHomeo identity();
    static CircleHomeo from_knots(std::vector<double> x, std::vector<double> y);
    double operator()(double theta) const;
    CircleHomeo inverse() const;
};

BoundaryMap reparametrize(const BoundaryMap& map, const CircleHomeo& h);
Point eval_map(const BoundaryMap& map, double theta);

// image under a planar similarity z -> scale * e^{i rot} z + shift, curve included
BoundaryMap transformed(const BoundaryMap& map, double scale, double rot, Point shift);

}  // namespace tqc
