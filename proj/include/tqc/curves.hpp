#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tqc/geometry.hpp"

namespace tqc {

enum class Orientation { ccw, cw };
enum class Direction { positive, negative };

class ClosedCurve {
public:
    ClosedCurve() = default;
    // validates: n >= 3, finite, no repeated consecutive vertices, nonzero area,
    // simple (sweep) unless check_simple is false
    explicit ClosedCurve(std::vector<Point> vertices, bool check_simple = true);

    const std::vector<Point>& vertices() const { return v_; }
    std::size_t size() const { return v_.size(); }
    const Point& operator[](std::size_t i) const { return v_[i]; }
    // cyclic access
    const Point& at(std::ptrdiff_t i) const;

    Orientation orientation() const { return orient_; }
    double signed_area() const { return area_; }
    double perimeter() const;

private:
    std::vector<Point> v_;
    Orientation orient_ = Orientation::ccw;
    double area_ = 0.0;
};

// cyclic vertex range; start == end denotes the whole loop
struct ArcSpan {
    std::size_t start = 0;
    std::size_t end = 0;
    Direction direction = Direction::positive;

    // number of vertices traversed, endpoints included (n + 1 for the whole loop)
    std::size_t count(std::size_t n) const;
    // k-th traversed vertex index
    std::size_t vertex(std::size_t k, std::size_t n) const;
    bool full_loop() const { return start == end; }
    friend bool operator==(const ArcSpan&, const ArcSpan&) = default;
};

double signed_area(const std::vector<Point>& v);
bool is_simple(const std::vector<Point>& v);
bool is_simple_bruteforce(const std::vector<Point>& v);

ClosedCurve ensure_ccw(const ClosedCurve& curve);
double curve_diameter(const ClosedCurve& curve);
ArcSpan smaller_subarc(const ClosedCurve& curve, std::size_t i, std::size_t j);
double arc_diameter(const ClosedCurve& curve, const ArcSpan& span);
std::pair<ClosedCurve, double> normalize_unit_diameter(const ClosedCurve& curve);
ClosedCurve resample_arclength(const ClosedCurve& curve, std::size_t n);

ClosedCurve scaled(const ClosedCurve& curve, double s);
// each edge split into `pieces` equal parts; the point set of the polyline is unchanged
ClosedCurve refine_edges(const ClosedCurve& curve, std::size_t pieces);

// exact diameter of a point set (max pairwise distance over the points)
double diameter_of(const std::vector<Point>& pts);

// distance from p to the closed polyline
double polyline_distance(const ClosedCurve& curve, Point p);
bool point_inside(const ClosedCurve& curve, Point p);

// arclength position helpers on the closed polyline, measured from vertex 0
std::vector<double> cumulative_arclength(const ClosedCurve& curve);
Point point_at_arclength(const ClosedCurve& curve, const std::vector<double>& cum, double s);

}  // namespace tqc
