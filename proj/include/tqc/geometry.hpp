#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tqc {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct Point {
    double x = 0.0;
    double y = 0.0;

    constexpr Point() = default;
    constexpr Point(double x_, double y_) : x(x_), y(y_) {}
    explicit Point(cplx z) : x(z.real()), y(z.imag()) {}

    cplx c() const { return {x, y}; }

    friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend constexpr Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

// squared distance; every distance in the library goes through these two so that
// fast kernels and brute-force scans agree bit for bit
inline double dist2(Point a, Point b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}
inline double dist(Point a, Point b) { return std::sqrt(dist2(a, b)); }

inline bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

double point_segment_dist(Point p, Point a, Point b);

// error raised when a computed object fails its own validation (exit code 2 in the cli)
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// wrap to (-pi, pi]
inline double wrap_angle(double a) {
    a = std::remainder(a, two_pi);
    if (a <= -pi) a += two_pi;
    return a;
}

// wrap to [0, 2pi)
inline double wrap_positive(double a) {
    a = std::fmod(a, two_pi);
    if (a < 0) a += two_pi;
    if (a >= two_pi) a -= two_pi;
    return a;
}

}  // namespace tqc
