#pragma once

#include <cstdint>
#include <string>

#include "tqc/curves.hpp"

namespace tqc {

enum class CurveKind { circle, ellipse, koch, cusp, perturbed };

struct CurveSpec {
    CurveKind kind = CurveKind::circle;
    std::size_t n = 512;
    double a = 1.0;  // circle radius / ellipse semi-axis x
    double b = 1.0;  // ellipse semi-axis y
    int level = 3;   // koch
    double s = 2.0;  // cusp order
    std::uint64_t seed = 1;
    double amplitude = 0.05;
};

CurveKind parse_kind(const std::string& name);
std::string kind_name(CurveKind k);

// koch ignores n: the vertex count is 3 * 4^level
ClosedCurve generate(const CurveSpec& spec);

// index of the cusp tip in a generated cusp curve
inline constexpr std::size_t cusp_tip_index = 0;

// resampling graded geometrically toward focus; output vertex 0 is the focus
ClosedCurve adaptive_cusp_sampling(const ClosedCurve& curve, Point focus, double ratio);

}  // namespace tqc
