#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tqc/curves.hpp"

namespace tqc {

struct TurningReport {
    double t = 1.0;
    double C_star = 0.0;
    std::size_t witness_i = 0;
    std::size_t witness_j = 0;
    std::uint64_t pair_count = 0;
    std::optional<double> fit_t;
    std::optional<double> fit_C;
    std::optional<double> residual;
    std::string strategy;
};

// entry m: diameter of vertices i, i+1, ..., i+m (m = 0 .. n-1); backward walks i, i-1, ...
std::vector<double> prefix_diameters(const ClosedCurve& curve, std::size_t i);
std::vector<double> prefix_diameters_backward(const ClosedCurve& curve, std::size_t i);

struct TurningOptions {
    std::size_t exact_limit = 4096;
    std::size_t sampled_anchors = 256;
    std::uint64_t seed = 1;
};

TurningReport turning_constant(const ClosedCurve& curve, double t, const TurningOptions& opt = {});
// reference implementation: one prefix scan per anchor, serial
TurningReport turning_constant_serial(const ClosedCurve& curve, double t);

struct PairFilter {
    enum class Kind { all, straddle } kind = Kind::all;
    std::size_t center = 0;
    double max_chord = INFINITY;
};

TurningReport exponent_fit(const ClosedCurve& curve, const PairFilter& filter = {});

}  // namespace tqc
