#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tqc/curves.hpp"

namespace tqc {

// h(alpha) = 4 (alpha sqrt2 + 1)^2, the planar covering count
double h_of(double alpha);

struct SubdivisionConstants {
    double C = 1.0;
    double t = 1.0;
    double eps = 0.5;
    double alpha = 0.0;    // (4C/eps)^(1/t)
    double h_alpha = 0.0;  // h(alpha)
    double p = 0.0;        // ceil(h_alpha), exact integer while below 2^53
    double log2_delta = 0.0;
    double delta = 0.0;  // 2^(-p-1) eps, zero once it underflows
};

SubdivisionConstants theoretical_constants(double C, double t, double eps);

struct TreeConstants {
    std::uint64_t p = 0;
    double log2_mu = 0.0;
    std::uint64_t m = 0;
    std::uint64_t n = 0;
    bool N_exact = false;
    std::uint64_t N = 0;  // valid when N_exact
    double log2_N = 0.0;
    double log2_c = 0.0;
    double log2_R = 0.0;
    bool two_pow_n_ge_mu_pow_m = false;
    bool four_n_plus_3_le_p_pow_m = false;
};

TreeConstants tree_constants(std::uint64_t p, double C);

std::vector<ArcSpan> greedy_subdivide(const ClosedCurve& curve, double eps, std::size_t start);
std::vector<ArcSpan> equalize_count(const ClosedCurve& curve, std::vector<ArcSpan> pieces, std::size_t p);

// split index maximizing the smaller side's diameter for the positive span s..s+m
std::size_t balancing_split(const ClosedCurve& curve, std::size_t s, std::size_t m, std::size_t min_edges = 1);

struct SubarcTree {
    const ClosedCurve* curve = nullptr;
    std::size_t branching = 0;
    std::size_t depth = 0;
    // levels[l] holds branching^l spans in word order; levels[0] is the root loop
    std::vector<std::vector<ArcSpan>> levels;

    std::vector<int> word(std::size_t level, std::size_t index) const;
    std::size_t edges(const ArcSpan& s) const;
};

SubarcTree build_tree(const ClosedCurve& curve, std::size_t branching, std::size_t depth);

struct TreeVerification {
    double prop3_ratio = 0.0;
    std::size_t prop3_level = 0, prop3_index = 0;
    double prop4_ratio = 0.0;
    std::size_t prop4_level = 0, prop4_index = 0;
    double prop3_threshold = INFINITY;
    double prop4_threshold = INFINITY;
    bool prop3_pass = true;
    bool prop4_pass = true;
    bool partition_ok = true;
};

TreeVerification verify_tree(const SubarcTree& tree, double prop3_threshold = INFINITY, double prop4_threshold = INFINITY);

}  // namespace tqc
