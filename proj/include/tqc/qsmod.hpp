#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tqc/parametrize.hpp"

namespace tqc {

struct Triple {
    std::size_t a = 0, b = 0, x = 0;
    friend bool operator==(const Triple&, const Triple&) = default;
};

// lexicographic order on (a, b, x)
bool triple_less(const Triple& p, const Triple& q);

struct QsBin {
    double k_lo = 0.0, k_hi = 0.0;
    double max_ratio = 0.0;
    Triple witness;
    std::uint64_t count = 0;
};

struct QsReport {
    double exponent = 1.0;
    CircleMetric metric = CircleMetric::chordal;
    double weak_R = 0.0;
    Triple witness;
    std::vector<QsBin> bins;
    std::uint64_t triples_scanned = 0;
    std::uint64_t excluded_denominators = 0;
    std::string strategy;
};

struct QsOptions {
    std::size_t exact_limit = 8192;  // beyond this only a sample of x indices is scanned
    std::size_t sampled_x = 512;
    std::uint64_t seed = 1;
};

inline constexpr double min_denominator = 1e-14;

// k = |a-x| / |b-x|, shrunk by one part in 1e12 so that equidistant samples whose
// distances differ only by rounding count as ties
inline double k_ratio(double da, double db) { return da / db * (1.0 - 1e-12); }

// |f(a) - f(x)| / |f(b) - f(x)|^exponent
double triple_ratio(const BoundaryMap& map, const Triple& w, double exponent);
double domain_distance(const BoundaryMap& map, std::size_t i, std::size_t j);

QsReport weak_qs_constant(const BoundaryMap& map, double exponent, const QsOptions& opt = {});
// reference: literal triple loop, serial
QsReport weak_qs_constant_serial(const BoundaryMap& map, double exponent);

QsReport qs_modulus(const BoundaryMap& map, double exponent, std::size_t bins, double k_max, const QsOptions& opt = {});

struct EtaFit {
    double A = 0.0, B = 0.0;
    double A_raw = 0.0;
    double max_residual = 0.0;
    double rms = 0.0;
    std::size_t bins_used = 0;
    bool pass = false;
};

EtaFit eta_shape_fit(const QsReport& report);

struct MConditionReport {
    double value = 0.0;
    Triple witness;
    std::uint64_t admissible = 0;
    double tol = 1e-3;
};

MConditionReport m_condition(const BoundaryMap& map, double t, double tol = 1e-3);

struct HolderReport {
    double K1 = 0.0, K2 = 0.0;
    double t = 1.0;
    double implied_weak_R = 0.0;
    std::size_t k1_i = 0, k1_j = 0, k2_i = 0, k2_j = 0;
};

HolderReport holder_constants(const BoundaryMap& map, double t);

// psi(k)^t = [log(1/k)/log 256 - 1]^{-1} sqrt2 R (2R)^{1/t}, infinite at k = 1/256
double psi_pow_t(double k, double R, double t);

struct PsiReport {
    double t = 1.0, R = 1.0;
    double worst_slack = 0.0;  // max of m^t / psi(k)^t; at most 1 means the bound holds
    Triple witness;
    double witness_k = 0.0;
    double witness_m = 0.0;
    std::uint64_t triples = 0;
    bool pass = false;
};

PsiReport psi_bound_check(const BoundaryMap& map, double t, double R, std::size_t near = 16);

}  // namespace tqc
