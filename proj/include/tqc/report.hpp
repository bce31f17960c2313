#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "tqc/conformal.hpp"
#include "tqc/curves.hpp"
#include "tqc/parametrize.hpp"
#include "tqc/qsmod.hpp"
#include "tqc/subdivision.hpp"
#include "tqc/turning.hpp"

namespace tqc {

using json = nlohmann::json;

inline constexpr const char* tool_version = "1.0.0";

// 64-bit FNV-1a, as 16 lowercase hex digits
std::string fnv1a64_hex(const std::string& bytes);

// non-finite values become the strings "inf", "-inf", "nan"
json num(double v);
double num_from(const json& j, const std::string& field);

json point_json(Point p);

json curve_to_json(const ClosedCurve& c);
// throws std::invalid_argument naming the offending field
ClosedCurve curve_from_json(const json& j);

json to_json(const TurningReport& r);
json to_json(const SubdivisionConstants& c);
json to_json(const TreeConstants& c);
json to_json(const SubarcTree& t);
json to_json(const TreeVerification& v);
json to_json(const BoundaryMap& m);
json to_json(const QsReport& r);
json to_json(const EtaFit& f);
json to_json(const MConditionReport& r);
json to_json(const HolderReport& r);
json to_json(const PsiReport& r);
json to_json(const CrowdingInfo& c);
json to_json(const KoebeReport& r);
json to_json(const DiskMap& m);
json to_json(const DerivRatioReport& r);
json to_json(const DerivRatioSummary& s);
json to_json(const ConformalConstantsReport& r);
json to_json(const Thm47Report& r);

// pieces as {"start", "end", "direction", "diameter"}
json spans_json(const ClosedCurve& c, const std::vector<ArcSpan>& spans);

// "k_lo,k_hi,max_ratio,count" rows
std::string qs_csv(const QsReport& r);

// domain outline with images of radial and circular grid lines
std::string disk_map_svg(const DiskMap& m, std::size_t rings = 8, std::size_t rays = 16);

// keys sorted, two-space indent, trailing newline
std::string dump(const json& j);

}  // namespace tqc
