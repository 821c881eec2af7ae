#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "harmap/functionals.hpp"

namespace harmap {

inline constexpr int kReportSchemaVersion = 1;

/// Column order of the pointwise CSV dump.
inline constexpr const char* kFieldsCsvHeader =
    "u,v,class,energy_density,area_element,factor,sin2theta,a,b,eq9_residual,eq10_residual,masked,mask_reason";

/// One VerificationReport as a JSON object (pretty-printed, stable key order).
std::string report_json(const VerificationReport& report);

/// Pointwise dump: absent values are empty cells, +inf is written as "inf".
void write_fields_csv(std::ostream& os, const std::vector<PointReport>& points);

/// %.17g formatting shared by every CSV writer.
std::string format_number(double x);

}  // namespace harmap
