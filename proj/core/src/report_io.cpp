#include "harmap/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "json_report.hpp"

namespace harmap {

namespace detail {

using nlohmann::ordered_json;

ordered_json number_or_inf(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return nullptr;
  return x;
}

namespace {

template <class T>
ordered_json opt(const std::optional<T>& x) {
  if (!x) return nullptr;
  return number_or_inf(static_cast<double>(*x));
}

ordered_json stats(const std::optional<ResidualStats>& s) {
  if (!s) return nullptr;
  return ordered_json{{"count", s->count}, {"max", s->max}, {"mean", s->mean},
                      {"q50", s->q50},     {"q90", s->q90}, {"q99", s->q99}};
}

}  // namespace

ordered_json to_json(const VerificationReport& r) {
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : r.case_info.params) params[k] = v;
  ordered_json hist = ordered_json::object();
  for (int c = 0; c < kPointClassCount; ++c) {
    hist[std::string(to_string(static_cast<PointClass>(c)))] = r.class_histogram[c];
  }
  hist["Undefined"] = r.undefined_points;
  ordered_json rich = nullptr;
  if (r.richardson) {
    rich = ordered_json{{"coarse_resolution", r.richardson->coarse_resolution},
                        {"energy", r.richardson->energy},
                        {"functional_F", number_or_inf(r.richardson->functional_F)},
                        {"two_area", r.richardson->two_area}};
  }
  return ordered_json{
      {"case", {{"name", r.case_info.name}, {"source", r.case_info.source}, {"params", params},
                {"asserted_harmonic", r.case_info.asserted_harmonic}}},
      {"resolution", r.resolution},
      {"point_count", r.point_count},
      {"curvature_scale", r.curvature_scale},
      {"energy", r.energy},
      {"functional_F", number_or_inf(r.functional_F)},
      {"two_area", r.two_area},
      {"left_margin", opt(r.left_margin)},
      {"right_margin", opt(r.right_margin)},
      {"err_est", r.err_est},
      {"richardson", rich},
      {"eq9_residual_stats", stats(r.eq9_residual_stats)},
      {"eq10_residual_stats", stats(r.eq10_residual_stats)},
      {"eq9_residual_max_all", opt(r.eq9_residual_max_all)},
      {"eq10_residual_max_all", opt(r.eq10_residual_max_all)},
      {"sin2theta_min", opt(r.sin2theta_min)},
      {"sin2theta_mean", opt(r.sin2theta_mean)},
      {"class_histogram", hist},
      {"masked_fraction", r.masked_fraction},
      {"flat_fraction", r.flat_fraction},
      {"boundary_fraction", r.boundary_fraction},
      {"excluded_fraction", r.excluded_fraction},
      {"positive_curvature_fraction", r.positive_curvature_fraction},
      {"verdict", {{"status", std::string(to_string(r.verdict))}, {"reason", r.verdict_reason}}},
  };
}

}  // namespace detail

std::string report_json(const VerificationReport& report) { return detail::to_json(report).dump(2); }

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_fields_csv(std::ostream& os, const std::vector<PointReport>& points) {
  auto opt = [](const std::optional<double>& x) { return x ? format_number(*x) : std::string(); };
  os << kFieldsCsvHeader << '\n';
  for (const auto& p : points) {
    os << format_number(p.param.u) << ',' << format_number(p.param.v) << ','
       << (p.cls ? std::string(to_string(*p.cls)) : std::string()) << ',' << format_number(p.energy_density) << ','
       << format_number(p.area_element) << ',' << (std::isnan(p.factor) ? std::string() : format_number(p.factor))
       << ',' << opt(p.sin2theta) << ',' << opt(p.a) << ',' << opt(p.b) << ',' << opt(p.eq9_residual) << ','
       << opt(p.eq10_residual) << ',' << (p.masked ? 1 : 0) << ',' << to_string(p.mask_reason) << '\n';
  }
}

}  // namespace harmap
