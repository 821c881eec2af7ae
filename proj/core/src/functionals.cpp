#include "harmap/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "harmap/parallel.hpp"

namespace harmap {

std::string_view to_string(MaskReason reason) {
  switch (reason) {
    case MaskReason::None: return "";
    case MaskReason::Boundary: return "boundary";
    case MaskReason::RankDeficient: return "rank_deficient";
    case MaskReason::NormalSpaceAmbiguous: return "normal_space_ambiguous";
    case MaskReason::Flat: return "flat";
    case MaskReason::Umbilic: return "umbilic";
    case MaskReason::SmallAngle: return "small_sin2theta";
  }
  return "";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::ChainHolds: return "ChainHolds";
    case Verdict::ChainViolated: return "ChainViolated";
    case Verdict::Undefined: return "Undefined";
  }
  return "Undefined";
}

ResidualStats residual_stats(std::vector<double> values) {
  ResidualStats st;
  st.count = values.size();
  if (values.empty()) return st;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double x : values) sum += x;
  auto rank = [&values](double q) {
    const auto k = static_cast<std::size_t>(std::ceil(q * values.size()));
    return values[std::clamp<std::size_t>(k, 1, values.size()) - 1];
  };
  st.max = values.back();
  st.mean = sum / values.size();
  st.q50 = rank(0.50);
  st.q90 = rank(0.90);
  st.q99 = rank(0.99);
  return st;
}

double curvature_scale(const JetField& field, const GeometryTolerances& tol) {
  double scale = 0.0;
  for (const auto& s : field.samples) {
    try {
      const FirstForm ff = first_form(s.jet);
      const CurvatureFrame cf = principal_curvatures(ff, second_form(s.jet, tol), s.jet, 1.0, tol);
      scale = std::max(scale, 0.5 * (std::abs(cf.kappa1) + std::abs(cf.kappa2)));
    } catch (const Error&) {
      // degenerate or ambiguous points carry no curvature
    }
  }
  return std::max(scale, 1.0 / field.diameter);
}

namespace {

PointReport evaluate_point(const JetSample& s, double scale, const Thresholds& th) {
  const GeometryTolerances& tol = th.geometry;
  PointReport pr;
  pr.param = s.param;
  pr.weight = s.weight;
  const FirstForm ff = first_form(s.jet);
  pr.energy_density = ff.E + ff.G;
  pr.area_element = ff.area_element();
  auto mask = [&pr](MaskReason r) {
    if (!pr.masked) {
      pr.masked = true;
      pr.mask_reason = r;
    }
  };
  if (s.near_boundary) mask(MaskReason::Boundary);

  CurvatureFrame frame;
  try {
    frame = principal_curvatures(ff, second_form(s.jet, tol), s.jet, scale, tol);
  } catch (const Error& e) {
    mask(e.code() == ErrorCode::NormalSpaceAmbiguous ? MaskReason::NormalSpaceAmbiguous : MaskReason::RankDeficient);
    if (e.code() == ErrorCode::NormalSpaceAmbiguous) pr.factor = std::numeric_limits<double>::quiet_NaN();
    return pr;
  }
  pr.kappa1 = frame.kappa1;
  pr.kappa2 = frame.kappa2;
  const PointClass cls = classify_point(frame.kappa1, frame.kappa2, scale, tol);
  pr.cls = cls;
  pr.factor = curvature_ratio_factor(frame.rho1, frame.rho2, cls);

  if (cls == PointClass::FlatUmbilic) {
    mask(MaskReason::Flat);
    return pr;
  }
  try {
    if (frame.umbilic) {
      mask(MaskReason::Umbilic);
      frame = umbilic_pullback_frame(s.jet, std::move(frame), tol);
    } else {
      frame = pullback_frame(s.jet, std::move(frame), tol);
    }
  } catch (const Error&) {
    mask(MaskReason::RankDeficient);
    return pr;
  }
  pr.a = frame.a;
  pr.b = frame.b;
  pr.sin2theta = frame.sin2theta;
  if (*frame.sin2theta < th.min_sin2theta) mask(MaskReason::SmallAngle);

  // Each stretch pairs with the curvature magnitude of its own direction.
  const double t1 = std::abs(frame.kappa1) * *frame.a * *frame.a;
  const double t2 = std::abs(frame.kappa2) * *frame.b * *frame.b;
  if (t1 + t2 > 0.0) pr.eq9_residual = std::abs(t1 - t2) / (t1 + t2);

  if (std::isfinite(pr.factor) && *frame.sin2theta > 0.0 && pr.energy_density > 0.0) {
    const double rhs = pr.factor * pr.area_element / *frame.sin2theta;
    pr.eq10_residual = std::abs(pr.energy_density - rhs) / std::max(pr.energy_density, rhs);
  }
  return pr;
}

}  // namespace

std::vector<PointReport> point_reports(const JetField& field, const Thresholds& th, int threads) {
  const double scale = curvature_scale(field, th.geometry);
  std::vector<PointReport> out(field.samples.size());
  parallel_for(out.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) out[k] = evaluate_point(field.samples[k], scale, th);
  });
  return out;
}

double dirichlet_energy(const JetField& field) {
  double sum = 0.0;
  for (const auto& s : field.samples) sum += s.weight * (s.jet.du.squaredNorm() + s.jet.dv.squaredNorm());
  return sum;
}

double image_area(const JetField& field) {
  double sum = 0.0;
  for (const auto& s : field.samples) sum += s.weight * first_form(s.jet).area_element();
  return sum;
}

namespace {

double positive_fraction(const std::vector<PointReport>& pts) {
  double total = 0.0, pos = 0.0;
  for (const auto& p : pts) {
    total += p.weight;
    if (p.cls == PointClass::PositiveCurvature) pos += p.weight;
  }
  return total > 0.0 ? pos / total : 0.0;
}

double integrate_functional(const std::vector<PointReport>& pts) {
  double sum = 0.0;
  for (const auto& p : pts) {
    if (std::isnan(p.factor)) continue;
    if (std::isinf(p.factor)) return std::numeric_limits<double>::infinity();
    sum += p.weight * p.factor * p.area_element;
  }
  return sum;
}

}  // namespace

double curvature_functional(const JetField& field, const Thresholds& th) {
  const auto pts = point_reports(field, th);
  if (positive_fraction(pts) > th.max_positive_fraction) {
    throw Error(ErrorCode::UndefinedOnPositiveCurvature, "positive curvature fraction above threshold");
  }
  return integrate_functional(pts);
}

std::vector<std::optional<double>> eq9_residual_field(const JetField& field, const Thresholds& th) {
  const auto pts = point_reports(field, th);
  std::vector<std::optional<double>> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(p.masked ? std::nullopt : p.eq9_residual);
  return out;
}

std::vector<std::optional<double>> eq10_residual_field(const JetField& field, const Thresholds& th) {
  const auto pts = point_reports(field, th);
  std::vector<std::optional<double>> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(p.masked ? std::nullopt : p.eq10_residual);
  return out;
}

VerificationReport assemble_report(const JetField& field, const std::vector<PointReport>& points,
                                   const CaseInfo& info, const Thresholds& th, const VerificationReport* coarser) {
  VerificationReport rep;
  rep.case_info = info;
  rep.resolution = field.resolution;
  rep.curvature_scale = curvature_scale(field, th.geometry);
  rep.point_count = points.size();
  rep.excluded_fraction = field.excluded_fraction;

  double total_w = 0.0, masked_w = 0.0, flat_w = 0.0, boundary_w = 0.0;
  bool ambiguous = false;
  std::vector<double> r9, r10;
  double s2_min = std::numeric_limits<double>::infinity(), s2_sum = 0.0;
  std::size_t s2_count = 0;
  for (const auto& p : points) {
    rep.energy += p.weight * p.energy_density;
    rep.two_area += 2.0 * p.weight * p.area_element;
    total_w += p.weight;
    if (p.cls) {
      ++rep.class_histogram[static_cast<std::size_t>(*p.cls)];
    } else {
      ++rep.undefined_points;
    }
    switch (p.mask_reason) {
      case MaskReason::None: break;
      case MaskReason::Flat: flat_w += p.weight; break;
      case MaskReason::Boundary: boundary_w += p.weight; break;
      case MaskReason::NormalSpaceAmbiguous: ambiguous = true; [[fallthrough]];
      default: masked_w += p.weight; break;
    }
    if (p.eq9_residual) {
      rep.eq9_residual_max_all = std::max(rep.eq9_residual_max_all.value_or(0.0), *p.eq9_residual);
    }
    if (p.eq10_residual) {
      rep.eq10_residual_max_all = std::max(rep.eq10_residual_max_all.value_or(0.0), *p.eq10_residual);
    }
    if (!p.masked) {
      if (p.eq9_residual) r9.push_back(*p.eq9_residual);
      if (p.eq10_residual) r10.push_back(*p.eq10_residual);
      if (p.sin2theta) {
        s2_min = std::min(s2_min, *p.sin2theta);
        s2_sum += *p.sin2theta;
        ++s2_count;
      }
    }
  }
  rep.functional_F = integrate_functional(points);
  if (total_w > 0.0) {
    rep.masked_fraction = masked_w / total_w;
    rep.flat_fraction = flat_w / total_w;
    rep.boundary_fraction = boundary_w / total_w;
  }
  rep.positive_curvature_fraction = positive_fraction(points);
  if (!r9.empty()) rep.eq9_residual_stats = residual_stats(std::move(r9));
  if (!r10.empty()) rep.eq10_residual_stats = residual_stats(std::move(r10));
  if (s2_count > 0) {
    rep.sin2theta_min = s2_min;
    rep.sin2theta_mean = s2_sum / s2_count;
  }

  const bool finite_F = std::isfinite(rep.functional_F);
  if (finite_F) {
    rep.left_margin = rep.energy - rep.functional_F;
    rep.right_margin = rep.functional_F - rep.two_area;
  }

  rep.err_est = th.roundoff * std::abs(rep.energy);
  if (coarser && coarser->resolution > 0 && coarser->resolution < rep.resolution) {
    const double k = static_cast<double>(rep.resolution) / coarser->resolution;
    const double denom = k * k - 1.0;
    Extrapolated ex;
    ex.coarse_resolution = coarser->resolution;
    ex.energy = rep.energy + (rep.energy - coarser->energy) / denom;
    ex.two_area = rep.two_area + (rep.two_area - coarser->two_area) / denom;
    ex.functional_F = std::numeric_limits<double>::infinity();
    if (finite_F && std::isfinite(coarser->functional_F)) {
      ex.functional_F = rep.functional_F + (rep.functional_F - coarser->functional_F) / denom;
      const double err_left = std::abs(*rep.left_margin - (coarser->energy - coarser->functional_F)) / denom;
      const double err_right = std::abs(*rep.right_margin - (coarser->functional_F - coarser->two_area)) / denom;
      rep.err_est = std::max({rep.err_est, err_left, err_right});
    }
    rep.richardson = ex;
  }

  if (ambiguous) {
    rep.verdict = Verdict::Undefined;
    rep.verdict_reason = "normal space ambiguous";
  } else if (!finite_F) {
    rep.verdict = Verdict::Undefined;
    rep.verdict_reason = "ruled locus";
  } else if (rep.positive_curvature_fraction > th.max_positive_fraction) {
    rep.verdict = Verdict::Undefined;
    rep.verdict_reason = "positive curvature locus";
  } else if (rep.masked_fraction >= th.max_masked_fraction) {
    rep.verdict = Verdict::Undefined;
    rep.verdict_reason = "masked fraction above limit";
  } else if (*rep.left_margin < -rep.err_est || *rep.right_margin < -rep.err_est) {
    rep.verdict = Verdict::ChainViolated;
    rep.verdict_reason = *rep.left_margin < -rep.err_est ? "energy below curvature functional"
                                                         : "curvature functional below twice the area";
  } else {
    rep.verdict = Verdict::ChainHolds;
  }
  return rep;
}

VerificationReport verify_theorem1(const JetField& field, const CaseInfo& info, const Thresholds& th,
                                   const VerificationReport* coarser, int threads) {
  return assemble_report(field, point_reports(field, th, threads), info, th, coarser);
}

}  // namespace harmap
