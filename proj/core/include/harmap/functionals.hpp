#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "harmap/families.hpp"
#include "harmap/field.hpp"
#include "harmap/geometry.hpp"

namespace harmap {

struct Thresholds {
  GeometryTolerances geometry;
  double min_sin2theta = 1e-3;
  double max_masked_fraction = 0.05;
  double max_positive_fraction = 1e-3;
  double roundoff = 1e-10;  // relative floor on err_est, times the energy
};

enum class MaskReason {
  None,
  Boundary,
  RankDeficient,
  NormalSpaceAmbiguous,
  Flat,
  Umbilic,
  SmallAngle,
};

std::string_view to_string(MaskReason reason);

struct PointReport {
  ParamPoint param;
  double weight = 0.0;
  std::optional<PointClass> cls;  // empty where curvature is undefined
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double energy_density = 0.0;
  double area_element = 0.0;
  double factor = 2.0;
  std::optional<double> sin2theta;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> eq9_residual;
  std::optional<double> eq10_residual;
  bool masked = false;
  MaskReason mask_reason = MaskReason::None;
};

struct ResidualStats {
  std::size_t count = 0;
  double max = 0.0;
  double mean = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
};

/// Nearest-rank statistics; count == 0 for an empty input.
ResidualStats residual_stats(std::vector<double> values);

enum class Verdict { ChainHolds, ChainViolated, Undefined };

std::string_view to_string(Verdict v);

struct CaseInfo {
  std::string name;
  ParamMap params;
  std::string source = "analytic";  // "analytic" or "solver"
  bool asserted_harmonic = true;
};

struct Extrapolated {
  double energy = 0.0;
  double functional_F = 0.0;
  double two_area = 0.0;
  int coarse_resolution = 0;
};

struct VerificationReport {
  CaseInfo case_info;
  int resolution = 0;
  double curvature_scale = 0.0;

  double energy = 0.0;
  double functional_F = 0.0;  // +inf on a ruled locus
  double two_area = 0.0;
  std::optional<double> left_margin;   // energy - F
  std::optional<double> right_margin;  // F - 2 area
  double err_est = 0.0;
  std::optional<Extrapolated> richardson;

  std::optional<ResidualStats> eq9_residual_stats;
  std::optional<ResidualStats> eq10_residual_stats;
  // Maxima over every point where a residual is computable, masked or not.
  std::optional<double> eq9_residual_max_all;
  std::optional<double> eq10_residual_max_all;
  std::optional<double> sin2theta_min;
  std::optional<double> sin2theta_mean;

  std::array<std::size_t, kPointClassCount> class_histogram{};
  std::size_t undefined_points = 0;
  std::size_t point_count = 0;
  double masked_fraction = 0.0;
  double flat_fraction = 0.0;
  double boundary_fraction = 0.0;
  double excluded_fraction = 0.0;
  double positive_curvature_fraction = 0.0;

  Verdict verdict = Verdict::Undefined;
  std::string verdict_reason;
};

/// max over samples of (|kappa1| + |kappa2|)/2, floored at 1/diameter.
double curvature_scale(const JetField& field, const GeometryTolerances& tol = {});

/// Pointwise integrands, frames, residuals and masks. Evaluation is split over
/// `threads` workers writing disjoint slots, so results do not depend on it.
std::vector<PointReport> point_reports(const JetField& field, const Thresholds& th = {}, int threads = 1);

double dirichlet_energy(const JetField& field);
double image_area(const JetField& field);

/// Quadrature of factor * area element. +inf if any ruled point contributes.
/// Throws Error(UndefinedOnPositiveCurvature) when the positive-curvature
/// fraction exceeds th.max_positive_fraction.
double curvature_functional(const JetField& field, const Thresholds& th = {});

std::vector<std::optional<double>> eq9_residual_field(const JetField& field, const Thresholds& th = {});
std::vector<std::optional<double>> eq10_residual_field(const JetField& field, const Thresholds& th = {});

/// Assembles the chain report. `coarser`, when given, is the report of the same
/// case at a lower resolution and supplies the Richardson error estimate.
VerificationReport verify_theorem1(const JetField& field, const CaseInfo& info, const Thresholds& th = {},
                                   const VerificationReport* coarser = nullptr, int threads = 1);

/// Same as verify_theorem1 but reuses precomputed point reports.
VerificationReport assemble_report(const JetField& field, const std::vector<PointReport>& points,
                                   const CaseInfo& info, const Thresholds& th,
                                   const VerificationReport* coarser = nullptr);

}  // namespace harmap
