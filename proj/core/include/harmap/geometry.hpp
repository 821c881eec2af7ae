#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace harmap {

/// Failure categories raised across the library. Soft conditions that still
/// produce data (umbilic points) are reported through flags instead.
enum class ErrorCode {
  DegenerateImmersion,
  NormalSpaceAmbiguous,
  UmbilicPoint,
  RankDeficient,
  OutOfDomain,
  BoundaryNode,
  NotConverged,
  InvalidBoundary,
  UndefinedOnPositiveCurvature,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Point in the parameter domain. For annular domains these are the
/// Cartesian coordinates of the point, not its polar ones.
struct ParamPoint {
  double u = 0.0;
  double v = 0.0;
};

/// Second-order jet of a map R^2 -> R^n at one parameter point.
struct Jet2 {
  Eigen::VectorXd value;
  Eigen::VectorXd du;
  Eigen::VectorXd dv;
  Eigen::VectorXd duu;
  Eigen::VectorXd duv;
  Eigen::VectorXd dvv;

  static Jet2 zero(int ambient_dim);
  int ambient_dim() const { return static_cast<int>(value.size()); }
  bool is_finite() const;
};

struct FirstForm {
  double E = 0.0;
  double F = 0.0;
  double G = 0.0;

  double det() const { return E * G - F * F; }
  double area_element() const;
};

/// Vector-valued second fundamental form: normal parts of the second partials.
struct SecondForm {
  Eigen::VectorXd L;
  Eigen::VectorXd M;
  Eigen::VectorXd N;
};

enum class PointClass {
  FlatUmbilic,
  CurvedUmbilic,
  NegativeRegular,
  Ruled,
  PositiveCurvature,
};

inline constexpr int kPointClassCount = 5;

std::string_view to_string(PointClass c);

/// Relative thresholds. Curvature thresholds multiply the case-level curvature
/// scale; `immersion` multiplies max(E, G)^2.
struct GeometryTolerances {
  double immersion = 1e-12;
  double flat = 1e-7;
  double umbilic = 1e-6;
  double parallel = 1e-8;
};

/// Principal curvature data and, once completed by pullback_frame, the domain
/// frame (r, s), stretch factors and angle.
struct CurvatureFrame {
  double kappa1 = 0.0;  // signed, kappa1 >= kappa2
  double kappa2 = 0.0;
  double rho1 = 0.0;  // magnitudes, rho1 >= rho2
  double rho2 = 0.0;
  bool umbilic = false;

  std::optional<Eigen::VectorXd> normal;
  // Directions of kappa1 and kappa2; absent at umbilic points.
  std::optional<Eigen::VectorXd> dir1;
  std::optional<Eigen::VectorXd> dir2;

  std::optional<Eigen::Vector2d> pullback_r;
  std::optional<Eigen::Vector2d> pullback_s;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> theta;
  std::optional<double> sin2theta;

  bool has_directions() const { return dir1.has_value() && dir2.has_value(); }
  bool has_pullback() const { return a.has_value() && b.has_value(); }
};

FirstForm first_form(const Jet2& jet);

/// Throws Error(DegenerateImmersion) when E G - F^2 <= tol * max(E, G)^2.
SecondForm second_form(const Jet2& jet, const GeometryTolerances& tol = {});

/// Eigen-decomposition of the shape operator along the unit normal spanning the
/// first normal space. `scale` is the characteristic curvature magnitude used
/// for the umbilic test.
CurvatureFrame principal_curvatures(const FirstForm& first, const SecondForm& second, const Jet2& jet,
                                    double scale, const GeometryTolerances& tol = {});

double gauss_curvature(const FirstForm& first, const SecondForm& second, const GeometryTolerances& tol = {});

PointClass classify_point(double kappa1, double kappa2, double scale, const GeometryTolerances& tol = {});

/// Completes `frame` with the pullbacks of its principal directions.
/// Throws UmbilicPoint when the directions are undefined and RankDeficient when
/// the differential is singular.
CurvatureFrame pullback_frame(const Jet2& jet, CurvatureFrame frame, const GeometryTolerances& tol = {});

/// At an umbilic point every orthonormal tangent pair is principal. This picks
/// the pair whose pullbacks are orthogonal (right singular vectors of dh), so a
/// and b are the singular values and sin(2 theta) = 1.
CurvatureFrame umbilic_pullback_frame(const Jet2& jet, CurvatureFrame frame, const GeometryTolerances& tol = {});

/// sqrt(rho1/rho2) + sqrt(rho2/rho1) with the flat (0/0 = 1) and ruled
/// (a/0 = inf) conventions. Finite results are never below 2.
double curvature_ratio_factor(double rho1, double rho2, PointClass cls);

/// Convenience: full pointwise frame with the given curvature scale. Pullback
/// fields stay empty at umbilic points.
CurvatureFrame evaluate_frame(const Jet2& jet, double scale, const GeometryTolerances& tol = {});

}  // namespace harmap
