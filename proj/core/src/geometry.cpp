#include "harmap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace harmap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateImmersion: return "DegenerateImmersion";
    case ErrorCode::NormalSpaceAmbiguous: return "NormalSpaceAmbiguous";
    case ErrorCode::UmbilicPoint: return "UmbilicPoint";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::BoundaryNode: return "BoundaryNode";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::InvalidBoundary: return "InvalidBoundary";
    case ErrorCode::UndefinedOnPositiveCurvature: return "UndefinedOnPositiveCurvature";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::string_view to_string(PointClass c) {
  switch (c) {
    case PointClass::FlatUmbilic: return "FlatUmbilic";
    case PointClass::CurvedUmbilic: return "CurvedUmbilic";
    case PointClass::NegativeRegular: return "NegativeRegular";
    case PointClass::Ruled: return "Ruled";
    case PointClass::PositiveCurvature: return "PositiveCurvature";
  }
  return "Unknown";
}

Jet2 Jet2::zero(int ambient_dim) {
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(ambient_dim);
  return Jet2{z, z, z, z, z, z};
}

bool Jet2::is_finite() const {
  return value.allFinite() && du.allFinite() && dv.allFinite() && duu.allFinite() && duv.allFinite() &&
         dvv.allFinite();
}

double FirstForm::area_element() const { return std::sqrt(std::max(0.0, det())); }

namespace {

// Orthonormal basis (e1, e2) of the tangent plane with [du dv] = [e1 e2] T,
// T upper triangular.
struct TangentBasis {
  Eigen::VectorXd e1;
  Eigen::VectorXd e2;
  Eigen::Matrix2d T;
};

bool is_degenerate(const FirstForm& ff, const GeometryTolerances& tol) {
  const double s = std::max(ff.E, ff.G);
  return !(s > 0.0) || ff.det() <= tol.immersion * s * s;
}

TangentBasis tangent_basis(const Jet2& jet) {
  TangentBasis tb;
  const double nu = jet.du.norm();
  tb.e1 = jet.du / nu;
  const double proj = jet.dv.dot(tb.e1);
  Eigen::VectorXd w = jet.dv - proj * tb.e1;
  w -= w.dot(tb.e1) * tb.e1;
  const double nw = w.norm();
  tb.e2 = w / nw;
  tb.T << nu, proj, 0.0, nw;
  return tb;
}

Eigen::VectorXd normal_part(const Eigen::VectorXd& x, const TangentBasis& tb) {
  Eigen::VectorXd y = x - x.dot(tb.e1) * tb.e1 - x.dot(tb.e2) * tb.e2;
  // second pass keeps the residual tangential component at round-off
  y -= y.dot(tb.e1) * tb.e1 + y.dot(tb.e2) * tb.e2;
  return y;
}

Eigen::Vector3d cross3(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return Eigen::Vector3d(a(0), a(1), a(2)).cross(Eigen::Vector3d(b(0), b(1), b(2)));
}

}  // namespace

FirstForm first_form(const Jet2& jet) {
  return FirstForm{jet.du.squaredNorm(), jet.du.dot(jet.dv), jet.dv.squaredNorm()};
}

SecondForm second_form(const Jet2& jet, const GeometryTolerances& tol) {
  const FirstForm ff = first_form(jet);
  if (is_degenerate(ff, tol)) {
    throw Error(ErrorCode::DegenerateImmersion, "E*G - F^2 below immersion threshold");
  }
  const TangentBasis tb = tangent_basis(jet);
  return SecondForm{normal_part(jet.duu, tb), normal_part(jet.duv, tb), normal_part(jet.dvv, tb)};
}

CurvatureFrame principal_curvatures(const FirstForm& first, const SecondForm& second, const Jet2& jet,
                                    double scale, const GeometryTolerances& tol) {
  if (jet.ambient_dim() < 3) {
    throw Error(ErrorCode::DegenerateImmersion, "ambient dimension must be at least 3");
  }
  if (is_degenerate(first, tol)) {
    throw Error(ErrorCode::DegenerateImmersion, "E*G - F^2 below immersion threshold");
  }
  const TangentBasis tb = tangent_basis(jet);

  CurvatureFrame frame;
  Eigen::Matrix2d B = Eigen::Matrix2d::Zero();
  if (jet.ambient_dim() == 3) {
    Eigen::Vector3d n = cross3(jet.du, jet.dv);
    n.normalize();
    frame.normal = Eigen::VectorXd(n);
  } else {
    // The first normal space must be a line: L, M, N pairwise parallel.
    const Eigen::VectorXd* vecs[3] = {&second.L, &second.M, &second.N};
    const auto* largest = *std::max_element(std::begin(vecs), std::end(vecs),
                                            [](auto* x, auto* y) { return x->norm() < y->norm(); });
    const double mag = largest->norm();
    if (mag > 0.0) {
      const Eigen::VectorXd n = *largest / mag;
      for (const auto* x : vecs) {
        const Eigen::VectorXd perp = *x - x->dot(n) * n;
        if (perp.norm() > tol.parallel * mag) {
          throw Error(ErrorCode::NormalSpaceAmbiguous, "second fundamental form spans more than one normal direction");
        }
      }
      frame.normal = n;
    }
  }
  if (frame.normal) {
    const Eigen::VectorXd& n = *frame.normal;
    B << second.L.dot(n), second.M.dot(n), second.M.dot(n), second.N.dot(n);
  }

  // Shape operator in the orthonormal tangent basis: W = T^{-T} B T^{-1}.
  const Eigen::Matrix2d Tinv = tb.T.inverse();
  const Eigen::Matrix2d W = Tinv.transpose() * B * Tinv;
  const double p = W(0, 0);
  const double q = 0.5 * (W(0, 1) + W(1, 0));
  const double r = W(1, 1);
  const double mean = 0.5 * (p + r);
  const double half_gap = std::hypot(0.5 * (p - r), q);
  frame.kappa1 = mean + half_gap;
  frame.kappa2 = mean - half_gap;
  frame.rho1 = std::max(std::abs(frame.kappa1), std::abs(frame.kappa2));
  frame.rho2 = std::min(std::abs(frame.kappa1), std::abs(frame.kappa2));
  frame.umbilic = 2.0 * half_gap <= tol.umbilic * scale;

  if (!frame.umbilic) {
    const double phi = 0.5 * std::atan2(2.0 * q, p - r);
    const Eigen::Vector2d q1(std::cos(phi), std::sin(phi));
    const Eigen::Vector2d q2(-std::sin(phi), std::cos(phi));
    frame.dir1 = Eigen::VectorXd(q1(0) * tb.e1 + q1(1) * tb.e2);
    frame.dir2 = Eigen::VectorXd(q2(0) * tb.e1 + q2(1) * tb.e2);
  }
  return frame;
}

double gauss_curvature(const FirstForm& first, const SecondForm& second, const GeometryTolerances& tol) {
  if (is_degenerate(first, tol)) {
    throw Error(ErrorCode::DegenerateImmersion, "E*G - F^2 below immersion threshold");
  }
  return (second.L.dot(second.N) - second.M.squaredNorm()) / first.det();
}

PointClass classify_point(double kappa1, double kappa2, double scale, const GeometryTolerances& tol) {
  const double flat = tol.flat * scale;
  const bool flat1 = std::abs(kappa1) <= flat;
  const bool flat2 = std::abs(kappa2) <= flat;
  if (flat1 && flat2) return PointClass::FlatUmbilic;
  if (flat1 || flat2) return PointClass::Ruled;
  if (kappa1 * kappa2 > flat * flat) return PointClass::PositiveCurvature;
  if (std::abs(kappa1 - kappa2) <= tol.umbilic * scale) return PointClass::CurvedUmbilic;
  return PointClass::NegativeRegular;
}

CurvatureFrame pullback_frame(const Jet2& jet, CurvatureFrame frame, const GeometryTolerances& tol) {
  if (!frame.has_directions()) {
    throw Error(ErrorCode::UmbilicPoint, "principal directions undefined at umbilic point");
  }
  if (is_degenerate(first_form(jet), tol)) {
    throw Error(ErrorCode::RankDeficient, "differential is singular");
  }
  const TangentBasis tb = tangent_basis(jet);
  const Eigen::Matrix2d Tinv = tb.T.inverse();
  const Eigen::Vector2d c1(frame.dir1->dot(tb.e1), frame.dir1->dot(tb.e2));
  const Eigen::Vector2d c2(frame.dir2->dot(tb.e1), frame.dir2->dot(tb.e2));
  const Eigen::Vector2d w1 = Tinv * c1;
  const Eigen::Vector2d w2 = Tinv * c2;
  const Eigen::Vector2d r = w1.normalized();
  const Eigen::Vector2d s = w2.normalized();
  frame.pullback_r = r;
  frame.pullback_s = s;
  frame.a = c1.norm() / w1.norm();
  frame.b = c2.norm() / w2.norm();
  const double cross = std::abs(r(0) * s(1) - r(1) * s(0));
  const double angle = std::atan2(cross, r.dot(s));
  frame.theta = 0.5 * angle;
  frame.sin2theta = std::min(1.0, cross);
  return frame;
}

CurvatureFrame umbilic_pullback_frame(const Jet2& jet, CurvatureFrame frame, const GeometryTolerances& tol) {
  if (is_degenerate(first_form(jet), tol)) {
    throw Error(ErrorCode::RankDeficient, "differential is singular");
  }
  const TangentBasis tb = tangent_basis(jet);
  const Eigen::JacobiSVD<Eigen::Matrix2d> svd(tb.T, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix2d U = svd.matrixU();
  const Eigen::Matrix2d V = svd.matrixV();
  frame.dir1 = Eigen::VectorXd(U(0, 0) * tb.e1 + U(1, 0) * tb.e2);
  frame.dir2 = Eigen::VectorXd(U(0, 1) * tb.e1 + U(1, 1) * tb.e2);
  frame.pullback_r = Eigen::Vector2d(V.col(0));
  frame.pullback_s = Eigen::Vector2d(V.col(1));
  frame.a = svd.singularValues()(0);
  frame.b = svd.singularValues()(1);
  frame.theta = std::numbers::pi / 4.0;
  frame.sin2theta = 1.0;
  return frame;
}

double curvature_ratio_factor(double rho1, double rho2, PointClass cls) {
  if (cls == PointClass::FlatUmbilic) return 2.0;
  if (cls == PointClass::Ruled || !(rho2 > 0.0)) return std::numeric_limits<double>::infinity();
  if (rho1 == rho2) return 2.0;
  return std::max(2.0, (rho1 + rho2) / (std::sqrt(rho1) * std::sqrt(rho2)));
}

CurvatureFrame evaluate_frame(const Jet2& jet, double scale, const GeometryTolerances& tol) {
  const FirstForm ff = first_form(jet);
  const SecondForm sf = second_form(jet, tol);
  CurvatureFrame frame = principal_curvatures(ff, sf, jet, scale, tol);
  if (!frame.umbilic) frame = pullback_frame(jet, std::move(frame), tol);
  return frame;
}

}  // namespace harmap
