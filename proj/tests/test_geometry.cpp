#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "harmap/families.hpp"
#include "harmap/geometry.hpp"
#include "test_support.hpp"

using namespace harmap;
using harmap::test::v3;

namespace {

Jet2 plane_jet() {
  Jet2 j = Jet2::zero(3);
  j.du = v3(1, 0, 0);
  j.dv = v3(0, 1, 0);
  return j;
}

Jet2 saddle_origin() { return make_family("saddle_graph").jet_fn(0.0, 0.0); }

// Scalar second form in (u, v) coordinates along the frame normal.
Eigen::Matrix2d scalar_second_form(const SecondForm& sf, const Eigen::VectorXd& n) {
  Eigen::Matrix2d B;
  B << sf.L.dot(n), sf.M.dot(n), sf.M.dot(n), sf.N.dot(n);
  return B;
}

}  // namespace

TEST(FirstForm, IdentityAndStretch) {
  const FirstForm id = first_form(plane_jet());
  EXPECT_EQ(id.E, 1.0);
  EXPECT_EQ(id.F, 0.0);
  EXPECT_EQ(id.G, 1.0);
  const FirstForm st = first_form(make_family("affine_plane", {{"p", 2.0}, {"q", 1.0}}).jet_fn(0.3, 0.4));
  EXPECT_EQ(st.E, 4.0);
  EXPECT_EQ(st.F, 0.0);
  EXPECT_EQ(st.G, 1.0);
}

TEST(FirstForm, CatenoidIsConformalWithCoshSquared) {
  // Symbolic jet at (0.3, 0.7): du = (-0.37092780393896435109, 1.1991087510987430420, 0),
  // dv = (0.72470269042328538944, 0.22417681233754291337, 1).
  Jet2 j = Jet2::zero(3);
  j.du = v3(-0.37092780393896435109, 1.1991087510987430420, 0);
  j.dv = v3(0.72470269042328538944, 0.22417681233754291337, 1);
  const FirstForm ff = first_form(j);
  const double c2 = std::cosh(0.7) * std::cosh(0.7);
  EXPECT_NEAR(ff.E, c2, 1e-14);
  EXPECT_NEAR(ff.G, c2, 1e-14);
  EXPECT_NEAR(ff.F, 0.0, 1e-15);
}

TEST(SecondForm, PlaneIsZero) {
  const SecondForm sf = second_form(make_family("affine_plane").jet_fn(0.2, 0.9));
  EXPECT_EQ(sf.L.norm(), 0.0);
  EXPECT_EQ(sf.M.norm(), 0.0);
  EXPECT_EQ(sf.N.norm(), 0.0);
}

TEST(SecondForm, SaddleAtOrigin) {
  const SecondForm sf = second_form(saddle_origin());
  EXPECT_TRUE(sf.L.isApprox(v3(0, 0, 2)));
  EXPECT_EQ(sf.M.norm(), 0.0);
  EXPECT_TRUE(sf.N.isApprox(v3(0, 0, -2)));
}

TEST(SecondForm, SphereNormalCurvatureIsInverseRadius) {
  const auto sphere = make_family("sphere_patch", {{"R", 2.0}});
  for (double u : {0.1, 1.3, 4.0}) {
    for (double v : {-0.8, 0.0, 0.3}) {
      const Jet2 j = sphere.jet_fn(u, v);
      const FirstForm ff = first_form(j);
      const SecondForm sf = second_form(j);
      EXPECT_NEAR(sf.L.norm() / ff.E, 0.5, 1e-13);
      EXPECT_NEAR(sf.N.norm() / ff.G, 0.5, 1e-13);
    }
  }
}

TEST(SecondForm, DegenerateImmersionThrows) {
  Jet2 j = plane_jet();
  j.dv = 2.0 * j.du;
  try {
    second_form(j);
    FAIL() << "expected DegenerateImmersion";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateImmersion);
  }
}

TEST(SecondForm, NormalPartsAreOrthogonalToTangentPlane) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const Jet2 j = harmap::test::random_jet(rng, trial % 2 ? 3 : 5);
    const SecondForm sf = second_form(j);
    for (const auto* x : {&sf.L, &sf.M, &sf.N}) {
      const double scale = std::max(1.0, x->norm());
      EXPECT_LE(std::abs(x->dot(j.du)) / (j.du.norm() * scale), 1e-10);
      EXPECT_LE(std::abs(x->dot(j.dv)) / (j.dv.norm() * scale), 1e-10);
    }
  }
}

TEST(PrincipalCurvatures, PlaneIsUmbilic) {
  const Jet2 j = plane_jet();
  const CurvatureFrame cf = principal_curvatures(first_form(j), second_form(j), j, 1.0);
  EXPECT_EQ(cf.kappa1, 0.0);
  EXPECT_EQ(cf.kappa2, 0.0);
  EXPECT_TRUE(cf.umbilic);
  EXPECT_FALSE(cf.has_directions());
}

TEST(PrincipalCurvatures, SaddleAtOrigin) {
  const Jet2 j = saddle_origin();
  const CurvatureFrame cf = principal_curvatures(first_form(j), second_form(j), j, 2.0);
  EXPECT_NEAR(cf.kappa1, 2.0, 1e-14);
  EXPECT_NEAR(cf.kappa2, -2.0, 1e-14);
  EXPECT_NEAR(cf.rho1, 2.0, 1e-14);
  EXPECT_NEAR(cf.rho2, 2.0, 1e-14);
  ASSERT_TRUE(cf.has_directions());
  EXPECT_NEAR(std::abs(cf.dir1->dot(v3(1, 0, 0))), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(cf.dir2->dot(v3(0, 1, 0))), 1.0, 1e-14);
}

TEST(PrincipalCurvatures, CatenoidMatchesRevolutionFormula) {
  // kappa = +-1/cosh^2 v; symbolic value at v = 0.7: 0.63473958998245860741
  const auto cat = make_family("catenoid");
  const Jet2 j = cat.jet_fn(0.3, 0.7);
  const CurvatureFrame cf = principal_curvatures(first_form(j), second_form(j), j, 1.0);
  EXPECT_NEAR(cf.kappa1, 0.63473958998245860741, 1e-14);
  EXPECT_NEAR(cf.kappa2, -0.63473958998245860741, 1e-14);
  for (double v : {-1.0, -0.25, 0.0, 0.5}) {
    const Jet2 jv = cat.jet_fn(1.1, v);
    const CurvatureFrame c = principal_curvatures(first_form(jv), second_form(jv), jv, 1.0);
    const double expect = 1.0 / (std::cosh(v) * std::cosh(v));
    EXPECT_NEAR(c.rho1, expect, 1e-13);
    EXPECT_NEAR(c.rho2, expect, 1e-13);
  }
}

TEST(PrincipalCurvatures, EnneperSymbolicValue) {
  const Jet2 j = make_family("enneper").jet_fn(0.3, -0.2);
  const CurvatureFrame cf = principal_curvatures(first_form(j), second_form(j), j, 1.0);
  EXPECT_NEAR(cf.kappa1, 1.5662933667475917865, 1e-13);
  EXPECT_NEAR(cf.kappa2, -1.5662933667475917865, 1e-13);
}

TEST(PrincipalCurvatures, ShapeOperatorResidualAndOrthogonality) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const Jet2 j = harmap::test::random_jet(rng);
    const FirstForm ff = first_form(j);
    const SecondForm sf = second_form(j);
    CurvatureFrame cf = principal_curvatures(ff, sf, j, 1.0);
    if (cf.umbilic) continue;
    cf = pullback_frame(j, cf);
    const double scale = std::max(1.0, 0.5 * (std::abs(cf.kappa1) + std::abs(cf.kappa2)));
    EXPECT_LE(std::abs(cf.dir1->dot(*cf.dir2)), 1e-12);
    // B w = kappa I w for the coordinate vector w of each principal direction.
    Eigen::Matrix2d I;
    I << ff.E, ff.F, ff.F, ff.G;
    const Eigen::Matrix2d B = scalar_second_form(sf, *cf.normal);
    const Eigen::Vector2d w1 = *cf.pullback_r / *cf.a, w2 = *cf.pullback_s / *cf.b;
    const Eigen::Matrix2d Iinv = I.inverse();
    EXPECT_LE((Iinv * B * w1 - cf.kappa1 * w1).norm() / w1.norm(), 1e-8 * scale);
    EXPECT_LE((Iinv * B * w2 - cf.kappa2 * w2).norm() / w2.norm(), 1e-8 * scale);
  }
}

TEST(PrincipalCurvatures, HigherCodimensionCollapsedNormalSpace) {
  // Saddle graph in R^4 with the graph direction tilted into (z, w).
  const double c = std::cos(0.4), s = std::sin(0.4);
  auto embed = [c, s](const Eigen::VectorXd& x) {
    Eigen::VectorXd y(4);
    y << x(0), x(1), c * x(2), s * x(2);
    return y;
  };
  const Jet2 j3 = make_family("saddle_graph").jet_fn(0.3, -0.6);
  const Jet2 j4{embed(j3.value), embed(j3.du), embed(j3.dv), embed(j3.duu), embed(j3.duv), embed(j3.dvv)};
  const CurvatureFrame a = principal_curvatures(first_form(j3), second_form(j3), j3, 1.0);
  const CurvatureFrame b = principal_curvatures(first_form(j4), second_form(j4), j4, 1.0);
  EXPECT_NEAR(a.rho1, b.rho1, 1e-12);
  EXPECT_NEAR(a.rho2, b.rho2, 1e-12);
  EXPECT_NEAR(a.kappa1 * a.kappa2, b.kappa1 * b.kappa2, 1e-12);
  EXPECT_NEAR(gauss_curvature(first_form(j4), second_form(j4)), b.kappa1 * b.kappa2, 1e-12);
}

TEST(PrincipalCurvatures, TwoDimensionalNormalSpaceIsAmbiguous) {
  // (u, v, u^2 - v^2, 2uv): graph of z^2, second form spans two normal directions.
  Jet2 j = Jet2::zero(4);
  j.du << 1, 0, 2 * 0.3, 2 * 0.2;
  j.dv << 0, 1, -2 * 0.2, 2 * 0.3;
  j.duu << 0, 0, 2, 0;
  j.duv << 0, 0, 0, 2;
  j.dvv << 0, 0, -2, 0;
  try {
    principal_curvatures(first_form(j), second_form(j), j, 1.0);
    FAIL() << "expected NormalSpaceAmbiguous";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NormalSpaceAmbiguous);
  }
}

TEST(GaussCurvature, ExamplesAndProductIdentity) {
  const Jet2 p = plane_jet();
  EXPECT_EQ(gauss_curvature(first_form(p), second_form(p)), 0.0);
  const Jet2 s = saddle_origin();
  EXPECT_NEAR(gauss_curvature(first_form(s), second_form(s)), -4.0, 1e-14);
  const Jet2 sph = make_family("sphere_patch", {{"R", 2.0}}).jet_fn(0.4, 0.3);
  EXPECT_NEAR(gauss_curvature(first_form(sph), second_form(sph)), 0.25, 1e-14);
  const Jet2 cat = make_family("catenoid").jet_fn(0.3, 0.7);
  EXPECT_NEAR(gauss_curvature(first_form(cat), second_form(cat)), -0.40289434709109966937, 1e-14);
  const Jet2 enn = make_family("enneper").jet_fn(0.3, -0.2);
  EXPECT_NEAR(gauss_curvature(first_form(enn), second_form(enn)), -2.4532749107175066960, 1e-13);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const Jet2 j = harmap::test::random_jet(rng);
    const FirstForm ff = first_form(j);
    const SecondForm sf = second_form(j);
    const CurvatureFrame cf = principal_curvatures(ff, sf, j, 1.0);
    const double K = gauss_curvature(ff, sf);
    EXPECT_LE(std::abs(K - cf.kappa1 * cf.kappa2), 1e-8 * std::max(1.0, std::abs(K)));
  }
}

TEST(ClassifyPoint, Examples) {
  EXPECT_EQ(classify_point(0, 0, 1), PointClass::FlatUmbilic);
  EXPECT_EQ(classify_point(2, -2, 2), PointClass::NegativeRegular);
  EXPECT_EQ(classify_point(3, 0, 1.5), PointClass::Ruled);
  EXPECT_EQ(classify_point(0, -3, 1.5), PointClass::Ruled);
  EXPECT_EQ(classify_point(1, 0.5, 1), PointClass::PositiveCurvature);
  EXPECT_EQ(classify_point(-1, -1, 1), PointClass::PositiveCurvature);
  // Opposite-sign curvatures just above the flat threshold with a gap below the umbilic one.
  EXPECT_EQ(classify_point(3e-7, -3e-7, 1), PointClass::CurvedUmbilic);
  // Thresholds scale with the case's curvature magnitude.
  EXPECT_EQ(classify_point(5e-7, -1.0, 1.0), PointClass::NegativeRegular);
  EXPECT_EQ(classify_point(5e-7, -1.0, 10.0), PointClass::Ruled);
}

TEST(PullbackFrame, ConformalPointsHaveOrthogonalPullbacks) {
  for (const char* name : {"catenoid", "helicoid", "enneper"}) {
    const auto fam = make_family(name);
    const Jet2 j = fam.jet_fn(0.45, -0.35);
    const CurvatureFrame cf = evaluate_frame(j, 1.0);
    ASSERT_TRUE(cf.has_pullback()) << name;
    EXPECT_NEAR(*cf.sin2theta, 1.0, 1e-12) << name;
    EXPECT_NEAR(*cf.a, *cf.b, 1e-12 * *cf.a) << name;
    EXPECT_NEAR(*cf.theta, std::numbers::pi / 4, 1e-6) << name;
  }
}

TEST(PullbackFrame, SaddleOriginIsCoordinateFrame) {
  const CurvatureFrame cf = evaluate_frame(saddle_origin(), 2.0);
  ASSERT_TRUE(cf.has_pullback());
  EXPECT_NEAR(std::abs(cf.pullback_r->x()), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(cf.pullback_s->y()), 1.0, 1e-14);
  EXPECT_NEAR(*cf.a, 1.0, 1e-14);
  EXPECT_NEAR(*cf.b, 1.0, 1e-14);
  EXPECT_NEAR(*cf.sin2theta, 1.0, 1e-14);
}

TEST(PullbackFrame, RadialPointsAreRadialAndAngular) {
  const auto rad = make_family("radial_family", {{"alpha", 1.0}, {"beta", 0.5}, {"gamma", 1.0}});
  const double r = 1.3, phi = 0.8;
  const CurvatureFrame cf = evaluate_frame(rad.jet_fn(r * std::cos(phi), r * std::sin(phi)), 1.0);
  ASSERT_TRUE(cf.has_pullback());
  EXPECT_NEAR(*cf.sin2theta, 1.0, 1e-12);
  const Eigen::Vector2d radial(std::cos(phi), std::sin(phi)), angular(-std::sin(phi), std::cos(phi));
  const double align_r = std::max(std::abs(cf.pullback_r->dot(radial)), std::abs(cf.pullback_r->dot(angular)));
  EXPECT_NEAR(align_r, 1.0, 1e-12);
}

TEST(PullbackFrame, RoundTripRecoversPrincipalDirections) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const Jet2 j = harmap::test::random_jet(rng);
    const CurvatureFrame cf = evaluate_frame(j, 1.0);
    if (!cf.has_pullback()) continue;
    const Eigen::VectorXd img_r = cf.pullback_r->x() * j.du + cf.pullback_r->y() * j.dv;
    const Eigen::VectorXd img_s = cf.pullback_s->x() * j.du + cf.pullback_s->y() * j.dv;
    EXPECT_NEAR(img_r.norm(), *cf.a, 1e-12 * *cf.a);
    EXPECT_NEAR(img_s.norm(), *cf.b, 1e-12 * *cf.b);
    EXPECT_NEAR(std::abs(img_r.normalized().dot(*cf.dir1)), 1.0, 1e-8);
    EXPECT_NEAR(std::abs(img_s.normalized().dot(*cf.dir2)), 1.0, 1e-8);
    EXPECT_GT(*cf.sin2theta, 0.0);
    EXPECT_LE(*cf.sin2theta, 1.0);
  }
}

TEST(PullbackFrame, UmbilicAndRankDeficientErrors) {
  const Jet2 p = plane_jet();
  const CurvatureFrame flat = principal_curvatures(first_form(p), second_form(p), p, 1.0);
  try {
    pullback_frame(p, flat);
    FAIL() << "expected UmbilicPoint";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UmbilicPoint);
  }
  const Jet2 s = saddle_origin();
  CurvatureFrame cf = principal_curvatures(first_form(s), second_form(s), s, 2.0);
  Jet2 singular = s;
  singular.dv = singular.du;
  try {
    pullback_frame(singular, cf);
    FAIL() << "expected RankDeficient";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
  }
}

TEST(PullbackFrame, UmbilicFallbackUsesSingularValues) {
  const Jet2 j = make_family("sphere_patch", {{"R", 2.0}}).jet_fn(0.4, 0.3);
  const CurvatureFrame cf = principal_curvatures(first_form(j), second_form(j), j, 0.5);
  EXPECT_TRUE(cf.umbilic);
  const CurvatureFrame full = umbilic_pullback_frame(j, cf);
  // E = 4 cos^2 v, G = 4, F = 0: singular values 2 and 2 cos v.
  EXPECT_NEAR(*full.a, 2.0, 1e-14);
  EXPECT_NEAR(*full.b, 2.0 * std::cos(0.3), 1e-14);
  EXPECT_EQ(*full.sin2theta, 1.0);
}

TEST(CurvatureRatioFactor, Examples) {
  EXPECT_EQ(curvature_ratio_factor(0, 0, PointClass::FlatUmbilic), 2.0);
  EXPECT_EQ(curvature_ratio_factor(1, 1, PointClass::NegativeRegular), 2.0);
  EXPECT_DOUBLE_EQ(curvature_ratio_factor(4, 1, PointClass::NegativeRegular), 2.5);
  EXPECT_EQ(curvature_ratio_factor(3, 0, PointClass::Ruled), std::numeric_limits<double>::infinity());
}

TEST(CurvatureRatioFactor, AmGmOnRandomPairs) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> logu(-6.0, 6.0);
  for (int k = 0; k < 100000; ++k) {
    const double x = std::exp(logu(rng)), y = std::exp(logu(rng));
    const double r1 = std::max(x, y), r2 = std::min(x, y);
    const double f = curvature_ratio_factor(r1, r2, PointClass::NegativeRegular);
    ASSERT_GE(f, 2.0);
    if (r1 > r2 * (1 + 1e-6)) {
      ASSERT_GT(f, 2.0) << r1 << ' ' << r2;
    }
  }
  for (double r : {1e-5, 0.3, 7.0}) EXPECT_EQ(curvature_ratio_factor(r, r, PointClass::NegativeRegular), 2.0);
}

TEST(FrameInvariance, DomainRotations) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
  const auto sad = make_family("saddle_graph");
  const auto rad = make_family("radial_family");
  for (int k = 0; k < 100; ++k) {
    const Jet2 base = (k % 3 == 0) ? sad.jet_fn(0.4, -0.7)
                      : (k % 3 == 1) ? rad.jet_fn(1.1, 0.6)
                                     : harmap::test::random_jet(rng);
    const Jet2 rot = harmap::test::rotate_domain(base, ang(rng));
    const CurvatureFrame a = evaluate_frame(base, 1.0), b = evaluate_frame(rot, 1.0);
    ASSERT_EQ(a.has_pullback(), b.has_pullback());
    EXPECT_NEAR(a.kappa1, b.kappa1, 1e-8);
    EXPECT_NEAR(a.kappa2, b.kappa2, 1e-8);
    if (!a.has_pullback()) continue;
    EXPECT_NEAR(*a.a, *b.a, 1e-8);
    EXPECT_NEAR(*a.b, *b.b, 1e-8);
    EXPECT_NEAR(*a.sin2theta, *b.sin2theta, 1e-8);
    const PointClass ca = classify_point(a.kappa1, a.kappa2, 1.0), cb = classify_point(b.kappa1, b.kappa2, 1.0);
    EXPECT_NEAR(curvature_ratio_factor(a.rho1, a.rho2, ca), curvature_ratio_factor(b.rho1, b.rho2, cb), 1e-8);
  }
}

TEST(FrameInvariance, AmbientRigidMotions) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    const Jet2 base = harmap::test::random_jet(rng);
    const Jet2 moved = harmap::test::rigid_motion(base, harmap::test::random_rotation(rng),
                                                  Eigen::Vector3d(g(rng), g(rng), g(rng)));
    const CurvatureFrame a = evaluate_frame(base, 1.0), b = evaluate_frame(moved, 1.0);
    EXPECT_NEAR(a.kappa1, b.kappa1, 1e-8);
    EXPECT_NEAR(a.kappa2, b.kappa2, 1e-8);
    EXPECT_NEAR(a.rho1, b.rho1, 1e-8);
    EXPECT_NEAR(a.rho2, b.rho2, 1e-8);
    if (!a.has_pullback()) continue;
    EXPECT_NEAR(*a.a, *b.a, 1e-8);
    EXPECT_NEAR(*a.b, *b.b, 1e-8);
    EXPECT_NEAR(*a.sin2theta, *b.sin2theta, 1e-8);
  }
}
