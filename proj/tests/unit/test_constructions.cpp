#include "support.hpp"

#include <hessiso/constructions.hpp>
#include <hessiso/errors.hpp>
#include <hessiso/isometry.hpp>
#include <hessiso/legendre.hpp>
#include <hessiso/profile.hpp>
#include <hessiso/tensors.hpp>

#include <gtest/gtest.h>

using namespace hessiso;
using namespace hessiso::test;

namespace {

std::vector<Vec> sphere_points(int count, double lo = 0.05, double hi = kPi - 0.05) {
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) {
    const double t = lo + (hi - lo) * i / (count - 1), phi = 0.3 + 0.71 * i, r = 0.6 + 0.01 * i;
    Vec y(3);
    y << r * std::cos(t), r * std::sin(t) * std::cos(phi), r * std::sin(t) * std::sin(phi);
    out.push_back(y);
  }
  return out;
}

GlueOptions standard() {
  GlueOptions go;
  go.u1 = Interval{0.3, 1.0};
  go.u2 = Interval{2.0, 2.7};
  return go;
}

}  // namespace

TEST(Glued, IsAHessianIsometryThatIsNeitherLinearNorLegendre) {
  const GluedConstruction gc = build_glued(standard());
  EXPECT_GT(gc.epsilon, 0.0);
  EXPECT_EQ(gc.epsilon, 0.1 / (1 << gc.halvings));
  ASSERT_EQ(gc.bumps.size(), 2u);
  const auto pts = sphere_points(150);
  EXPECT_LT(verify_hessian_isometry(gc.map, *gc.f1, *gc.f2, pts).max_residual, 1e-7);
  double nonlinear = 0.0, non_legendre = 0.0;
  for (const Vec& y : pts) {
    const Vec img = gc.map(y).image;
    nonlinear = std::max(nonlinear, (img - y).norm() / y.norm());
    non_legendre = std::max(non_legendre, (img - legendre_map(*gc.f1, y)).norm() / y.norm());
  }
  EXPECT_GT(nonlinear, 1e-4);
  EXPECT_GT(non_legendre, 1e-4);
  EXPECT_LT(glued_boundary_jump(gc), 1e-8);
}

TEST(Glued, DeformedProfileIsStronglyConvex) {
  const GluedConstruction gc = build_glued(standard());
  const auto& f = std::get<ProfileNorm>(gc.f1->v).f;
  for (int i = 1; i < 1000; ++i) EXPECT_GT(profile_convexity_margin(f, kPi * i / 1000), 0.0);
  std::vector<Vec> pts = sphere_points(100);
  EXPECT_TRUE(check_strong_convexity(*gc.f2, pts).ok());
}

TEST(Glued, CurvedOnBothDeformations) {
  const GluedConstruction gc = build_glued(standard());
  const auto& f = std::get<ProfileNorm>(gc.f1->v).f;
  for (const Bump& b : gc.bumps) {
    double worst = 0.0;
    for (int i = 1; i < 20; ++i) {
      const double t = b.support().lo + b.support().width() * i / 20;
      worst = std::max(worst, std::abs(genericity_condition(f, t)));
    }
    EXPECT_GT(worst, 1e-4);
  }
}

TEST(Glued, WithoutDeformationsTheMapIsTheIdentity) {
  const GluedConstruction gc = build_glued({});
  EXPECT_TRUE(gc.bumps.empty());
  for (const Vec& y : sphere_points(20)) {
    EXPECT_LT((gc.map(y).image - y).norm(), 1e-15);
    EXPECT_NEAR(eval_E(*gc.f2, y), 0.5 * y.squaredNorm(), 1e-14);
  }
}

TEST(Glued, OnlyTheFirstDeformationGivesTheIdentity) {
  GlueOptions go;
  go.u1 = Interval{0.3, 1.0};
  const GluedConstruction gc = build_glued(go);
  EXPECT_FALSE(gc.dual_cone.has_value());
  const auto pts = sphere_points(40);
  for (const Vec& y : pts) EXPECT_LT((gc.map(y).image - y).norm(), 1e-15);
  EXPECT_LT(verify_hessian_isometry(gc.map, *gc.f1, *gc.f2, pts).max_residual, 1e-15);
}

TEST(Glued, OverlappingSupportsAreRejected) {
  GlueOptions go;
  go.u1 = Interval{0.3, 1.5};
  go.u2 = Interval{1.4, 2.5};
  try {
    build_glued(go);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OverlappingSupports);
  }
  go.u2 = Interval{2.5, 3.5};
  EXPECT_THROW(build_glued(go), Error);
}

TEST(Glued, ConvexityLostWhenHalvingIsNotAllowed) {
  GlueOptions go = standard();
  go.epsilon = 5.0;
  go.max_halvings = 2;
  try {
    build_glued(go);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConvexityLost);
  }
}

TEST(PolarChart, EuclideanIndicatrixHasLengthTwoPi) {
  const Mat A = (Mat(2, 2) << 3, 0.4, 0.4, 0.5).finished();
  const PolarChart2D c = polar_chart_2d(make_euclidean(A));
  EXPECT_NEAR(c.length, 2 * kPi, 1e-10);
  EXPECT_LT(c.refinement_delta, 1e-10);
  EXPECT_EQ(c.arclength.front(), 0.0);
  EXPECT_NEAR(c.arclength.back(), c.length, 1e-15);
  for (std::size_t i = 1; i < c.arclength.size(); ++i) EXPECT_GT(c.arclength[i], c.arclength[i - 1]);
}

TEST(PolarChart, ArclengthAndAngleAreInverse) {
  Rng rng(1);
  const PolarChart2D c = polar_chart_2d(randers(rng, 2, 0.7));
  for (double phi : {0.1, 1.0, 3.3, 6.0}) EXPECT_NEAR(c.angle_at(c.arclength_at(phi)), phi, 1e-10);
  for (double phi : {0.4, 2.0}) {
    EXPECT_NEAR(c.speed(phi), diff5([&](double s) { return c.arclength_at(s); }, phi, 1e-3), 1e-8);
    EXPECT_NEAR(eval_F(*c.norm, c.indicatrix(phi)), 1.0, 1e-14);
  }
}

TEST(PolarChart, MetricIsFlatInPolarCoordinates) {
  Rng rng(2);
  const PolarChart2D c = polar_chart_2d(randers(rng, 2, 0.6));
  for (int i = 0; i < 20; ++i) EXPECT_LT(polar_chart_metric_defect(c, rng.normal_vec(2)), 1e-10);
}

TEST(PolarChart, LengthIsALinearInvariant) {
  Rng rng(3);
  const NormPtr F = randers(rng, 2, 0.5);
  const double L = polar_chart_2d(F).length;
  for (int i = 0; i < 5; ++i) {
    const Mat A = Mat::Identity(2, 2) + 0.4 * rng.normal_mat(2, 2);
    EXPECT_NEAR(polar_chart_2d(make_pullback(F, A)).length, L, 1e-8);
  }
}

TEST(PolarChart, NeedsTwoDimensions) {
  EXPECT_THROW(polar_chart_2d(make_euclidean(Mat::Identity(3, 3))), Error);
}

TEST(TwoD, IsometryExistsForEqualLengths) {
  Rng rng(4);
  const NormPtr F = randers(rng, 2, 0.5);
  const NormPtr G = make_pullback(F, (Mat(2, 2) << 1.2, 0.3, -0.2, 0.9).finished());
  const TwoDIsometry iso = two_d_isometry(G, F);
  EXPECT_NEAR(iso.length_a, iso.length_b, 1e-8);
  std::vector<Vec> pts;
  for (int i = 0; i < 30; ++i) pts.push_back(rng.normal_vec(2));
  EXPECT_LT(verify_hessian_isometry(iso.map, *G, *F, pts).max_residual, 1e-7);
}

TEST(TwoD, DifferentLengthsAreALengthMismatch) {
  const NormPtr E = make_euclidean(Mat::Identity(2, 2));
  const NormPtr R = make_randers(Mat::Identity(2, 2), vec({0.6, 0.0}));
  try {
    two_d_isometry(E, R);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
}
