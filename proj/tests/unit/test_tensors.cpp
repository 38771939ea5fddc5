#include "support.hpp"

#include <hessiso/errors.hpp>
#include <hessiso/legendre.hpp>
#include <hessiso/tensors.hpp>

#include <gtest/gtest.h>

using namespace hessiso;
using namespace hessiso::test;

namespace {

std::vector<NormPtr> curved() {
  Rng rng(21);
  std::vector<NormPtr> out;
  out.push_back(randers(rng, 3));
  out.push_back(randers(rng, 4));
  out.push_back(make_profile(1, 3, small_profile()));
  out.push_back(make_expression(
      3, Expr::parse("(* 0.5 (+ (pow x1 2) (pow x2 2) (pow x3 2) (* 0.5 (sqrt (+ (pow x1 4) (pow x2 4) (pow x3 4))))))")));
  out.push_back(dual_norm(out[0]));
  return out;
}

Vec off_axis(Rng& rng, int n) {
  for (;;) {
    Vec y = rng.normal_vec(n);
    if (y.tail(n - 1).norm() > 0.2 * y.norm()) return y;
  }
}

}  // namespace

TEST(Tensors, EuclideanHasConstantMetricAndNoCurvature) {
  const Mat A = (Mat(3, 3) << 2, 0.5, 0, 0.5, 1, 0, 0, 0, 3).finished();
  const NormPtr F = make_euclidean(A);
  const Vec y = vec({0.3, -1, 2});
  EXPECT_LT(rel(fundamental_tensor(*F, y).g, A), 1e-15);
  EXPECT_EQ(cartan_tensor(*F, y).C.max_abs(), 0.0);
  EXPECT_EQ(curvature_tensor(*F, y).R.max_abs(), 0.0);
}

TEST(Tensors, CurvatureMatchesFiniteDifferenceRiemannTensor) {
  Rng rng(1);
  for (const auto& F : curved())
    for (int i = 0; i < 10; ++i) {
      const Vec y = off_axis(rng, F->dim());
      const auto R = curvature_tensor(*F, y);
      const auto Rfd = fd_riemann_oracle(*F, y);
      const double scale = std::max(tensor_scale(R.R.data(), Rfd.R.data()),
                                    fundamental_tensor(*F, y).g.cwiseAbs().maxCoeff() / y.squaredNorm());
      EXPECT_LT(max_abs_diff(R.R.data(), Rfd.R.data()) / scale, 1e-4) << F->id;
    }
}

TEST(Tensors, CurvatureSymmetries) {
  Rng rng(2);
  for (const auto& F : curved())
    for (int i = 0; i < 20; ++i) {
      const Vec y = off_axis(rng, F->dim());
      const Tensor4 R = curvature_tensor(*F, y).R;
      EXPECT_LT(curvature_symmetry_defect(R), 1e-9) << F->id;
      const int n = R.dim();
      // Spot-check the identities directly as well.
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          EXPECT_NEAR(R(a, b, 0, 1), -R(b, a, 0, 1), 1e-12 * (1 + R.max_abs()));
          EXPECT_NEAR(R(a, b, 0, 1), R(0, 1, a, b), 1e-12 * (1 + R.max_abs()));
        }
    }
}

TEST(Tensors, CurvatureIsHomogeneousOfDegreeMinusTwo) {
  const NormPtr F = curved()[0];
  const Vec y = vec({0.4, -0.9, 0.3});
  const auto R1 = curvature_tensor(*F, y), R3 = curvature_tensor(*F, 3.0 * y);
  for (std::size_t i = 0; i < R1.R.data().size(); ++i) EXPECT_NEAR(R3.R.data()[i] * 9.0, R1.R.data()[i], 1e-13);
}

TEST(Tensors, CartanVanishesAlongTheRadialDirection) {
  Rng rng(3);
  for (const auto& F : curved())
    for (int i = 0; i < 20; ++i) {
      const Vec y = off_axis(rng, F->dim());
      EXPECT_LT(cartan_radial_defect(cartan_tensor(*F, y).C, y), 1e-10) << F->id;
    }
}

TEST(Tensors, RadialRaysAreGeodesics) {
  Rng rng(4);
  for (const auto& F : curved())
    for (int i = 0; i < 10; ++i) {
      const Vec y = off_axis(rng, F->dim());
      EXPECT_LT(radial_geodesic_defect(*F, y), 1e-8) << F->id;
    }
}

TEST(Tensors, ConeDecomposition) {
  Rng rng(5);
  for (const auto& F : curved())
    for (int i = 0; i < 10; ++i) EXPECT_LT(cone_decomposition_residual(*F, off_axis(rng, F->dim())), 1e-12) << F->id;
}

TEST(Tensors, TwoDimensionalNormsAreFlat) {
  Rng rng(6);
  const NormPtr F = randers(rng, 2, 0.8);
  for (int i = 0; i < 20; ++i) {
    const Vec y = rng.normal_vec(2);
    const Jet3 j = jet3(*F, y);
    EXPECT_LT(curvature_tensor(*F, y).R.max_abs(), 1e-12 * j.hess.norm() / y.squaredNorm());
  }
}

TEST(Tensors, SectionalCurvature) {
  const NormPtr F = curved()[3];
  const Vec y = vec({0.7, 0.2, -0.5});
  const Vec u = vec({1, 0, 0}), v = vec({0, 1, 0.3});
  const auto R = curvature_tensor(*F, y);
  const Mat g = fundamental_tensor(*F, y).g;
  const double k = sectional_curvature(R, g, u, v);
  // Invariant under a change of basis of the plane.
  EXPECT_NEAR(sectional_curvature(R, g, 2 * u + v, u - 3 * v), k, 1e-12 * std::abs(k) + 1e-15);
  EXPECT_NEAR(sectional_curvature(*F, y, u, v), k, 1e-14);
  try {
    sectional_curvature(R, g, u, 2 * u);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegeneratePlane);
  }
}

TEST(Tensors, IndicatrixOfEuclideanSphereHasUnitCurvature) {
  const NormPtr F = make_euclidean(Mat::Identity(3, 3));
  EXPECT_NEAR(indicatrix_sectional_curvature(*F, vec({0, 0, 2}), vec({1, 0, 0}), vec({0, 1, 0})), 1.0, 1e-12);
}

TEST(Tensors, NonPositiveDefiniteMetricIsReported) {
  const NormPtr bad = make_expression(2, Expr::parse("(* 0.5 (- (pow x1 2) (pow x2 2)))"));
  try {
    fundamental_tensor(*bad, vec({1, 0.2}));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPositiveDefinite);
  }
}
