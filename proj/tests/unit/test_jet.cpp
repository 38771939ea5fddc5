#include "support.hpp"

#include <hessiso/errors.hpp>
#include <hessiso/jet.hpp>

#include <gtest/gtest.h>

using namespace hessiso;
using namespace hessiso::test;

namespace {

// f(x, y) = x²y + sin-free rational pieces, with hand-written derivatives.
Jet3 cubic_jet(double x, double y) {
  const Jet3 X = Jet3::variable(2, 0, x), Y = Jet3::variable(2, 1, y);
  return X * X * Y + 3.0 * Y * Y * Y;
}

}  // namespace

TEST(Jet, PolynomialMatchesHandDerivatives) {
  const double x = 0.7, y = -1.3;
  const Jet3 j = cubic_jet(x, y);
  EXPECT_DOUBLE_EQ(j.value, x * x * y + 3 * y * y * y);
  EXPECT_DOUBLE_EQ(j.grad(0), 2 * x * y);
  EXPECT_DOUBLE_EQ(j.grad(1), x * x + 9 * y * y);
  EXPECT_DOUBLE_EQ(j.hess(0, 0), 2 * y);
  EXPECT_DOUBLE_EQ(j.hess(0, 1), 2 * x);
  EXPECT_DOUBLE_EQ(j.hess(1, 1), 18 * y);
  EXPECT_DOUBLE_EQ(j.third(0, 0, 1), 2.0);
  EXPECT_DOUBLE_EQ(j.third(1, 0, 0), 2.0);
  EXPECT_DOUBLE_EQ(j.third(1, 1, 1), 18.0);
  EXPECT_DOUBLE_EQ(j.third(0, 0, 0), 0.0);
}

TEST(Jet, ElementaryFunctionsAgreeWithFiniteDifferences) {
  const Vec p = vec({0.4, 0.9, 1.3});
  // A composite that touches every operation.
  auto build = [](const Vec& z) {
    const int n = 3;
    const Jet3 a = Jet3::variable(n, 0, z(0)), b = Jet3::variable(n, 1, z(1)), c = Jet3::variable(n, 2, z(2));
    const Jet3 r = sqrt(a * a + b * b + c * c);
    return exp(-0.3 * a) * pow(r, 2.5) + atan(b / c) + atan2(b, a) * reciprocal(c + 2.0) - pow(c, 3.0);
  };
  const Jet3 j = build(p);
  auto value = [&](const Vec& z) { return build(z).value; };
  auto grad = [&](const Vec& z) { return Vec(build(z).grad); };
  EXPECT_LT((j.grad - fd_gradient(value, p, 1e-3)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(rel(j.hess, fd_jacobian(grad, p, 1e-3)), 1e-10);
  for (int i = 0; i < 3; ++i) {
    auto hess_col = [&](const Vec& z) { return Vec(build(z).hess.col(i)); };
    const Mat d = fd_jacobian(hess_col, p, 1e-3);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) EXPECT_NEAR(j.third(i, a, b), d(a, b), 1e-8) << i << a << b;
  }
}

TEST(Jet, ThirdDerivativeIsSymmetric) {
  const Jet3 a = Jet3::variable(3, 0, 0.3), b = Jet3::variable(3, 1, -0.8), c = Jet3::variable(3, 2, 1.1);
  const Jet3 j = pow(a * a + 2.0 * b * b + c * c, 1.5) / (a + 3.0);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        EXPECT_DOUBLE_EQ(j.third(i, k, l), j.third(k, i, l));
        EXPECT_DOUBLE_EQ(j.third(i, k, l), j.third(i, l, k));
      }
}

TEST(Jet, ComposeMatchesChainRule) {
  const Jet3 x = Jet3::variable(1, 0, 0.6);
  const double e = std::exp(0.6);
  const Jet3 j = compose(x, {e, e, e, e});
  EXPECT_DOUBLE_EQ(j.value, e);
  EXPECT_DOUBLE_EQ(j.grad(0), e);
  EXPECT_DOUBLE_EQ(j.hess(0, 0), e);
  EXPECT_DOUBLE_EQ(j.third(0, 0, 0), e);
}

TEST(Jet, NonSmoothArgumentsThrow) {
  const Jet3 z = Jet3::variable(2, 0, 0.0);
  EXPECT_THROW(sqrt(z), Error);
  EXPECT_THROW(reciprocal(z), Error);
  EXPECT_THROW(pow(z + (-1.0), 0.5), Error);
  try {
    sqrt(z);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonSmoothPoint);
  }
}
