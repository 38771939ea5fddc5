#include "support.hpp"

#include <hessiso/errors.hpp>
#include <hessiso/profile_function.hpp>

#include <gtest/gtest.h>

using namespace hessiso;
using namespace hessiso::test;

TEST(ProfileFunction, TrigDerivativesMatchClosedForm) {
  const ProfileFunction f = ProfileFunction::trig({{0.5, 0.1, 0.2}, {0.0, -0.05, 0.03}});
  for (double t : {-1.0, 0.2, 1.1, 2.9}) {
    const auto d = f.derivs(t);
    EXPECT_NEAR(d[0], 0.5 + 0.1 * std::cos(t) + 0.2 * std::cos(2 * t) - 0.05 * std::sin(t) + 0.03 * std::sin(2 * t), 1e-15);
    EXPECT_NEAR(d[1], -0.1 * std::sin(t) - 0.4 * std::sin(2 * t) - 0.05 * std::cos(t) + 0.06 * std::cos(2 * t), 1e-15);
    EXPECT_NEAR(d[3], 0.1 * std::sin(t) + 1.6 * std::sin(2 * t) + 0.05 * std::cos(t) - 0.24 * std::cos(2 * t), 1e-14);
  }
}

TEST(ProfileFunction, BumpedDerivativesAgreeWithDifferences) {
  const ProfileFunction f = ProfileFunction::bumped({{0.5}, {}}, {{0.8, 0.3, 0.02}, {2.2, 0.25, -0.01}});
  for (double t : {0.6, 0.9, 1.02, 2.1, 2.3}) {
    const auto d = f.derivs(t);
    EXPECT_NEAR(d[1], diff5([&](double s) { return f(s); }, t, 1e-4), 1e-9);
    EXPECT_NEAR(d[2], diff5([&](double s) { return f.derivs(s)[1]; }, t, 1e-4), 1e-8);
    EXPECT_NEAR(d[3], diff5([&](double s) { return f.derivs(s)[2]; }, t, 1e-4), 1e-6);
  }
}

TEST(ProfileFunction, BumpsAreCompactlySupportedAndMirrored) {
  const ProfileFunction f = ProfileFunction::bumped({{0.5}, {}}, {{1.0, 0.3, 0.05}});
  EXPECT_DOUBLE_EQ(f(0.5), 0.5);
  EXPECT_DOUBLE_EQ(f(1.4), 0.5);
  EXPECT_GT(f(1.0), 0.5);
  EXPECT_LT(f.evenness_defect(), 1e-15);
  EXPECT_DOUBLE_EQ(f(-1.0), f(1.0));
}

TEST(ProfileFunction, UnitBumpIsSmoothAtItsEdge) {
  for (int i = 0; i < 4; ++i) EXPECT_EQ(unit_bump(1.0)[i], 0.0);
  EXPECT_DOUBLE_EQ(unit_bump(0.0)[0], 1.0);
  EXPECT_LT(std::abs(unit_bump(0.999)[1]), 1e-200);
}

TEST(ProfileFunction, QuinticHermiteReproducesQuintics) {
  auto p = [](double t) { return std::array<double, 3>{t * t * t * t * t - 2 * t * t * t + t, 5 * t * t * t * t - 6 * t * t + 1,
                                                       20 * t * t * t - 12 * t}; };
  HermiteTable tab;
  for (double x : {0.0, 0.4, 1.1, 1.5}) {
    const auto v = p(x);
    tab.x.push_back(x);
    tab.f.push_back(v[0]);
    tab.d1.push_back(v[1]);
    tab.d2.push_back(v[2]);
  }
  const ProfileFunction f = ProfileFunction::tabulated(tab);
  for (double t : {0.1, 0.77, 1.3}) {
    const auto d = f.derivs(t);
    EXPECT_NEAR(d[0], p(t)[0], 1e-13);
    EXPECT_NEAR(d[1], p(t)[1], 1e-12);
    EXPECT_NEAR(d[2], p(t)[2], 1e-11);
    EXPECT_NEAR(d[3], 60 * t * t - 12, 1e-9);
  }
  ASSERT_TRUE(f.domain().has_value());
  EXPECT_THROW(f.derivs(1.6), Error);
}

TEST(ProfileFunction, RejectsInvalidConstructions) {
  EXPECT_THROW(ProfileFunction::trig({{0.5, 0.1}, {}}, Period::Pi), Error);
  EXPECT_THROW(ProfileFunction::bumped({{0.5}, {}}, {{0.1, 0.3, 0.01}}), Error);
  EXPECT_THROW(ProfileFunction::bumped({{0.5}, {}}, {{1.0, 0.0, 0.01}}), Error);
  EXPECT_THROW(ProfileFunction::tabulated({{0.0, 0.0}, {1, 1}, {0, 0}, {0, 0}}), Error);
}

TEST(ProfileFunction, MinValue) {
  EXPECT_NEAR(small_profile(0.1, 0.0).min_value(), 0.4, 1e-12);
}
