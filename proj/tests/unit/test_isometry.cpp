#include "support.hpp"

#include <hessiso/errors.hpp>
#include <hessiso/isometry.hpp>
#include <hessiso/profile.hpp>

#include <gtest/gtest.h>

using namespace hessiso;
using namespace hessiso::test;

namespace {

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "nothing thrown";
  return ErrorCode::ParseError;
}

std::vector<Vec> cone_points(Interval band, int count, double r = 1.3) {
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) {
    const double t = band.lo + band.width() * (i + 0.5) / count;
    const double phi = 0.4 + 0.37 * i;
    Vec y(3);
    y << r * std::cos(t), r * std::sin(t) * std::cos(phi), r * std::sin(t) * std::sin(phi);
    out.push_back(y);
  }
  return out;
}

}  // namespace

TEST(ThetaMaps, LinearClosedForm) {
  EXPECT_DOUBLE_EQ(linear_theta(1.0, 1.0, 0.7), 0.7);
  EXPECT_NEAR(linear_theta(2.0, 1.0, 0.25 * kPi), std::atan(0.5), 1e-15);
  // a < 0 reflects through the x₁ hyperplane.
  EXPECT_NEAR(linear_theta(-1.0, 1.0, 0.3), kPi - 0.3, 1e-15);
  for (double t : {0.2, 1.0, 2.4}) {
    const ThetaDerivs d = linear_theta_d(1.7, 0.6, t);
    EXPECT_DOUBLE_EQ(d.theta, linear_theta(1.7, 0.6, t));
    EXPECT_NEAR(d.dtheta, diff5([](double s) { return linear_theta(1.7, 0.6, s); }, t, 1e-3), 1e-10);
  }
}

TEST(ThetaMaps, LegendreDerivativeAndDegeneracy) {
  const ProfileFunction f = small_profile();
  const double tp = find_t_prime(f);
  const auto d = f.derivs(tp);
  EXPECT_NEAR(-std::sin(tp) * d[1] + 2 * std::cos(tp) * d[0], 0.0, 1e-13);
  for (double t : {0.3, 1.0, tp + 0.3, 2.7}) {
    const ThetaDerivs th = legendre_theta_d(f, 1.2, 0.9, t);
    EXPECT_DOUBLE_EQ(th.theta, legendre_theta(f, 1.2, 0.9, t));
    EXPECT_NEAR(th.dtheta, diff5([&](double s) { return legendre_theta(f, 1.2, 0.9, s); }, t, 1e-3), 1e-9);
  }
  EXPECT_EQ(code_of([&] { legendre_theta_d(f, 1.0, 1.0, tp); }), ErrorCode::DegenerateDenominator);
  // For the round profile X = cos t, so t′ = π/2.
  EXPECT_NEAR(find_t_prime(ProfileFunction::constant(0.5)), 0.5 * kPi, 1e-12);
}

TEST(ThetaMaps, ModelMapsSolveTheirBranchOdes) {
  const ProfileFunction f = small_profile(-0.05, 0.012);
  const double tp = find_t_prime(f);
  for (double t = 0.1; t < kPi - 0.1; t += 0.05) {
    if (std::abs(t - 0.5 * kPi) < 0.02) continue;
    const ThetaDerivs l = linear_theta_d(0.8, 1.4, t);
    EXPECT_NEAR(l.dtheta, ode1_rhs(t, l.theta), 1e-12 * std::max(1.0, std::abs(l.dtheta)));
    if (std::abs(t - tp) < 0.02) continue;
    const ThetaDerivs g = legendre_theta_d(f, 0.8, 1.4, t);
    EXPECT_NEAR(g.dtheta, ode2_rhs(f, t, g.theta), 1e-10 * std::max(1.0, std::abs(g.dtheta)));
  }
}

TEST(BranchQuadratic, RootsAndDiscriminant) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const ProfileFunction f = small_profile(rng.uniform(-0.08, 0.08), rng.uniform(-0.02, 0.02));
    const double tp = find_t_prime(f);
    double t, th;
    do t = rng.uniform(0.05, kPi - 0.05);
    while (std::abs(t - 0.5 * kPi) < 0.05 || std::abs(t - tp) < 0.05);
    do th = rng.uniform(0.05, kPi - 0.05);
    while (std::abs(th - 0.5 * kPi) < 0.05);
    const BranchODEs q = branch_quadratic(f, t, th);
    EXPECT_LT(q.residual(q.root_linear), 1e-10);
    EXPECT_LT(q.residual(q.root_legendre), 1e-10);
    const double scale = q.B * q.B + 4 * std::abs(q.A * q.C);
    EXPECT_LT(std::abs(q.discriminant - q.discriminant_closed), 1e-10 * scale);
    EXPECT_NEAR(q.root_linear, ode1_rhs(t, th), 1e-12 * std::max(1.0, std::abs(q.root_linear)));
    EXPECT_NEAR(q.root_legendre, ode2_rhs(f, t, th), 1e-12 * std::max(1.0, std::abs(q.root_legendre)));
    // Distinct roots exactly when the genericity value is nonzero.
    if (std::abs(q.genericity) > 1e-6) {
      EXPECT_GT(q.discriminant, 0.0);
      EXPECT_GT(std::abs(q.root_linear - q.root_legendre), 0.0);
    }
  }
}

TEST(BranchQuadratic, RootsCoincideForEuclideanProfiles) {
  const auto ep = euclidean_profile(1.0, -0.4);
  const BranchODEs q = branch_quadratic(ep.f, 0.6, 1.1);
  EXPECT_LT(std::abs(q.genericity), 1e-15);
  EXPECT_NEAR(q.root_linear, q.root_legendre, 1e-12);
  EXPECT_LT(std::abs(q.discriminant), 1e-12 * (q.B * q.B));
}

TEST(BranchQuadratic, ExcludedPointsAreDomainErrors) {
  const ProfileFunction f = small_profile();
  EXPECT_EQ(code_of([&] { branch_quadratic(f, 0.5 * kPi, 1.0); }), ErrorCode::DomainError);
  EXPECT_EQ(code_of([&] { branch_quadratic(f, 1.0, 0.5 * kPi); }), ErrorCode::DomainError);
  EXPECT_EQ(code_of([&] { branch_quadratic(f, find_t_prime(f), 1.0); }), ErrorCode::DomainError);
  EXPECT_EQ(code_of([&] { branch_quadratic(f, -0.1, 1.0); }), ErrorCode::DomainError);
}

TEST(Models, LinearExampleIsAnIsometryOntoItsTarget) {
  const ProfileFunction f = small_profile();
  const NormPtr F = make_profile(1, 3, f);
  const double a = 1.4, b = 0.7;
  const Mat M = linear_example_matrix(a, b, 1, 3);
  const NormPtr G = make_pullback(F, M.inverse());
  const auto pts = cone_points({0.2, 2.9}, 40);
  EXPECT_LT(verify_hessian_isometry(realize({LinearModel{M, std::pair{a, b}}}), *F, *G, pts).max_residual, 1e-13);
  // The target profile is the closed-form h.
  for (double th : {0.3, 1.2, 2.0}) {
    Vec z(3);
    z << std::cos(th), std::sin(th), 0.0;
    EXPECT_NEAR(eval_E(*G, z), linear_example_h(f, a, b, th), 1e-14);
  }
}

TEST(Models, LegendreExampleIsAnIsometryOntoItsTarget) {
  const ProfileFunction f = small_profile();
  const NormPtr F = make_profile(1, 3, f);
  const double a = 0.9, b = 1.6;
  const Mat D = linear_example_matrix(a, b, 1, 3);
  const NormPtr G = make_pullback(make_dual(F), D.inverse());
  const auto pts = cone_points({0.2, 2.9}, 40);
  EXPECT_LT(verify_hessian_isometry(realize({LegendreModel{F, a, b}}), *F, *G, pts).max_residual, 1e-10);
  for (double t : {0.3, 1.2, 2.0}) {
    const double th = legendre_theta(f, a, b, t);
    Vec z(3);
    z << std::cos(th), std::sin(th), 0.0;
    EXPECT_NEAR(eval_E(*G, z), legendre_example_h(f, a, b, t), 1e-12);
  }
}

TEST(Models, SolveHReproducesTheClosedFormTargets) {
  const ProfileFunction f = small_profile();
  const Interval band{0.2, 1.3};
  const double a = 1.1, b = 0.8;
  for (bool legendre : {false, true}) {
    const ThetaMap map = legendre ? legendre_theta_map(f, a, b, band) : linear_theta_map(a, b, band);
    const double t0 = 0.7;
    const double th0 = map.eval(t0).theta;
    const double h0 = legendre ? legendre_example_h(f, a, b, t0) : linear_example_h(f, a, b, th0);
    const ProfileFunction h = solve_h(f, map, h0, th0);
    for (double t = band.lo + 0.01; t < band.hi; t += 0.05) {
      const double th = map.eval(t).theta;
      const double want = legendre ? legendre_example_h(f, a, b, t) : linear_example_h(f, a, b, th);
      EXPECT_NEAR(h(th), want, 1e-8 * want) << legendre << " " << t;
      EXPECT_LT(equivariance_residual(f, h, map, t), 1e-7);
      EXPECT_LT(energy_residual(f, h, map, t), 1e-6);
    }
  }
  EXPECT_EQ(code_of([&] { solve_h(f, linear_theta_map(a, b, band), -1.0, 0.5); }), ErrorCode::NonPositiveH);
}

TEST(Models, NumericModelFromSolvedProfileIsAnIsometry) {
  const ProfileFunction f = small_profile();
  const Interval band{0.2, 1.3};
  const double a = 1.1, b = 0.8;
  const ThetaMap map = legendre_theta_map(f, a, b, band);
  const double th0 = map.eval(0.7).theta;
  const ProfileFunction h = solve_h(f, map, legendre_example_h(f, a, b, 0.7), th0);
  NumericModel nm;
  nm.theta = map;
  nm.f = f;
  nm.h = h;
  const auto pts = cone_points({0.25, 1.25}, 30);
  const auto rep = verify_hessian_isometry(realize({nm}), *make_profile(1, 3, f), *make_profile(1, 3, h), pts);
  EXPECT_LT(rep.max_residual, 1e-7);
}

TEST(Models, SampledThetaMapInterpolates) {
  const auto samples = synth_linear_samples(small_profile(), 1.3, 0.6, {0.2, 1.2}, 41);
  const ThetaMap m = sampled_theta_map(samples);
  for (double t : {0.33, 0.71, 1.05}) {
    const ThetaDerivs want = linear_theta_d(1.3, 0.6, t);
    EXPECT_NEAR(m.eval(t).theta, want.theta, 1e-6);
    EXPECT_NEAR(m.eval(t).dtheta, want.dtheta, 1e-4);
  }
}

TEST(Classify, RecoversSingleBranchParameters) {
  const ProfileFunction f = small_profile();
  const Interval band{0.15, 1.2};
  const double a = 1.35, b = 0.75;
  const Classification lin = classify(f, synth_linear_samples(f, a, b, band, 50), band);
  EXPECT_EQ(lin.verdict, Verdict::Linear);
  EXPECT_NEAR(lin.a, a, 1e-6);
  EXPECT_NEAR(lin.b, b, 1e-6);
  EXPECT_TRUE(lin.scale_fixed);
  const Classification leg = classify(f, synth_legendre_samples(f, a, b, band, 50), band);
  EXPECT_EQ(leg.verdict, Verdict::Legendre);
  EXPECT_NEAR(leg.a, a, 1e-6);
  EXPECT_NEAR(leg.b, b, 1e-6);
  // No sample is given both labels.
  for (const auto& s : leg.samples) EXPECT_NE(s.label, SampleVerdict::Label::Linear);
  EXPECT_LT(leg.max_accepted_residual, 1e-6);
  EXPECT_GT(leg.min_rejected_residual, 1e-3);
}

TEST(Classify, LocatesABranchSwitch) {
  const ProfileFunction f = small_profile();
  const Interval band{0.15, 1.2};
  const auto lin = synth_linear_samples(f, 1.2, 0.9, band, 60);
  const auto leg = synth_legendre_samples(f, 0.7, 1.5, band, 60);
  std::vector<ThetaSample> mixed;
  const double tb = 0.62;
  for (int i = 0; i < 60; ++i) mixed.push_back(lin[i].t < tb ? lin[i] : leg[i]);
  const Classification c = classify(f, mixed, band);
  ASSERT_EQ(c.verdict, Verdict::Glued);
  ASSERT_EQ(c.segments.size(), 2u);
  EXPECT_EQ(c.segments[0].branch, Branch::Linear);
  EXPECT_EQ(c.segments[1].branch, Branch::Legendre);
  ASSERT_EQ(c.boundaries.size(), 1u);
  EXPECT_LE(std::abs(c.boundaries[0] - tb), band.width() / 59);
}

TEST(Classify, SmoothMapsAcrossTheEquatorKeepOneBranch) {
  const ProfileFunction f = small_profile();
  const Interval band{1.0, 2.1};
  const Classification c = classify(f, synth_linear_samples(f, 1.2, 0.8, band, 60), band);
  EXPECT_EQ(c.verdict, Verdict::Linear);
  for (const auto& s : c.segments) EXPECT_EQ(s.branch, Branch::Linear);
}

TEST(Classify, TooFewSamples) {
  const ProfileFunction f = small_profile();
  const Interval band{0.2, 1.2};
  EXPECT_EQ(code_of([&] { classify(f, synth_linear_samples(f, 1, 1, band, 1), band); }), ErrorCode::InsufficientSamples);
}

TEST(ClassifyFlat, EuclideanBandsGiveTheLinearModel) {
  const auto ep = euclidean_profile(1.2, 0.3);
  const Interval band{0.2, 1.3};
  const FlatFit lin = classify_flat(ep.f, synth_linear_samples(ep.f, 1.5, 0.7, band, 40), band);
  EXPECT_LT(lin.fit_residual, 1e-8);
  EXPECT_NEAR(lin.c1, 1.2, 1e-10);
  EXPECT_NEAR(lin.c2, 0.3, 1e-10);
  EXPECT_LT(rel(lin.model.matrix, linear_example_matrix(1.5, 0.7, 1, 3)), 1e-6);
  const FlatFit leg = classify_flat(ep.f, synth_legendre_samples(ep.f, 1.5, 0.7, band, 40), band);
  EXPECT_LT(rel(leg.model.matrix, linear_example_matrix(1.5, 0.7, 1, 3) * 2.0 * ep.quadratic), 1e-6);
}

TEST(ClassifyFlat, CurvedProfileIsAFitFailure) {
  const ProfileFunction f = small_profile();
  const Interval band{0.2, 1.3};
  EXPECT_EQ(code_of([&] { classify_flat(f, synth_linear_samples(f, 1, 1, band, 40), band); }), ErrorCode::FitFailure);
}

TEST(Decompose, SplitsOffTheOrthogonalBlockAction) {
  const ProfileFunction f = small_profile();
  const double a = 1.3, b = 0.8, angle = 0.9;
  Mat rot = Mat::Identity(3, 3);
  rot(1, 1) = rot(2, 2) = std::cos(angle);
  rot(2, 1) = std::sin(angle);
  rot(1, 2) = -std::sin(angle);
  const Mat M = rot * linear_example_matrix(a, b, 1, 3);
  std::vector<FullSample> samples;
  for (const Vec& y : cone_points({0.2, 1.2}, 60)) samples.push_back({y, M * y, M});
  const Decomposition d = decompose(samples, 1, f);
  EXPECT_LT(d.fit_residual, 1e-10);
  EXPECT_LT(d.reconstruction_residual, 1e-10);
  EXPECT_LT(rel(d.phi1.transpose() * d.phi1, Mat::Identity(3, 3)), 1e-12);
  const Classification c = classify(f, d.phi2, {0.2, 1.2});
  EXPECT_EQ(c.verdict, Verdict::Linear);
  EXPECT_NEAR(c.a, a, 1e-6);
  EXPECT_NEAR(c.b, b, 1e-6);
}

TEST(Decompose, RejectsMapsThatMixOrbits) {
  Rng rng(3);
  const Mat M = Mat::Identity(3, 3) + 0.5 * rng.normal_mat(3, 3);
  std::vector<FullSample> samples;
  for (const Vec& y : cone_points({0.2, 1.2}, 30)) samples.push_back({y, M * y, M});
  EXPECT_EQ(code_of([&] { decompose(samples, 1, small_profile()); }), ErrorCode::NotOrbitPreserving);
}

TEST(Verdicts, Names) {
  EXPECT_EQ(to_string(Verdict::Glued), "glued");
  EXPECT_EQ(to_string(Branch::Legendre), "legendre");
}
