#include "acceptance.hpp"

#include <hessiso/constructions.hpp>
#include <hessiso/errors.hpp>
#include <hessiso/isometry.hpp>
#include <hessiso/legendre.hpp>
#include <hessiso/profile.hpp>
#include <hessiso/tensors.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hessiso::acceptance {
namespace {

constexpr double kPi = std::numbers::pi;

CriterionResult make(int id, std::string name, double metric, double threshold, bool passed, std::string detail) {
  return {id, std::move(name), passed, metric, threshold, std::move(detail)};
}

// Five-point central difference, used where an independent derivative is wanted.
template <class Fn>
double diff5(Fn&& fn, double t, double h) {
  return (-fn(t + 2 * h) + 8 * fn(t + h) - 8 * fn(t - h) + fn(t - 2 * h)) / (12 * h);
}

double min_relative_genericity(const ProfileFunction& f, Interval band, int samples = 400) {
  double m = INFINITY;
  for (int i = 0; i < samples; ++i) {
    const double t = band.lo + band.width() * i / (samples - 1);
    const auto d = f.derivs(t);
    m = std::min(m, std::abs(genericity_condition(f, t)) / (std::abs(d[0]) + std::abs(d[1]) + std::abs(d[2])));
  }
  return m;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

}  // namespace

NormPtr random_randers(Rng& rng, int n, double beta_norm) {
  Mat alpha;
  for (;;) {
    const Mat P = 0.15 * rng.normal_mat(n, n);
    alpha = Mat::Identity(n, n) + 0.5 * (P + P.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(alpha);
    if (es.eigenvalues().minCoeff() > 0.4) break;
  }
  const Vec d = rng.normal_vec(n);
  const double scale = beta_norm * rng.uniform(0.2, 1.0) / std::sqrt(d.dot(alpha.ldlt().solve(d)));
  return make_randers(alpha, scale * d, "randers");
}

ProfileFunction random_profile(Rng& rng, int harmonics, double size) {
  for (;;) {
    TrigSeries s;
    s.cos.assign(2 * harmonics + 1, 0.0);
    s.cos[0] = 0.5;
    for (int m = 1; m <= harmonics; ++m) s.cos[2 * m] = size * rng.uniform(-1.0, 1.0) / m;
    ProfileFunction f = ProfileFunction::trig(s, Period::Pi);
    bool ok = f.min_value() > 0.0;
    for (int i = 1; ok && i < 400; ++i) ok = profile_convexity_margin(f, kPi * i / 400) > 0.0;
    if (ok) return f;
  }
}

NormPtr brickell_norm() {
  return make_expression(
      3, Expr::parse("(* 0.5 (+ (pow x1 2) (pow x2 2) (pow x3 2) (* 0.5 (sqrt (+ (pow x1 4) (pow x2 4) (pow x3 4))))))"),
      {}, "brickell");
}

double curvature_scale(const NormSpec& spec, const Vec& y) {
  const Jet3 j = jet3(spec, y);
  const double gmax = j.hess.cwiseAbs().maxCoeff();
  const double cmax = 0.5 * j.third.max_abs();
  const double ginv = j.hess.inverse().cwiseAbs().maxCoeff();
  return std::max(gmax / y.squaredNorm(), cmax * cmax * ginv);
}

Vec random_point_off_axis(Rng& rng, int n, double margin) {
  for (;;) {
    Vec y = rng.normal_vec(n);
    if (y.tail(n - 1).norm() > margin * y.norm()) return y;
  }
}

// 1 -------------------------------------------------------------------------
CriterionResult criterion_legendre_isometry(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const int n = 3 + s % 3;
    const NormPtr F = random_randers(rng, n);
    std::vector<Vec> pts;
    for (int i = 0; i < 100; ++i) pts.push_back(rng.normal_vec(n));
    const auto rep = verify_hessian_isometry(legendre_map_fn(F), *F, *dual_norm(F), pts);
    worst = std::max(worst, rep.max_residual);
  }
  return make(1, "Legendre isometry", worst, 1e-6, worst < 1e-6, "20 Randers norms, n in {3,4,5}, 100 points each");
}

// 2 -------------------------------------------------------------------------
CriterionResult criterion_curvature_formula(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<NormPtr, bool>> specs;  // (norm, needs off-axis points)
  specs.emplace_back(random_randers(rng, 3), false);
  specs.emplace_back(random_randers(rng, 4), false);
  specs.emplace_back(make_profile(1, 3, random_profile(rng, 3, 0.08)), true);
  specs.emplace_back(make_profile(2, 4, ProfileFunction::trig({{0.5, 0, 0.08, 0, 0.02}, {}}, Period::Pi)), false);
  specs.emplace_back(brickell_norm(), false);
  specs.emplace_back(
      make_expression(3, Expr::parse("(+ (* 0.5 (+ (pow x1 2) (pow x2 2) (pow x3 2))) (* 0.3 (/ (+ (pow x1 4) (pow x2 4) "
                                     "(pow x3 4)) (+ (pow x1 2) (pow x2 2) (pow x3 2)))))")),
      false);
  specs.emplace_back(make_pullback(make_profile(1, 3, random_profile(rng)), Mat::Identity(3, 3) + 0.2 * rng.normal_mat(3, 3)),
                     false);
  specs.emplace_back(dual_norm(random_randers(rng, 3)), false);
  specs.emplace_back(random_randers(rng, 5), false);
  specs.emplace_back(dual_norm(make_profile(1, 3, random_profile(rng))), true);

  double worst = 0.0;
  int evaluated = 0;
  std::string per_norm;
  for (const auto& [F, off_axis] : specs) {
    const int n = F->dim();
    double norm_worst = 0.0;
    for (int i = 0; i < 10;) {
      const Vec y = off_axis ? random_point_off_axis(rng, n, 0.2) : rng.normal_vec(n);
      // The pullback has its own axis, M⁻¹e₁; stay away from it too.
      if (const auto* pb = std::get_if<PullbackNorm>(&F->v)) {
        const Vec z = pb->M * y;
        if (z.tail(n - 1).norm() < 0.2 * z.norm()) continue;
      }
      const auto R = curvature_tensor(*F, y);
      const auto Rfd = fd_riemann_oracle(*F, y);
      // R vanishes at isolated points, so a bare max|R| is no yardstick there.
      const double scale = std::max(tensor_scale(R.R.data(), Rfd.R.data()), curvature_scale(*F, y));
      norm_worst = std::max(norm_worst, max_abs_diff(R.R.data(), Rfd.R.data()) / scale);
      ++evaluated;
      ++i;
    }
    per_norm += fmt::format(" {}:{:.1e}", F->id, norm_worst);
    worst = std::max(worst, norm_worst);
  }
  return make(2, "Curvature formula vs finite-difference Riemann tensor", worst, 1e-4, worst < 1e-4,
              fmt::format("{} norms x 10 points = {} evaluations, error relative to max(|R|, |C|^2 |g^-1|, |g|/|y|^2);{}",
                          specs.size(), evaluated, per_norm));
}

// 3 -------------------------------------------------------------------------
CriterionResult criterion_euclidean_flatness(std::uint64_t seed) {
  Rng rng(seed);
  const double c1 = 1.0, c2 = 0.3;
  const auto ep = euclidean_profile(c1, c2, 3);
  double worst_R = 0.0;
  for (int i = 0; i < 500; ++i) {
    const double t = kPi * (i + 0.5) / 500;
    worst_R = std::max(worst_R, std::abs(curvature_component(ep.f, 1.0, t)));
  }
  const NormPtr F = make_profile(1, 3, ep.f);
  double worst_E = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Vec y = random_point_off_axis(rng, 3, 0.01);
    const double closed = (c1 + c2) * y(0) * y(0) + (c1 - c2) * (y(1) * y(1) + y(2) * y(2));
    worst_E = std::max(worst_E, rel_err(eval_E(*F, y), closed));
    worst_E = std::max(worst_E, rel_err(y.dot(ep.quadratic * y), closed));
  }
  const bool ok = worst_R < 1e-10 && worst_E < 1e-12;
  return make(3, "Euclidean-profile flatness", worst_R, 1e-10, ok,
              fmt::format("f = 1 + 0.3 cos 2t, 500 angles; E reconstruction rel err {:.3g} (< 1e-12)", worst_E));
}

// 4 -------------------------------------------------------------------------
CriterionResult criterion_three_term_profile() {
  const auto tp = three_term_profile(1.0, 0.2, 0.1);
  const NormPtr F = make_profile(1, 3, tp.f);
  double worst = 0.0, worst_cartesian = 0.0, chart_err = 0.0;
  int points = 0;
  for (const auto& iv : tp.report.valid) {
    for (int i = 0; i < 500; ++i) {
      const double t = iv.lo + iv.width() * (i + 0.5) / 500;
      if (t <= 0.0 || t >= kPi) continue;
      const double R = curvature_component(tp.f, 1.0, t);
      worst = std::max(worst, std::abs(R));
      ++points;
      if (i % 25 != 0) continue;
      // The same component from the Cartesian tensor, pulled back through the chart.
      const Tensor4 Rc = curvature_tensor(*F, chart_point(1.0, t)).R.transformed(chart_jacobian(1.0, t));
      worst_cartesian = std::max(worst_cartesian, std::abs(Rc(1, 2, 2, 1)));
      chart_err = std::max(chart_err, std::abs(Rc(1, 2, 2, 1) - R));
    }
  }
  bool sign_change = !tp.report.phiphi_roots.empty();
  double root_err = INFINITY;
  if (sign_change && !tp.report.analytic_roots.empty())
    root_err = std::abs(tp.report.phiphi_roots.front() - tp.report.analytic_roots.front());
  // g_φφ against 2r² sinθ[(c₁−c₂) sinθ + c₃ cosθ] at r = 1.
  double formula_err = 0.0;
  for (int i = 1; i < 200; ++i) {
    const double t = kPi * i / 200;
    const double closed = 2.0 * std::sin(t) * (0.8 * std::sin(t) + 0.1 * std::cos(t));
    formula_err = std::max(formula_err, std::abs(spherical_metric(tp.f, 1.0, t).g_phiphi - closed));
  }
  const bool ok = worst < 1e-9 && !tp.report.valid.empty() && sign_change && root_err < 1e-9 && formula_err < 1e-12;
  return make(4, "Three-term profile c1 + c2 cos 2t + c3 sin 2t", worst, 1e-9, ok,
              fmt::format("{} valid interval(s), {} points; Cartesian max|R_tppt| {:.3g} (chart err {:.2g}); "
                          "g_phiphi root {:.12f} (analytic err {:.2g}), closed-form err {:.2g}",
                          tp.report.valid.size(), points, worst_cartesian, chart_err,
                          sign_change ? tp.report.phiphi_roots.front() : NAN, root_err, formula_err));
}

// 5 -------------------------------------------------------------------------
CriterionResult criterion_branch_quadratic(std::uint64_t seed) {
  Rng rng(seed);
  double worst_root = 0.0, worst_disc = 0.0;
  int sign_violations = 0, generic = 0, flat = 0;
  for (int i = 0; i < 1000; ++i) {
    ProfileFunction f = ProfileFunction::constant(0.5);
    if (i % 10 == 0) {
      const double c1 = rng.uniform(0.5, 2.0);
      f = euclidean_profile(c1, c1 * rng.uniform(-0.8, 0.8)).f;
    } else {
      f = random_profile(rng, 3, 0.08);
    }
    const double tp = find_t_prime(f);
    double t, th;
    do t = rng.uniform(0.05, kPi - 0.05);
    while (std::abs(t - 0.5 * kPi) < 0.05 || std::abs(t - tp) < 0.05);
    do th = rng.uniform(0.05, kPi - 0.05);
    while (std::abs(th - 0.5 * kPi) < 0.05);

    const BranchODEs q = branch_quadratic(f, t, th);
    worst_root = std::max({worst_root, q.residual(q.root_linear), q.residual(q.root_legendre)});
    const double scale = q.B * q.B + 4.0 * std::abs(q.A * q.C);
    worst_disc = std::max(worst_disc, std::abs(q.discriminant - q.discriminant_closed) / scale);

    const auto d = f.derivs(t);
    const double g_rel = std::abs(q.genericity) / (std::abs(d[0]) + std::abs(d[1]) + std::abs(d[2]));
    if (g_rel > 1e-8) {
      ++generic;
      if (!(q.discriminant > 0.0)) ++sign_violations;
    } else {
      ++flat;
      if (std::abs(q.discriminant) / scale > 1e-8) ++sign_violations;
    }
  }
  const bool ok = worst_root < 1e-10 && worst_disc < 1e-10 && sign_violations == 0;
  return make(5, "Quadratic-branch identities", std::max(worst_root, worst_disc), 1e-10, ok,
              fmt::format("root residual {:.3g}, discriminant match {:.3g}, {} generic / {} flat samples, {} sign "
                          "violations",
                          worst_root, worst_disc, generic, flat, sign_violations));
}

// 6 -------------------------------------------------------------------------
CriterionResult criterion_ode_conformance(std::uint64_t seed) {
  Rng rng(seed);
  double worst1 = 0.0, worst2 = 0.0;
  const double h = 1e-3, guard = 0.02;
  for (int s = 0; s < 20; ++s) {
    const ProfileFunction f = random_profile(rng, 3, 0.08);
    const double a = rng.uniform(0.5, 2.0) * (s % 4 == 3 ? -1.0 : 1.0), b = rng.uniform(0.5, 2.0);
    const double tp = find_t_prime(f);
    for (int i = 0; i < 200; ++i) {
      const double t = guard + (kPi - 2 * guard) * (i + 0.5) / 200;
      if (std::abs(t - 0.5 * kPi) < guard) continue;
      const double th1 = linear_theta(a, b, t);
      const double d1 = diff5([&](double x) { return linear_theta(a, b, x); }, t, h);
      worst1 = std::max(worst1, std::abs(d1 - ode1_rhs(t, th1)) / std::max(1.0, std::abs(d1)));
      if (std::abs(t - tp) < guard) continue;
      const double th2 = legendre_theta(f, a, b, t);
      const double d2 = diff5([&](double x) { return legendre_theta(f, a, b, x); }, t, h);
      worst2 = std::max(worst2, std::abs(d2 - ode2_rhs(f, t, th2)) / std::max(1.0, std::abs(d2)));
    }
  }
  const double worst = std::max(worst1, worst2);
  return make(6, "ODE conformance", worst, 1e-8, worst < 1e-8,
              fmt::format("linear/ODE-1 {:.3g}, Legendre/ODE-2 {:.3g}; 20 profiles x 200 angles", worst1, worst2));
}

// 7 -------------------------------------------------------------------------
CriterionResult criterion_classification(std::uint64_t seed) {
  Rng rng(seed);
  int correct = 0, total = 0;
  double worst_param = 0.0;
  const int count = 60;
  for (int s = 0; s < 100; ++s) {
    const bool legendre = s >= 50;
    ProfileFunction f = ProfileFunction::constant(0.5);
    Interval band;
    for (;;) {
      f = random_profile(rng, 3, 0.1);
      const double tp = find_t_prime(f);
      band = {0.15, std::min(1.35, tp - 0.1)};
      if (min_relative_genericity(f, band) > 1e-3) break;
    }
    const double a = rng.uniform(0.5, 2.0), b = rng.uniform(0.5, 2.0);
    const auto samples = legendre ? synth_legendre_samples(f, a, b, band, count) : synth_linear_samples(f, a, b, band, count);
    const Classification c = classify(f, samples, band);
    ++total;
    const Verdict want = legendre ? Verdict::Legendre : Verdict::Linear;
    if (c.verdict == want) {
      const double e = std::max(rel_err(c.a, a), rel_err(c.b, b));
      worst_param = std::max(worst_param, e);
      if (e < 1e-5) ++correct;
    }
  }

  // Switch from the linear to the Legendre branch at t_b; the boundary must land within
  // one grid step.
  int glued_ok = 0, glued_total = 0;
  double worst_boundary = 0.0;
  for (int s = 0; s < 10; ++s) {
    ProfileFunction f = ProfileFunction::constant(0.5);
    Interval band;
    for (;;) {
      f = random_profile(rng, 3, 0.1);
      band = {0.15, std::min(1.35, find_t_prime(f) - 0.1)};
      if (min_relative_genericity(f, band) > 1e-3) break;
    }
    const double tb = band.lo + band.width() * rng.uniform(0.3, 0.7);
    const double a1 = rng.uniform(0.5, 2.0), b1 = rng.uniform(0.5, 2.0);
    const double a2 = rng.uniform(0.5, 2.0), b2 = rng.uniform(0.5, 2.0);
    const auto lin = synth_linear_samples(f, a1, b1, band, count);
    const auto leg = synth_legendre_samples(f, a2, b2, band, count);
    std::vector<ThetaSample> mixed;
    for (int i = 0; i < count; ++i) mixed.push_back(lin[i].t < tb ? lin[i] : leg[i]);
    const Classification c = classify(f, mixed, band);
    ++glued_total;
    const double step = band.width() / (count - 1);
    if (c.verdict == Verdict::Glued && c.boundaries.size() == 1) {
      const double err = std::abs(c.boundaries[0] - tb);
      worst_boundary = std::max(worst_boundary, err / step);
      if (err <= step) ++glued_ok;
    }
  }

  // The glued construction itself: decompose, then classify its ξ-fixing factor.
  GlueOptions go;
  go.u1 = Interval{0.3, 1.0};
  go.u2 = Interval{2.0, 2.7};
  const GluedConstruction gc = build_glued(go);
  std::vector<FullSample> full;
  const int gcount = 240;
  for (int i = 0; i < gcount; ++i) {
    const double t = 0.08 + (kPi - 0.16) * i / (gcount - 1);
    const double phi = 0.7 + 0.01 * i;
    Vec y(3);
    y << std::cos(t), std::sin(t) * std::cos(phi), std::sin(t) * std::sin(phi);
    const MapSample m = gc.map(y);
    full.push_back({y, m.image, m.jacobian});
  }
  const auto& f1 = std::get<ProfileNorm>(gc.f1->v).f;
  const Decomposition dec = decompose(full, 1, f1);
  const Classification gcl = classify(f1, dec.phi2, {0.05, kPi - 0.05});
  const double gap_lo = go.u1->lo + 0.5 * go.u1->width() * (1 + go.support_fraction);
  const double gap_hi = go.u2->lo + 0.5 * go.u2->width() * (1 - go.support_fraction);
  const bool construction_ok = gcl.verdict == Verdict::Glued && gcl.segments.size() == 2 &&
                               gcl.segments[0].branch == Branch::Linear && gcl.segments[1].branch == Branch::Legendre &&
                               gcl.boundaries.size() == 1 && gcl.boundaries[0] > gap_lo && gcl.boundaries[0] < gap_hi;

  const bool ok = correct == total && glued_ok == glued_total && construction_ok;
  return make(7, "Classification", worst_param, 1e-5, ok,
              fmt::format("{}/{} single-branch verdicts, {}/{} switched maps located (worst {:.2f} grid steps), glued "
                          "construction {} ({} segments)",
                          correct, total, glued_ok, glued_total, worst_boundary, construction_ok ? "ok" : "FAILED",
                          gcl.segments.size()));
}

// 8 -------------------------------------------------------------------------
CriterionResult criterion_flat_regime(std::uint64_t seed) {
  Rng rng(seed);
  double worst_fit = 0.0, worst_model = 0.0;
  int ok_count = 0;
  const int trials = 10;
  for (int s = 0; s < trials; ++s) {
    const double c1 = rng.uniform(0.5, 2.0), c2 = c1 * rng.uniform(-0.7, 0.7);
    const auto ep = euclidean_profile(c1, c2, 3);
    const double a = rng.uniform(0.5, 2.0), b = rng.uniform(0.5, 2.0);
    const Interval band{0.2, 1.3};
    const bool legendre = s % 2 == 1;
    const auto samples = legendre ? synth_legendre_samples(ep.f, a, b, band, 40) : synth_linear_samples(ep.f, a, b, band, 40);
    try {
      const FlatFit fit = classify_flat(ep.f, samples, band);
      // The Legendre example of a Euclidean norm is the linear map D·2Q.
      Mat want = linear_example_matrix(a, b, 1, 3);
      if (legendre) want = want * 2.0 * ep.quadratic;
      const double model_err = (fit.model.matrix - want).norm() / want.norm();
      worst_fit = std::max(worst_fit, fit.fit_residual);
      worst_model = std::max(worst_model, model_err);
      if (fit.fit_residual < 1e-8 && model_err < 1e-6) ++ok_count;
    } catch (const Error&) {
    }
  }
  return make(8, "Flat regime (genericity identically zero)", worst_fit, 1e-8, ok_count == trials,
              fmt::format("{}/{} bands confirmed Euclidean with linear model (worst matrix err {:.3g})", ok_count, trials,
                          worst_model));
}

// 9 -------------------------------------------------------------------------
CriterionResult criterion_two_d(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<NormPtr> norms;
  norms.push_back(make_euclidean(Mat::Identity(2, 2) + 0.3 * Mat::Identity(2, 2)));
  norms.push_back(random_randers(rng, 2));
  norms.push_back(random_randers(rng, 2, 0.9));
  norms.push_back(make_expression(
      2, Expr::parse("(+ (* 0.5 (+ (pow x1 2) (pow x2 2))) (* 0.2 (/ (+ (pow x1 4) (pow x2 4)) (+ (pow x1 2) (pow x2 2)))))")));
  norms.push_back(make_pullback(norms[1], Mat::Identity(2, 2) + 0.3 * rng.normal_mat(2, 2)));

  double worst_R = 0.0;
  for (const auto& F : norms)
    for (int i = 0; i < 50; ++i) {
      const Vec y = rng.normal_vec(2);
      worst_R = std::max(worst_R, curvature_tensor(*F, y).R.max_abs() / curvature_scale(*F, y));
    }

  double worst_len = 0.0, worst_iso = 0.0;
  int iff_violations = 0;
  std::vector<double> lengths;
  for (std::size_t k = 1; k < norms.size(); ++k) {
    const NormPtr& F = norms[k];
    const double L = polar_chart_2d(F).length;
    lengths.push_back(L);
    for (int i = 0; i < 20; ++i) {
      Mat A;
      do A = rng.normal_mat(2, 2);
      while (std::abs(A.determinant()) < 0.3 || A.norm() * A.inverse().norm() > 10.0);
      const NormPtr G = make_pullback(F, A);
      const double LG = polar_chart_2d(G).length;
      worst_len = std::max(worst_len, std::abs(LG - L));
      if (i < 3) {
        try {
          const TwoDIsometry iso = two_d_isometry(G, F);
          std::vector<Vec> pts;
          for (int j = 0; j < 30; ++j) pts.push_back(rng.normal_vec(2));
          worst_iso = std::max(worst_iso, verify_hessian_isometry(iso.map, *G, *F, pts).max_residual);
          if (!(std::abs(LG - L) < 1e-8)) ++iff_violations;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::LengthMismatch || std::abs(LG - L) < 1e-8) ++iff_violations;
        }
      }
    }
  }
  // Pairs of different norms: the map exists only when the lengths agree.
  for (std::size_t i = 1; i < norms.size(); ++i)
    for (std::size_t j = i + 1; j < norms.size(); ++j) {
      const bool same = std::abs(lengths[i - 1] - lengths[j - 1]) < 1e-8;
      try {
        two_d_isometry(norms[i], norms[j]);
        if (!same) ++iff_violations;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::LengthMismatch || same) ++iff_violations;
      }
    }

  const bool ok = worst_R < 1e-9 && worst_len < 1e-8 && worst_iso < 1e-6 && iff_violations == 0;
  return make(9, "2-D flatness and arclength invariant", worst_R, 1e-9, ok,
              fmt::format("|L(F∘A) − L(F)| {:.3g} (< 1e-8) over 20 maps x {} norms, isometry residual {:.3g} (< 1e-6), "
                          "{} iff violations",
                          worst_len, norms.size() - 1, worst_iso, iff_violations));
}

// 10 ------------------------------------------------------------------------
CriterionResult criterion_brickell(std::uint64_t seed) {
  Rng rng(seed);
  const NormPtr F = brickell_norm();
  double best = 0.0;
  Vec witness;
  for (int i = 0; i < 50; ++i) {
    const Vec y = rng.normal_vec(3);
    const double r = curvature_tensor(*F, y).R.max_abs() / curvature_scale(*F, y);
    if (r > best) {
      best = r;
      witness = y;
    }
  }
  const Vec u = witness / witness.norm();
  return make(10, "Brickell non-flatness witness", best, 1e-6, best > 1e-6,
              fmt::format("max |R|/scale at y = ({:.4f}, {:.4f}, {:.4f})", u(0), u(1), u(2)));
}

// 11 ------------------------------------------------------------------------
CriterionResult criterion_glued(std::uint64_t seed) {
  Rng rng(seed);
  GlueOptions go;
  go.u1 = Interval{0.3, 1.0};
  go.u2 = Interval{2.0, 2.7};
  const GluedConstruction gc = build_glued(go);

  // Dense near the bump supports and the cone walls, plus a uniform sweep.
  std::vector<double> angles;
  for (int i = 0; i < 200; ++i) angles.push_back(0.05 + (kPi - 0.1) * i / 199);
  std::vector<double> edges;
  for (const auto& b : gc.bumps) {
    edges.push_back(b.support().lo);
    edges.push_back(b.support().hi);
  }
  for (const auto* c : {&gc.identity_cone, &gc.dual_cone})
    if (*c) {
      edges.push_back((*c)->lo);
      edges.push_back((*c)->hi);
    }
  for (double e : edges)
    for (int k = -10; k <= 10; ++k) angles.push_back(e + 1e-3 * k);
  std::vector<Vec> pts;
  for (double t : angles) {
    const double phi = rng.uniform(0.0, 2.0 * kPi), r = rng.uniform(0.5, 2.0);
    Vec y(3);
    y << r * std::cos(t), r * std::sin(t) * std::cos(phi), r * std::sin(t) * std::sin(phi);
    pts.push_back(y);
  }
  const auto rep = verify_hessian_isometry(gc.map, *gc.f1, *gc.f2, pts);

  // A linear isometry agreeing with the identity on the open cone C(U₁) is the identity.
  double nonlinear = 0.0, non_legendre = 0.0;
  for (const Vec& y : pts) {
    const Vec img = gc.map(y).image;
    nonlinear = std::max(nonlinear, (img - y).norm() / y.norm());
    non_legendre = std::max(non_legendre, (img - legendre_map(*gc.f1, y)).norm() / y.norm());
  }
  const double jump = glued_boundary_jump(gc);
  const bool ok = rep.max_residual < 1e-7 && nonlinear > 1e-4 && non_legendre > 1e-4 && jump < 1e-8;
  return make(11, "Glued nonlinear non-Legendre isometry", rep.max_residual, 1e-7, ok,
              fmt::format("epsilon {:.4g} after {} halvings, {} samples; nonlinearity {:.3g}, distance from Legendre "
                          "{:.3g} (> 1e-4), boundary jump {:.3g} (< 1e-8)",
                          gc.epsilon, gc.halvings, pts.size(), nonlinear, non_legendre, jump));
}

std::vector<CriterionResult> run_all(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  auto guarded = [&](int id, const char* name, auto&& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back(make(id, name, NAN, NAN, false, std::string("threw ") + e.what()));
    }
  };
  guarded(1, "Legendre isometry", [&] { return criterion_legendre_isometry(seed + 1); });
  guarded(2, "Curvature formula vs finite-difference Riemann tensor", [&] { return criterion_curvature_formula(seed + 2); });
  guarded(3, "Euclidean-profile flatness", [&] { return criterion_euclidean_flatness(seed + 3); });
  guarded(4, "Three-term profile c1 + c2 cos 2t + c3 sin 2t", [&] { return criterion_three_term_profile(); });
  guarded(5, "Quadratic-branch identities", [&] { return criterion_branch_quadratic(seed + 5); });
  guarded(6, "ODE conformance", [&] { return criterion_ode_conformance(seed + 6); });
  guarded(7, "Classification", [&] { return criterion_classification(seed + 7); });
  guarded(8, "Flat regime (genericity identically zero)", [&] { return criterion_flat_regime(seed + 8); });
  guarded(9, "2-D flatness and arclength invariant", [&] { return criterion_two_d(seed + 9); });
  guarded(10, "Brickell non-flatness witness", [&] { return criterion_brickell(seed + 10); });
  guarded(11, "Glued nonlinear non-Legendre isometry", [&] { return criterion_glued(seed + 11); });
  return out;
}

std::string format(const CriterionResult& r) {
  return fmt::format("[{}] {:>2} {}: metric={:.3g} threshold={:.3g} ({})", r.passed ? "PASS" : "FAIL", r.id, r.name,
                     r.metric, r.threshold, r.detail);
}

}  // namespace hessiso::acceptance
