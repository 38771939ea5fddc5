#include "hessiso/profile.hpp"

#include "hessiso/errors.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>

namespace hessiso {
namespace {

constexpr double kPi = std::numbers::pi;

void check_chart(double r, double theta) {
  if (!(r > 0.0)) throw Error(ErrorCode::DomainError, "chart radius must be positive");
  if (!(theta > 0.0 && theta < kPi)) throw Error(ErrorCode::DomainError, "chart angle must lie in (0, π)");
}

// min of the three leading minors (with r = 1) of the spherical metric; positive iff g > 0.
double definiteness_margin(const ProfileFunction& f, double theta) {
  const auto g = spherical_metric(f, 1.0, theta);
  return std::min({g.g_rr, g.block_det(), g.g_phiphi});
}

}  // namespace

Mat SphericalMetric3::matrix() const {
  Mat m = Mat::Zero(3, 3);
  m(0, 0) = g_rr;
  m(0, 1) = m(1, 0) = g_rtheta;
  m(1, 1) = g_thetatheta;
  m(2, 2) = g_phiphi;
  return m;
}

double SphericalMetric3::inv_thetatheta() const {
  const double det = block_det();
  if (det == 0.0) throw Error(ErrorCode::NotPositiveDefinite, "degenerate (r,θ) block");
  return g_rr / det;
}

SphericalMetric3 spherical_metric(const ProfileFunction& f, double r, double theta) {
  check_chart(r, theta);
  const auto [f0, f1, f2, f3] = f.derivs(theta);
  (void)f3;
  const double s = std::sin(theta), c = std::cos(theta);
  return {2.0 * f0, r * f1, r * r * (2.0 * f0 + f2), r * r * (2.0 * s * s * f0 + s * c * f1)};
}

SphericalCartan spherical_cartan(const ProfileFunction& f, double r, double theta) {
  check_chart(r, theta);
  const auto [f0, f1, f2, f3] = f.derivs(theta);
  (void)f0;
  const double r2 = r * r;
  return {2.0 * r2 * f1 + 0.5 * r2 * f3, -0.5 * r2 * std::cos(2.0 * theta) * f1 + 0.25 * r2 * std::sin(2.0 * theta) * f2};
}

double curvature_component(const ProfileFunction& f, double r, double theta) {
  const auto g = spherical_metric(f, r, theta);
  const auto C = spherical_cartan(f, r, theta);
  // g^θφ = 0 and C_r·· = C_θθφ = 0 leave two terms, the second from a = b = φ.
  return C.ttt * g.inv_thetatheta() * C.tpp - C.tpp * C.tpp / g.g_phiphi;
}

double genericity_condition(const ProfileFunction& f, double t) {
  const auto d = f.derivs(t);
  const double s = std::sin(t), c = std::cos(t);
  return -c * s * d[2] + (c * c - s * s) * d[1];
}

double d_theta_cartan_tpp(const ProfileFunction& f, double r, double theta) {
  check_chart(r, theta);
  const auto d = f.derivs(theta);
  const double r2 = r * r, s2 = std::sin(2.0 * theta), c2 = std::cos(2.0 * theta);
  // Product rule on −½cos2θ·f′ and ¼sin2θ·f″.
  return r2 * (s2 * d[1] - 0.5 * c2 * d[2] + 0.5 * c2 * d[2] + 0.25 * s2 * d[3]);
}

Mat chart_jacobian(double r, double theta) {
  const double s = std::sin(theta), c = std::cos(theta);
  Mat J = Mat::Zero(3, 3);
  J.col(0) << c, s, 0.0;
  J.col(1) << -r * s, r * c, 0.0;
  J.col(2) << 0.0, 0.0, r * s;
  return J;
}

Vec chart_point(double r, double theta) {
  Vec y(3);
  y << r * std::cos(theta), r * std::sin(theta), 0.0;
  return y;
}

EuclideanProfile euclidean_profile(double c1, double c2, int n) {
  if (!(c1 > std::abs(c2))) throw Error(ErrorCode::NotConvex, "Euclidean profile needs c1 > |c2|");
  if (n < 2) throw Error(ErrorCode::InvalidSpec, "dimension must be at least 2");
  Mat Q = Mat::Identity(n, n) * (c1 - c2);
  Q(0, 0) = c1 + c2;
  return {ProfileFunction::trig({{c1, 0.0, c2}, {}}, Period::Pi), Q};
}

double euclidean_ode_residual(const ProfileFunction& f, double theta) {
  const auto d = f.derivs(theta);
  return 2.0 * std::cos(2.0 * theta) * d[1] - std::sin(2.0 * theta) * d[2];
}

std::vector<Interval> validity_intervals(const ProfileFunction& f, int samples) {
  const double eps = 1e-6;
  std::vector<Interval> out;
  auto refine = [&](double a, double b) {
    // a and b have opposite margin signs.
    const bool a_pos = definiteness_margin(f, a) > 0.0;
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      const double m = 0.5 * (a + b);
      if ((definiteness_margin(f, m) > 0.0) == a_pos)
        a = m;
      else
        b = m;
    }
    return 0.5 * (a + b);
  };
  double prev_t = eps;
  bool prev_ok = definiteness_margin(f, prev_t) > 0.0;
  double start = prev_ok ? 0.0 : NAN;
  for (int i = 1; i < samples; ++i) {
    const double t = eps + (kPi - 2.0 * eps) * i / (samples - 1);
    const bool ok = definiteness_margin(f, t) > 0.0;
    if (ok != prev_ok) {
      const double edge = refine(prev_t, t);
      if (ok)
        start = edge;
      else
        out.push_back({start, edge});
    }
    prev_t = t;
    prev_ok = ok;
  }
  if (prev_ok) out.push_back({start, kPi});
  return out;
}

ThreeTermProfile three_term_profile(double c1, double c2, double c3) {
  if (!(c1 > 0.0)) throw Error(ErrorCode::InvalidSpec, "three-term profile needs c1 > 0");
  ThreeTermProfile out{ProfileFunction::trig({{c1, 0.0, c2}, {0.0, 0.0, c3}}, Period::Pi), {}};
  auto& rep = out.report;
  rep.block_det_over_r2 = 4.0 * (c1 * c1 - c2 * c2 - c3 * c3);
  rep.valid = validity_intervals(out.f);

  auto phiphi = [&](double t) { return spherical_metric(out.f, 1.0, t).g_phiphi; };
  const int N = 2001;
  const double eps = 1e-6;
  double a = eps, fa = phiphi(a);
  for (int i = 1; i < N; ++i) {
    const double b = eps + (kPi - 2.0 * eps) * i / (N - 1);
    const double fb = phiphi(b);
    if ((fa > 0.0) != (fb > 0.0)) {
      double lo = a, hi = b;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double m = 0.5 * (lo + hi);
        if ((phiphi(m) > 0.0) == (fa > 0.0))
          lo = m;
        else
          hi = m;
      }
      rep.phiphi_roots.push_back(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }

  if (c3 != 0.0) {
    double root = std::atan2(-c3, c1 - c2);
    if (root <= 0.0) root += kPi;
    if (root >= kPi) root -= kPi;
    rep.analytic_roots.push_back(root);
  }
  return out;
}

std::vector<ProfileGridRow> profile_grid(const ProfileFunction& f, double lo, double hi, int samples, double r) {
  std::vector<ProfileGridRow> rows;
  const double eps = 1e-6;
  for (int i = 0; i < samples; ++i) {
    const double t = samples == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (samples - 1);
    if (t < eps || t > kPi - eps || std::abs(t - 0.5 * kPi) < eps) continue;
    ProfileGridRow row{t, spherical_metric(f, r, t), spherical_cartan(f, r, t), 0.0, genericity_condition(f, t)};
    row.R = row.C.ttt * row.g.inv_thetatheta() * row.C.tpp - row.C.tpp * row.C.tpp / row.g.g_phiphi;
    rows.push_back(row);
  }
  return rows;
}

void write_profile_grid_csv(std::ostream& os, const std::vector<ProfileGridRow>& rows) {
  os << "theta,g_rr,g_rtheta,g_thetatheta,g_phiphi,C_thetathetatheta,C_thetaphiphi,R_thetaphiphitheta,genericity\n";
  os << std::setprecision(17);
  for (const auto& r : rows)
    os << r.theta << ',' << r.g.g_rr << ',' << r.g.g_rtheta << ',' << r.g.g_thetatheta << ',' << r.g.g_phiphi << ','
       << r.C.ttt << ',' << r.C.tpp << ',' << r.R << ',' << r.genericity << '\n';
}

}  // namespace hessiso
