#include "hessiso/constructions.hpp"

#include "hessiso/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hessiso {
namespace {

constexpr double kPi = std::numbers::pi;

Bump bump_in(const Interval& u, double eps, double fraction) {
  return {0.5 * (u.lo + u.hi), 0.5 * fraction * u.width(), eps};
}

bool profile_is_convex(const ProfileFunction& f) {
  const int N = 4001;
  for (int i = 1; i < N; ++i) {
    const double t = kPi * i / N;
    if (!(f(t) > 0.0) || !(profile_convexity_margin(f, t) > 0.0)) return false;
  }
  return true;
}

Interval widen(const Interval& s, double by) {
  // Keep the cone strictly inside (0, π).
  const double lo = std::max(s.lo - by, 0.5 * s.lo);
  const double hi = std::min(s.hi + by, kPi - 0.5 * (kPi - s.hi));
  return {lo, hi};
}

}  // namespace

double profile_convexity_margin(const ProfileFunction& f, double t) {
  const auto d = f.derivs(t);
  const double block = 2.0 * d[0] * (2.0 * d[0] + d[2]) - d[1] * d[1];
  const double phiphi = 2.0 * std::sin(t) * d[0] + std::cos(t) * d[1];
  return std::min(block, phiphi);
}

GluedConstruction build_glued(const GlueOptions& opts) {
  std::vector<Interval> supports;
  for (const auto& u : {opts.u1, opts.u2}) {
    if (!u) continue;
    const Bump b = bump_in(*u, 1.0, opts.support_fraction);
    const Interval s = b.support();
    if (!(s.lo > 0.0 && s.hi < kPi && s.width() > 0.0))
      throw Error(ErrorCode::OverlappingSupports, "deformation support must lie inside (0, π)");
    supports.push_back(s);
  }
  double gap = opts.min_separation;
  if (opts.u1 && opts.u2) {
    if (opts.u1->lo < opts.u2->hi && opts.u2->lo < opts.u1->hi)
      throw Error(ErrorCode::OverlappingSupports, "deformation intervals U1 and U2 overlap");
    const Interval& a = supports[0];
    const Interval& b = supports[1];
    gap = std::max(a.lo, b.lo) - std::min(a.hi, b.hi);
    if (!(gap >= opts.min_separation))
      throw Error(ErrorCode::OverlappingSupports, "deformation supports are closer than the required separation");
  }

  GluedConstruction out;
  double eps = opts.epsilon;
  for (;; eps *= 0.5, ++out.halvings) {
    if (out.halvings > opts.max_halvings)
      throw Error(ErrorCode::ConvexityLost, "deformed profile is not strongly convex after " +
                                                std::to_string(opts.max_halvings) + " halvings");
    std::vector<Bump> bumps;
    if (opts.u1) bumps.push_back(bump_in(*opts.u1, eps, opts.support_fraction));
    if (opts.u2) bumps.push_back(bump_in(*opts.u2, eps, opts.support_fraction));
    ProfileFunction f = ProfileFunction::bumped({{0.5}, {}}, bumps);
    if (profile_is_convex(f)) {
      out.bumps = std::move(bumps);
      out.f1 = make_profile(1, opts.n, std::move(f), "glued-base");
      break;
    }
  }
  out.epsilon = eps;

  std::size_t idx = 0;
  if (opts.u1) out.identity_cone = widen(supports[idx++], 0.5 * gap);
  if (opts.u2) out.dual_cone = widen(supports[idx], 0.5 * gap);

  out.f2 = out.dual_cone ? make_glued(out.f1, *out.dual_cone, "glued") : out.f1;
  if (!opts.u1 && !opts.u2) {
    out.map = identity_map();
    return out;
  }
  out.map = [f1 = out.f1, cone = out.identity_cone](const Vec& y) {
    if (cone && cone->contains(profile_angle(1, y))) return MapSample{y, y, Mat::Identity(y.size(), y.size())};
    Jet3 j = jet3(*f1, y);
    return MapSample{y, std::move(j.grad), std::move(j.hess)};
  };
  return out;
}

double glued_boundary_jump(const GluedConstruction& glued, double delta) {
  if (!glued.dual_cone) return 0.0;
  const int n = glued.f2->dim();
  double worst = 0.0;
  for (double wall : {glued.dual_cone->lo, glued.dual_cone->hi}) {
    for (double phi : {0.3, 1.7, 4.0}) {
      auto point = [&](double t) {
        Vec y = Vec::Zero(n);
        y(0) = std::cos(t);
        const double s = std::sin(t);
        y(1) = s * std::cos(phi);
        if (n > 2) y(2) = s * std::sin(phi);
        return y;
      };
      const Mat lo = jet3(*glued.f2, point(wall - delta)).hess;
      const Mat hi = jet3(*glued.f2, point(wall + delta)).hess;
      worst = std::max(worst, (hi - lo).norm() / lo.norm());
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------

namespace {

struct IndicatrixJet {
  Vec y, dy;
  double speed;
};

IndicatrixJet indicatrix_jet(const NormSpec& spec, double phi) {
  Vec u(2), du(2);
  u << std::cos(phi), std::sin(phi);
  du << -std::sin(phi), std::cos(phi);
  const Jet3 j = jet3(spec, u);
  const double F = std::sqrt(2.0 * j.value);
  const Vec gradF = j.grad / F;
  IndicatrixJet out;
  out.y = u / F;
  out.dy = du / F - u * gradF.dot(du) / (F * F);
  // g is 0-homogeneous, so g(y) = g(u).
  out.speed = std::sqrt(out.dy.dot(j.hess * out.dy));
  return out;
}

// A relative tolerance cannot be met on very short intervals, where rounding dominates
// the error estimate; `depth` bounds the subdivision there.
template <unsigned Points>
double integrate_speed(const NormSpec& spec, double a, double b, double tol, double* err, unsigned depth = 20) {
  auto f = [&spec](double phi) { return indicatrix_jet(spec, phi).speed; };
  double l1 = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, Points>::integrate(f, a, b, depth, tol, err, &l1);
}

double wrap_angle(double phi) {
  double p = std::fmod(phi, 2.0 * kPi);
  if (p < 0.0) p += 2.0 * kPi;
  return p;
}

}  // namespace

Vec PolarChart2D::indicatrix(double phi) const { return indicatrix_jet(*norm, phi).y; }
Vec PolarChart2D::indicatrix_tangent(double phi) const { return indicatrix_jet(*norm, phi).dy; }
double PolarChart2D::speed(double phi) const { return indicatrix_jet(*norm, phi).speed; }

double PolarChart2D::arclength_at(double phi) const {
  if (phi <= 0.0) return 0.0;
  if (phi >= 2.0 * kPi) return length;
  auto it = std::upper_bound(angle.begin(), angle.end(), phi);
  const std::size_t j = static_cast<std::size_t>(it - angle.begin()) - 1;
  if (phi == angle[j]) return arclength[j];
  double err = 0.0;
  return arclength[j] + integrate_speed<61>(*norm, angle[j], phi, tolerance, &err, 4);
}

double PolarChart2D::angle_at(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= length) return 2.0 * kPi;
  auto it = std::upper_bound(arclength.begin(), arclength.end(), s);
  const std::size_t j = static_cast<std::size_t>(it - arclength.begin()) - 1;
  double lo = angle[j], hi = angle[j + 1];
  double phi = lo + (hi - lo) * (s - arclength[j]) / (arclength[j + 1] - arclength[j]);
  for (int iter = 0; iter < 60; ++iter) {
    const double r = arclength_at(phi) - s;
    if (r > 0.0)
      hi = phi;
    else
      lo = phi;
    if (std::abs(r) < 1e-15 * std::max(1.0, length)) break;
    double next = phi - r / speed(phi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - phi) < 1e-16) break;
    phi = next;
  }
  return phi;
}

PolarChart2D polar_chart_2d(NormPtr norm, double tolerance, int table_size) {
  if (norm->dim() != 2) throw Error(ErrorCode::InvalidSpec, "polar chart needs a 2-D norm");
  if (table_size < 2) throw Error(ErrorCode::InvalidSpec, "polar chart table needs at least 2 nodes");
  PolarChart2D chart;
  chart.norm = std::move(norm);
  chart.tolerance = tolerance;
  chart.angle.resize(table_size);
  chart.arclength.assign(table_size, 0.0);
  double coarse = 0.0;
  for (int i = 0; i < table_size; ++i) chart.angle[i] = 2.0 * kPi * i / (table_size - 1);
  for (int i = 1; i < table_size; ++i) {
    double err61 = 0.0, err31 = 0.0;
    const double a = chart.angle[i - 1], b = chart.angle[i];
    const double piece = integrate_speed<61>(*chart.norm, a, b, tolerance, &err61);
    coarse += integrate_speed<31>(*chart.norm, a, b, tolerance, &err31);
    if (!std::isfinite(piece) || !(piece > 0.0) || err61 > 10.0 * tolerance * piece + 1e-300)
      throw Error(ErrorCode::QuadratureFailure, "indicatrix arclength did not reach the requested tolerance");
    chart.arclength[i] = chart.arclength[i - 1] + piece;
  }
  chart.length = chart.arclength.back();
  chart.refinement_delta = std::abs(chart.length - coarse);
  if (!(chart.length > 0.0)) throw Error(ErrorCode::QuadratureFailure, "indicatrix length is not positive");
  return chart;
}

double polar_chart_metric_defect(const PolarChart2D& chart, const Vec& y) {
  const Jet3 j = jet3(*chart.norm, y);
  const double F = std::sqrt(2.0 * j.value);
  const Vec dF = j.grad / F;
  const double phi = wrap_angle(std::atan2(y(1), y(0)));
  Vec dphi(2);
  dphi << -y(1), y(0);
  dphi /= y.squaredNorm();
  const Vec dtheta = chart.speed(phi) * dphi;
  const Mat model = dF * dF.transpose() + F * F * dtheta * dtheta.transpose();
  return (j.hess - model).cwiseAbs().maxCoeff() / j.hess.cwiseAbs().maxCoeff();
}

TwoDIsometry two_d_isometry(NormPtr a, NormPtr b, double tolerance) {
  auto ca = std::make_shared<PolarChart2D>(polar_chart_2d(std::move(a), tolerance));
  auto cb = std::make_shared<PolarChart2D>(polar_chart_2d(std::move(b), tolerance));
  if (!(std::abs(ca->length - cb->length) < 1e-8))
    throw Error(ErrorCode::LengthMismatch, "indicatrix lengths differ: " + std::to_string(ca->length) + " vs " +
                                               std::to_string(cb->length));
  TwoDIsometry out;
  out.length_a = ca->length;
  out.length_b = cb->length;
  out.map = [ca, cb](const Vec& y) {
    const Jet3 ja = jet3(*ca->norm, y);
    const double F = std::sqrt(2.0 * ja.value);
    const Vec dF = ja.grad / F;
    const double phi_a = wrap_angle(std::atan2(y(1), y(0)));
    // Arclength is matched up to B's length, which agrees with A's to 1e-8.
    const double s = ca->arclength_at(phi_a) * cb->length / ca->length;
    const double phi_b = cb->angle_at(s);
    const IndicatrixJet wb = indicatrix_jet(*cb->norm, phi_b);
    Vec dphi(2);
    dphi << -y(1), y(0);
    dphi /= y.squaredNorm();
    const double ratio = ca->speed(phi_a) / wb.speed * cb->length / ca->length;
    Mat J = wb.y * dF.transpose() + F * ratio * wb.dy * dphi.transpose();
    return MapSample{y, F * wb.y, std::move(J)};
  };
  return out;
}

}  // namespace hessiso
