#include "hessiso/isometry.hpp"

#include "hessiso/errors.hpp"

#include <boost/numeric/odeint.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace hessiso {
namespace {

constexpr double kPi = std::numbers::pi;

// X = 2cos t·f − sin t·f′ and Y = 2 sin t·f + cos t·f′ with t-derivatives.
struct XY {
  double X, Y, dX, dY;
};

XY legendre_xy(const UnivariateDerivs& d, double t) {
  const double s = std::sin(t), c = std::cos(t);
  return {2.0 * c * d[0] - s * d[1], 2.0 * s * d[0] + c * d[1], -2.0 * s * d[0] + c * d[1] - s * d[2],
          2.0 * c * d[0] + s * d[1] + c * d[2]};
}

double median(std::vector<double> v) {
  if (v.empty()) return NAN;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

double linear_theta(double a, double b, double t) { return std::atan2(b * std::sin(t), a * std::cos(t)); }

ThetaDerivs linear_theta_d(double a, double b, double t) {
  const double s = std::sin(t), c = std::cos(t);
  return {std::atan2(b * s, a * c), a * b / (a * a * c * c + b * b * s * s)};
}

double legendre_theta(const ProfileFunction& f, double a, double b, double t) {
  return legendre_theta_d(f, a, b, t).theta;
}

ThetaDerivs legendre_theta_d(const ProfileFunction& f, double a, double b, double t) {
  const auto d = f.derivs(t);
  const XY q = legendre_xy(d, t);
  if (std::abs(q.X) <= 1e-12 * (std::abs(q.X) + std::abs(q.Y)))
    throw Error(ErrorCode::DegenerateDenominator, "t coincides with the root of −sin t·f′ + 2cos t·f");
  const double den = a * a * q.X * q.X + b * b * q.Y * q.Y;
  return {std::atan2(b * q.Y, a * q.X), a * b * (q.X * q.dY - q.Y * q.dX) / den};
}

double ode1_rhs(double t, double theta) {
  return std::sin(theta) * std::cos(theta) / (std::sin(t) * std::cos(t));
}

double ode2_rhs(const ProfileFunction& f, double t, double theta) {
  const auto d = f.derivs(t);
  const XY q = legendre_xy(d, t);
  const double den = q.X * q.Y;
  if (std::abs(den) < 1e-14 * (d[0] * d[0] + d[1] * d[1]))
    throw Error(ErrorCode::DegenerateDenominator, "ODE denominator vanishes");
  return (2.0 * d[0] * d[2] - d[1] * d[1] + 4.0 * d[0] * d[0]) * std::sin(theta) * std::cos(theta) / den;
}

double find_t_prime(const ProfileFunction& f) {
  auto X = [&](double t) { return legendre_xy(f.derivs(t), t).X; };
  double lo = 1e-9, hi = kPi - 1e-9;
  double xlo = X(lo);
  const double xhi = X(hi);
  if (!(xlo > 0.0 && xhi < 0.0)) throw Error(ErrorCode::RootNotBracketed, "−sin t·f′ + 2cos t·f has no sign change on (0, π)");
  while (hi - lo > 1e-15) {
    const double m = 0.5 * (lo + hi);
    if (m <= lo || m >= hi) break;
    const double xm = X(m);
    if ((xm > 0.0) == (xlo > 0.0)) {
      lo = m;
      xlo = xm;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

double BranchODEs::residual(double s) const {
  const double den = std::abs(A) * s * s + std::abs(B) * std::abs(s) + std::abs(C);
  return std::abs(A * s * s + B * s + C) / (den + 1e-300);
}

BranchODEs branch_quadratic(const ProfileFunction& f, double t, double theta) {
  const double guard = 1e-6;
  if (!(t > 0.0 && t < kPi)) throw Error(ErrorCode::DomainError, "t must lie in (0, π)");
  if (std::abs(t - 0.5 * kPi) < guard) throw Error(ErrorCode::DomainError, "t = π/2 is excluded");
  if (std::abs(theta - 0.5 * kPi) < guard || std::sin(theta) == 0.0) throw Error(ErrorCode::DomainError, "θ = π/2 is excluded");
  const auto d = f.derivs(t);
  const XY q = legendre_xy(d, t);
  if (std::abs(q.X) < guard * (std::abs(q.X) + std::abs(q.Y))) throw Error(ErrorCode::DomainError, "t = t′ is excluded");

  const double s = std::sin(t), c = std::cos(t);
  const double st = std::sin(theta), ct = std::cos(theta);
  const double f0 = d[0], f1 = d[1], f2 = d[2];
  BranchODEs out;
  // (cos t f′ + 2 sin t f)(sin t f′ − 2 cos t f) = Y·(−X)
  out.A = c * s * q.Y * (-q.X) / (2.0 * f0 * f0 * ct * ct * st * st);
  out.B = (c * s * f2 / f0 - c * s * f1 * f1 / (f0 * f0) + (c * c - s * s) * f1 / f0 + 4.0 * c * s) / (ct * st);
  out.C = -f2 / f0 + f1 * f1 / (2.0 * f0 * f0) - 2.0;
  out.root_linear = ct * st / (c * s);
  out.root_legendre = (-2.0 * f0 * f2 + f1 * f1 - 4.0 * f0 * f0) * ct * st / (q.Y * (-q.X));
  out.discriminant = out.B * out.B - 4.0 * out.A * out.C;
  out.genericity = -c * s * f2 + (c * c - s * s) * f1;
  const double gq = out.genericity / (ct * st);
  out.discriminant_closed = gq * gq / (f0 * f0);
  out.discriminant_printed = gq * gq;
  return out;
}

ThetaMap linear_theta_map(double a, double b, Interval band) {
  return {[a, b](double t) { return linear_theta_d(a, b, t); }, band};
}

ThetaMap legendre_theta_map(const ProfileFunction& f, double a, double b, Interval band) {
  return {[f, a, b](double t) { return legendre_theta_d(f, a, b, t); }, band};
}

ThetaMap sampled_theta_map(std::vector<ThetaSample> samples) {
  if (samples.size() < 2) throw Error(ErrorCode::InsufficientSamples, "θ-map needs at least two samples");
  std::sort(samples.begin(), samples.end(), [](const auto& x, const auto& y) { return x.t < y.t; });
  const Interval band{samples.front().t, samples.back().t};
  auto eval = [s = std::move(samples)](double t) {
    auto it = std::upper_bound(s.begin(), s.end(), t, [](double v, const ThetaSample& x) { return v < x.t; });
    std::size_t j = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
    j = std::min(j, s.size() - 2);
    const double h = s[j + 1].t - s[j].t;
    const double u = (t - s[j].t) / h;
    const double p0 = s[j].theta, p1 = s[j + 1].theta, m0 = h * s[j].dtheta, m1 = h * s[j + 1].dtheta;
    const double u2 = u * u, u3 = u2 * u;
    const double val = (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * p1 + (u3 - u2) * m1;
    const double der = ((6 * u2 - 6 * u) * p0 + (3 * u2 - 4 * u + 1) * m0 + (-6 * u2 + 6 * u) * p1 + (3 * u2 - 2 * u) * m1) / h;
    return ThetaDerivs{val, der};
  };
  return {std::move(eval), band};
}

namespace {

// P(t) = 2 sin²t + cos t sin t f′/f and its t-derivative.
std::array<double, 2> equivariance_lhs(const UnivariateDerivs& d, double t) {
  const double s = std::sin(t), c = std::cos(t);
  const double p = 2.0 * s * s + c * s * d[1] / d[0];
  const double pt = 4.0 * c * s + (c * c - s * s) * d[1] / d[0] - c * s * d[1] * d[1] / (d[0] * d[0]) + c * s * d[2] / d[0];
  return {p, pt};
}

}  // namespace

ProfileFunction solve_h(const ProfileFunction& f, const ThetaMap& map, double h0, double theta0, int nodes) {
  if (!(h0 > 0.0)) throw Error(ErrorCode::NonPositiveH, "initial value h0 must be positive");
  if (nodes < 4) throw Error(ErrorCode::InvalidSpec, "solve_h needs at least 4 nodes");
  const Interval band = map.band;

  // Locate t0 with θ(t0) = θ0 (θ is monotone on the band).
  double lo = band.lo, hi = band.hi;
  const double tlo = map.eval(lo).theta - theta0, thi = map.eval(hi).theta - theta0;
  if (tlo * thi > 0.0) throw Error(ErrorCode::DomainError, "θ0 is not attained on the band");
  const bool inc = thi > tlo;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double m = 0.5 * (lo + hi);
    if ((map.eval(m).theta - theta0 < 0.0) == inc)
      lo = m;
    else
      hi = m;
  }
  const double t0 = 0.5 * (lo + hi);

  auto Q = [&](double t, const ThetaDerivs& th) {
    const auto d = f.derivs(t);
    const double st = std::sin(th.theta), ct = std::cos(th.theta);
    if (std::abs(ct) < 1e-9) throw Error(ErrorCode::IntegrationFailure, "band crosses θ = π/2");
    return (equivariance_lhs(d, t)[0] - 2.0 * st * st) / (st * ct);
  };

  using State = std::array<double, 1>;
  auto rhs = [&](const State& y, State& dy, double t) {
    (void)y;
    const ThetaDerivs th = map.eval(t);
    if (!(std::abs(th.dtheta) > 0.0) || !std::isfinite(th.dtheta))
      throw Error(ErrorCode::IntegrationFailure, "dθ/dt vanishes on the band");
    dy[0] = th.dtheta * Q(t, th);
  };

  std::vector<double> ts(nodes);
  for (int i = 0; i < nodes; ++i) ts[i] = band.lo + band.width() * i / (nodes - 1);
  std::vector<double> logh(nodes, NAN);

  namespace ode = boost::numeric::odeint;
  auto run = [&](std::vector<double> times, std::vector<int> idx) {
    State y{std::log(h0)};
    auto stepper = ode::make_controlled(1e-10, 1e-10, ode::runge_kutta_dopri5<State>());
    std::size_t k = 0;
    const double dt = (times.size() > 1 && times[1] < times[0] ? -1.0 : 1.0) * 1e-3;
    ode::integrate_times(stepper, rhs, y, times.begin(), times.end(), dt, [&](const State& s, double) {
      if (k > 0) logh[idx[k - 1]] = s[0];
      ++k;
    });
  };

  std::vector<double> fwd{t0}, bwd{t0};
  std::vector<int> fwd_idx, bwd_idx;
  for (int i = 0; i < nodes; ++i)
    if (ts[i] >= t0) {
      fwd.push_back(ts[i]);
      fwd_idx.push_back(i);
    }
  for (int i = nodes - 1; i >= 0; --i)
    if (ts[i] < t0) {
      bwd.push_back(ts[i]);
      bwd_idx.push_back(i);
    }
  try {
    if (fwd.size() > 1) run(fwd, fwd_idx);
    if (bwd.size() > 1) run(bwd, bwd_idx);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::IntegrationFailure, e.what());
  }

  struct Node {
    double theta, h, d1, d2;
  };
  std::vector<Node> pts;
  pts.reserve(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double t = ts[i];
    const ThetaDerivs th = map.eval(t);
    const auto d = f.derivs(t);
    const auto [P, Pt] = equivariance_lhs(d, t);
    const double st = std::sin(th.theta), ct = std::cos(th.theta);
    const double q = (P - 2.0 * st * st) / (st * ct);
    const double sec2 = 1.0 / (ct * ct), csc2 = 1.0 / (st * st);
    const double dq = P * (sec2 - csc2) - 2.0 * sec2 + Pt / (st * ct) / th.dtheta;
    const double h = std::exp(logh[i]);
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::NonPositiveH, "integrated h is not positive");
    pts.push_back({th.theta, h, h * q, h * (dq + q * q)});
  }
  std::sort(pts.begin(), pts.end(), [](const Node& a, const Node& b) { return a.theta < b.theta; });
  HermiteTable tab;
  for (const auto& p : pts) {
    tab.x.push_back(p.theta);
    tab.f.push_back(p.h);
    tab.d1.push_back(p.d1);
    tab.d2.push_back(p.d2);
  }
  return ProfileFunction::tabulated(std::move(tab));
}

double equivariance_residual(const ProfileFunction& f, const ProfileFunction& h, const ThetaMap& map, double t) {
  const ThetaDerivs th = map.eval(t);
  const double lhs = equivariance_lhs(f.derivs(t), t)[0];
  const auto hd = h.derivs(th.theta);
  const double st = std::sin(th.theta), ct = std::cos(th.theta);
  const double rhs = 2.0 * st * st + ct * st * hd[1] / hd[0];
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

double energy_residual(const ProfileFunction& f, const ProfileFunction& h, const ThetaMap& map, double t) {
  const ThetaDerivs th = map.eval(t);
  const auto d = f.derivs(t);
  const auto hd = h.derivs(th.theta);
  const double lhs = d[2] / d[0] - d[1] * d[1] / (2.0 * d[0] * d[0]) + 2.0;
  const double rhs = th.dtheta * th.dtheta * (hd[2] / hd[0] - hd[1] * hd[1] / (2.0 * hd[0] * hd[0]) + 2.0);
  return std::abs(lhs - rhs) / std::abs(lhs);
}

double linear_example_h(const ProfileFunction& f, double a, double b, double theta) {
  const double z1 = std::cos(theta) / a, z2 = std::sin(theta) / b;
  return (z1 * z1 + z2 * z2) * f(std::atan2(z2, z1));
}

double legendre_example_h(const ProfileFunction& f, double a, double b, double t) {
  const auto d = f.derivs(t);
  const XY q = legendre_xy(d, t);
  return d[0] / (a * a * q.X * q.X + b * b * q.Y * q.Y);
}

std::vector<ThetaSample> synth_linear_samples(const ProfileFunction& f, double a, double b, Interval band, int count) {
  std::vector<ThetaSample> out;
  for (int i = 0; i < count; ++i) {
    const double t = band.lo + band.width() * i / std::max(1, count - 1);
    const ThetaDerivs th = linear_theta_d(a, b, t);
    out.push_back({t, th.theta, th.dtheta, linear_example_h(f, a, b, th.theta)});
  }
  return out;
}

std::vector<ThetaSample> synth_legendre_samples(const ProfileFunction& f, double a, double b, Interval band, int count) {
  std::vector<ThetaSample> out;
  for (int i = 0; i < count; ++i) {
    const double t = band.lo + band.width() * i / std::max(1, count - 1);
    const ThetaDerivs th = legendre_theta_d(f, a, b, t);
    out.push_back({t, th.theta, th.dtheta, legendre_example_h(f, a, b, t)});
  }
  return out;
}

// ---------------------------------------------------------------------------

Mat linear_example_matrix(double a, double b, int k, int n) {
  Mat M = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) M(i, i) = i < k ? a : b;
  return M;
}

namespace {

Vec numeric_model_apply(const NumericModel& m, const Vec& y) {
  const int k = m.k;
  const double r = y.norm();
  const double t = profile_angle(k, y);
  const ThetaDerivs th = m.theta.eval(t);
  const double rho = r * std::sqrt(m.f(t) / m.h(th.theta));
  const Vec tail = y.tail(m.n - k);
  Vec z(m.n);
  if (k == 1) {
    z(0) = rho * std::cos(th.theta);
  } else {
    const Vec head = y.head(k);
    z.head(k) = rho * std::cos(th.theta) * head / head.norm();
  }
  z.tail(m.n - k) = rho * std::sin(th.theta) * tail / tail.norm();
  if (m.rotation.size() > 0) z = m.rotation * z;
  return z;
}

}  // namespace

MapFn realize(const IsometryModel& model) {
  if (const auto* lm = std::get_if<LinearModel>(&model.v)) return linear_map(lm->matrix);
  if (const auto* lg = std::get_if<LegendreModel>(&model.v)) {
    int k = 1;
    if (const auto* p = std::get_if<ProfileNorm>(&lg->base->v)) k = p->k;
    const Mat D = linear_example_matrix(lg->a, lg->b, k, lg->base->dim());
    return [base = lg->base, D](const Vec& y) {
      const Jet3 j = jet3(*base, y);
      return MapSample{y, D * j.grad, D * j.hess};
    };
  }
  if (const auto* nm = std::get_if<NumericModel>(&model.v)) {
    return numeric_map([m = *nm](const Vec& y) { return numeric_model_apply(m, y); });
  }
  const auto& gm = std::get<GluedModel>(model.v);
  std::vector<std::pair<Interval, MapFn>> pieces;
  for (const auto& [iv, sub] : gm.pieces) pieces.emplace_back(iv, realize(*sub));
  return [pieces = std::move(pieces)](const Vec& y) {
    const double th = profile_angle(1, y);
    for (const auto& [iv, fn] : pieces)
      if (iv.contains(th)) return fn(y);
    throw Error(ErrorCode::OutOfCone, "point outside every piece of the glued model");
  };
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Linear: return "linear";
    case Verdict::Legendre: return "legendre";
    case Verdict::Glued: return "glued";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

std::string to_string(Branch b) { return b == Branch::Linear ? "linear" : "legendre"; }

namespace {

struct ParamFit {
  double a = NAN, b = NAN;
  bool scale_fixed = false;
};

// ρ = b/a per sample, then a from h (or from the normalisation), b = ρa.
ParamFit fit_parameters(const ProfileFunction& f, const std::vector<ThetaSample>& s, Branch br, const ClassifyOptions& opts) {
  std::vector<double> rho_good, rho_all, a2s;
  double orient = 0.0;
  for (const auto& x : s) {
    const auto d = f.derivs(x.t);
    const double st = std::sin(x.theta), ct = std::cos(x.theta);
    double rho;
    if (br == Branch::Linear) {
      rho = st * std::cos(x.t) / (ct * std::sin(x.t));
    } else {
      const XY q = legendre_xy(d, x.t);
      rho = st * q.X / (ct * q.Y);
    }
    rho_all.push_back(rho);
    if (std::abs(ct) > 0.1 && std::abs(std::cos(x.t)) > 0.1) rho_good.push_back(rho);
    orient += x.dtheta;
  }
  ParamFit out;
  const double rho = median(rho_good.empty() ? rho_all : rho_good);
  for (const auto& x : s) {
    if (!std::isfinite(x.h)) continue;
    const auto d = f.derivs(x.t);
    const double st = std::sin(x.theta), ct = std::cos(x.theta);
    if (br == Branch::Linear) {
      a2s.push_back(d[0] * (ct * ct + st * st / (rho * rho)) / x.h);
    } else {
      const XY q = legendre_xy(d, x.t);
      a2s.push_back(d[0] / (x.h * (q.X * q.X + rho * rho * q.Y * q.Y)));
    }
  }
  // Orientation of θ(t) fixes the sign of a; for k > 1 the admissible set has a > 0.
  const double sgn = opts.k == 1 ? sign_of(orient) : 1.0;
  if (!a2s.empty()) {
    out.a = sgn * std::sqrt(median(a2s));
    out.b = rho * out.a;
    out.scale_fixed = true;
  } else if (opts.b_normalization) {
    out.b = *opts.b_normalization;
    out.a = out.b / rho;
    out.scale_fixed = true;
  } else {
    out.a = sgn;
    out.b = rho * out.a;
  }
  return out;
}

bool same_params(double a1, double b1, double a2, double b2) {
  auto close = [](double x, double y) {
    if (std::isnan(x) && std::isnan(y)) return true;
    return std::abs(x - y) <= 1e-6 * std::max({1.0, std::abs(x), std::abs(y)});
  };
  return close(a1, a2) && close(b1, b2);
}

}  // namespace

Classification classify(const ProfileFunction& f, const std::vector<ThetaSample>& samples_in, Interval band,
                        const ClassifyOptions& opts) {
  std::vector<ThetaSample> samples;
  for (const auto& s : samples_in)
    if (band.contains(s.t)) samples.push_back(s);
  if (samples.size() < 8)
    throw Error(ErrorCode::InsufficientSamples, "classification needs at least 8 samples in the band, got " +
                                                    std::to_string(samples.size()));
  std::sort(samples.begin(), samples.end(), [](const auto& x, const auto& y) { return x.t < y.t; });

  Classification out;
  using Label = SampleVerdict::Label;
  bool unexplained = false;
  for (const auto& s : samples) {
    SampleVerdict sv;
    sv.t = s.t;
    try {
      const BranchODEs bq = branch_quadratic(f, s.t, s.theta);
      const auto d = f.derivs(s.t);
      const double scale = std::abs(d[0]) + std::abs(d[1]) + std::abs(d[2]);
      if (std::abs(bq.genericity) < opts.genericity_tol * scale) {
        sv.label = Label::Degenerate;
      } else {
        const double denom = std::abs(s.dtheta) + 1e-300;
        sv.res_linear = std::abs(s.dtheta - bq.root_linear) / denom;
        sv.res_legendre = std::abs(s.dtheta - bq.root_legendre) / denom;
        const double best = std::min(sv.res_linear, sv.res_legendre);
        const double other = std::max(sv.res_linear, sv.res_legendre);
        if (best < opts.accept && other > opts.reject) {
          sv.label = sv.res_linear < sv.res_legendre ? Label::Linear : Label::Legendre;
          out.max_accepted_residual = std::max(out.max_accepted_residual, best);
          out.min_rejected_residual = std::min(out.min_rejected_residual, other);
        } else if (best < opts.accept) {
          sv.label = Label::Ambiguous;
        } else {
          sv.label = Label::Unexplained;
          unexplained = true;
        }
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DomainError) throw;
      sv.label = Label::Degenerate;
    }
    out.samples.push_back(sv);
  }

  // Runs of decisive samples, split at degenerate samples and at label changes.
  std::vector<std::vector<ThetaSample>> groups;
  std::vector<Segment> segs;
  bool open = false;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto lab = out.samples[i].label;
    if (lab == Label::Degenerate || lab == Label::Unexplained) {
      open = false;
      continue;
    }
    if (lab == Label::Ambiguous) continue;
    const Branch br = lab == Label::Linear ? Branch::Linear : Branch::Legendre;
    if (!open || segs.back().branch != br) {
      segs.push_back({{samples[i].t, samples[i].t}, br});
      groups.emplace_back();
      open = true;
    }
    auto& sg = segs.back();
    sg.t_range.hi = samples[i].t;
    sg.count += 1;
    sg.max_residual = std::max(sg.max_residual, std::min(out.samples[i].res_linear, out.samples[i].res_legendre));
    groups.back().push_back(samples[i]);
  }
  if (unexplained || segs.empty()) {
    out.verdict = Verdict::Indeterminate;
    out.segments = std::move(segs);
    return out;
  }

  bool any_fixed = false;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const ParamFit p = fit_parameters(f, groups[i], segs[i].branch, opts);
    segs[i].a = p.a;
    segs[i].b = p.b;
    any_fixed = any_fixed || p.scale_fixed;
  }
  std::vector<Segment> merged;
  for (const auto& sg : segs) {
    if (!merged.empty() && merged.back().branch == sg.branch && same_params(merged.back().a, merged.back().b, sg.a, sg.b)) {
      auto& m = merged.back();
      m.t_range.hi = sg.t_range.hi;
      m.max_residual = std::max(m.max_residual, sg.max_residual);
      m.count += sg.count;
    } else {
      merged.push_back(sg);
    }
  }
  out.segments = std::move(merged);
  out.scale_fixed = any_fixed;
  if (out.segments.size() == 1) {
    const auto& sg = out.segments.front();
    out.verdict = sg.branch == Branch::Linear ? Verdict::Linear : Verdict::Legendre;
    out.a = sg.a;
    out.b = sg.b;
  } else {
    out.verdict = Verdict::Glued;
    for (std::size_t i = 0; i + 1 < out.segments.size(); ++i)
      out.boundaries.push_back(0.5 * (out.segments[i].t_range.hi + out.segments[i + 1].t_range.lo));
  }
  return out;
}

FlatFit classify_flat(const ProfileFunction& f, const std::vector<ThetaSample>& samples_in, Interval band,
                      const ClassifyOptions& opts) {
  std::vector<ThetaSample> samples;
  for (const auto& s : samples_in)
    if (band.contains(s.t)) samples.push_back(s);
  if (samples.size() < 8) throw Error(ErrorCode::InsufficientSamples, "flat classification needs at least 8 samples");

  // Least squares f ≈ c₁ + c₂cos2t on a grid over the band.
  const int N = 201;
  Mat A(N, 2);
  Vec rhs(N);
  for (int i = 0; i < N; ++i) {
    const double t = band.lo + band.width() * i / (N - 1);
    A(i, 0) = 1.0;
    A(i, 1) = std::cos(2.0 * t);
    rhs(i) = f(t);
  }
  const Vec c = A.colPivHouseholderQr().solve(rhs);
  FlatFit out;
  out.c1 = c(0);
  out.c2 = c(1);
  out.fit_residual = (A * c - rhs).cwiseAbs().maxCoeff() / rhs.cwiseAbs().maxCoeff();
  if (!(out.fit_residual < 1e-8))
    throw Error(ErrorCode::FitFailure, "profile is not of the form c1 + c2 cos 2t on the band (residual " +
                                           std::to_string(out.fit_residual) + ")");

  for (const auto& s : samples) {
    const double lhs = std::cos(s.t) * std::sin(s.t) * s.dtheta;
    const double rhs_ode = std::cos(s.theta) * std::sin(s.theta);
    out.ode_residual = std::max(out.ode_residual, std::abs(lhs - rhs_ode) / std::max(std::abs(rhs_ode), 1e-3));
  }
  if (!(out.ode_residual < 1e-6)) throw Error(ErrorCode::FitFailure, "θ(t) violates cos t sin t·θ′ = cos θ sin θ");

  const ParamFit p = fit_parameters(f, samples, Branch::Linear, opts);
  out.model.matrix = linear_example_matrix(p.a, p.b, opts.k, opts.n);
  out.model.ab = std::make_pair(p.a, p.b);
  return out;
}

namespace {

// Orthogonal R minimising Σ|R·src − dst|².
Mat procrustes(const std::vector<Vec>& src, const std::vector<Vec>& dst) {
  const auto d = src.front().size();
  Mat M = Mat::Zero(d, d);
  for (std::size_t i = 0; i < src.size(); ++i) M += dst[i] * src[i].transpose();
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

double procrustes_residual(const Mat& R, const std::vector<Vec>& src, const std::vector<Vec>& dst) {
  double worst = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) worst = std::max(worst, (R * src[i] - dst[i]).norm());
  return worst;
}

}  // namespace

Decomposition decompose(const std::vector<FullSample>& samples, int k, const ProfileFunction& f) {
  if (samples.size() < 2) throw Error(ErrorCode::InsufficientSamples, "decomposition needs at least two samples");
  const int n = static_cast<int>(samples.front().source.size());
  auto unit = [](const Vec& v) { return Vec(v / v.norm()); };

  Decomposition out;
  if (k == 1) {
    if (n == 2) {
      out.phi1 = Mat::Identity(2, 2);
    } else {
      std::vector<Vec> src, dst;
      for (const auto& s : samples) {
        src.push_back(unit(s.source.tail(n - 1)));
        dst.push_back(unit(s.image.tail(n - 1)));
      }
      const Mat A = procrustes(src, dst);
      out.fit_residual = procrustes_residual(A, src, dst);
      out.phi1 = Mat::Identity(n, n);
      out.phi1.bottomRightCorner(n - 1, n - 1) = A;
    }
  } else {
    const int m = n - k;
    std::vector<Vec> s1, s2, d1, d2;
    for (const auto& s : samples) {
      s1.push_back(unit(s.source.head(k)));
      s2.push_back(unit(s.source.tail(m)));
      d1.push_back(unit(s.image.head(k)));
      d2.push_back(unit(s.image.tail(m)));
    }
    const Mat A1 = procrustes(s1, d1), A2 = procrustes(s2, d2);
    const double plain = std::max(procrustes_residual(A1, s1, d1), procrustes_residual(A2, s2, d2));
    out.phi1 = Mat::Zero(n, n);
    out.phi1.topLeftCorner(k, k) = A1;
    out.phi1.bottomRightCorner(m, m) = A2;
    out.fit_residual = plain;
    if (m == k) {
      // Block exchange: image first block comes from the source second block.
      const Mat B1 = procrustes(s2, d1), B2 = procrustes(s1, d2);
      const double swap = std::max(procrustes_residual(B1, s2, d1), procrustes_residual(B2, s1, d2));
      if (swap < plain) {
        out.swapped = true;
        out.fit_residual = swap;
        out.phi1 = Mat::Zero(n, n);
        out.phi1.topRightCorner(k, k) = B1;
        out.phi1.bottomLeftCorner(k, k) = B2;
      }
    }
  }
  if (!(out.fit_residual <= 1e-8))
    throw Error(ErrorCode::NotOrbitPreserving,
                "ξ-action is not a fixed orthogonal map (residual " + std::to_string(out.fit_residual) + ")");

  for (const auto& s : samples) {
    const Vec w = out.phi1.transpose() * s.image;
    const double t = profile_angle(k, s.source);
    const double th = profile_angle(k, w);
    const double r = s.source.norm();
    const double rho = w.norm() / r;
    ThetaSample ts{t, th, NAN, f(t) / (rho * rho)};

    if (s.jacobian.size() > 0) {
      Vec dy(n);
      if (k == 1) {
        dy(0) = -r * std::sin(t);
        dy.tail(n - 1) = r * std::cos(t) * unit(s.source.tail(n - 1));
      } else {
        dy.head(k) = -r * std::sin(t) * unit(s.source.head(k));
        dy.tail(n - k) = r * std::cos(t) * unit(s.source.tail(n - k));
      }
      const Vec wd = out.phi1.transpose() * (s.jacobian * dy);
      const double v = w.tail(n - k).norm();
      const double dv = w.tail(n - k).dot(wd.tail(n - k)) / v;
      double u, du;
      if (k == 1) {
        u = w(0);
        du = wd(0);
      } else {
        u = w.head(k).norm();
        du = w.head(k).dot(wd.head(k)) / u;
      }
      ts.dtheta = (u * dv - v * du) / (u * u + v * v);
    }

    // Φ₂ must keep the source ξ-coordinates.
    Vec rebuilt(n);
    if (k == 1) {
      rebuilt(0) = w.norm() * std::cos(th);
    } else {
      rebuilt.head(k) = w.norm() * std::cos(th) * unit(s.source.head(k));
    }
    rebuilt.tail(n - k) = w.norm() * std::sin(th) * unit(s.source.tail(n - k));
    out.reconstruction_residual =
        std::max(out.reconstruction_residual, (out.phi1 * rebuilt - s.image).norm() / s.image.norm());

    out.phi2.push_back(ts);
    out.phi2_images.push_back(w);
  }
  return out;
}

}  // namespace hessiso
