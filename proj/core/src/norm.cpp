#include "hessiso/norm.hpp"

#include "hessiso/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace hessiso {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Below this fraction of |y| the off-axis radius is treated as zero; jets of
// √(Σxᵢ²) lose all accuracy there.
constexpr double kAxisGuard = 1e-8;

void check_point(const NormSpec& spec, const Vec& y) {
  if (y.size() != spec.dim())
    throw Error(ErrorCode::InvalidSpec, "point dimension " + std::to_string(y.size()) + " does not match norm dimension " +
                                            std::to_string(spec.dim()));
  if (y.norm() == 0.0) throw Error(ErrorCode::ZeroPoint, "E is not differentiable at the origin");
}

Jet3 euclidean_jet(const EuclideanNorm& e, const Vec& y) {
  const int n = static_cast<int>(y.size());
  Jet3 j(n, 0.5 * y.dot(e.A * y));
  j.grad = e.A * y;
  j.hess = e.A;
  return j;
}

Jet3 randers_jet(const RandersNorm& rn, const Vec& y) {
  const int n = static_cast<int>(y.size());
  const Vec ay = rn.alpha * y;
  const double al = std::sqrt(y.dot(ay));
  const Vec a1 = ay / al;
  const Mat a2 = (rn.alpha - a1 * a1.transpose()) / al;
  const double F = al + rn.beta.dot(y);
  const Vec F1 = a1 + rn.beta;

  Jet3 j(n, 0.5 * F * F);
  j.grad = F * F1;
  j.hess = F1 * F1.transpose() + F * a2;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const double a3 = -(a2(i, k) * a1(l) + a2(i, l) * a1(k) + a2(k, l) * a1(i)) / al;
        j.third(i, k, l) = a2(i, k) * F1(l) + a2(i, l) * F1(k) + a2(k, l) * F1(i) + F * a3;
      }
  return j;
}

// Σ_{i∈[lo,hi)} yᵢ² as a jet.
Jet3 partial_square(const Vec& y, int lo, int hi) {
  const int n = static_cast<int>(y.size());
  Jet3 s(n, 0.0);
  for (int i = lo; i < hi; ++i) {
    s.value += y(i) * y(i);
    s.grad(i) = 2.0 * y(i);
    s.hess(i, i) = 2.0;
  }
  return s;
}

Jet3 profile_jet(const ProfileNorm& pn, const Vec& y) {
  const int n = pn.n;
  const double ny = y.norm();
  const Jet3 vv = partial_square(y, pn.k, n);
  if (std::sqrt(vv.value) < kAxisGuard * ny)
    throw Error(ErrorCode::NonSmoothPoint, "point lies on the invariant axis of the profile norm");
  const Jet3 v = sqrt(vv);
  Jet3 u;
  if (pn.k == 1) {
    u = Jet3::variable(n, 0, y(0));
  } else {
    const Jet3 uu = partial_square(y, 0, pn.k);
    if (std::sqrt(uu.value) < kAxisGuard * ny)
      throw Error(ErrorCode::NonSmoothPoint, "point lies on the invariant axis of the profile norm");
    u = sqrt(uu);
  }
  const Jet3 theta = atan2(v, u);
  UnivariateDerivs fd;
  try {
    fd = pn.f.derivs(theta.value);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DomainError) throw Error(ErrorCode::OutOfCone, "angle outside the tabulated profile range");
    throw;
  }
  Jet3 r2 = partial_square(y, 0, n);
  return r2 * compose(theta, fd);
}

Jet3 expression_jet(const ExpressionNorm& en, const Vec& y) {
  for (const auto& nrm : en.cone_normals)
    if (!(nrm.dot(y) > 0.0)) throw Error(ErrorCode::OutOfCone, "point outside the declared validity cone");
  return en.E.eval_jet(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
}

Jet3 dual_jet(const DualNorm& d, const Vec& p) {
  const Vec x = legendre_inverse(*d.base, p);
  const Jet3 b = jet3(*d.base, x);
  const int n = static_cast<int>(p.size());
  Eigen::LLT<Mat> llt(b.hess);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "base Hessian not positive definite");
  const Mat ginv = llt.solve(Mat::Identity(n, n));
  Jet3 j(n, 0.5 * p.dot(x));
  j.grad = x;
  j.hess = 0.5 * (ginv + ginv.transpose());
  j.third = b.third.transformed(ginv);
  for (double& t : j.third.data()) t = -t;
  return j;
}

Jet3 pullback_jet(const PullbackNorm& pb, const Vec& y) {
  const Jet3 b = jet3(*pb.base, pb.M * y);
  Jet3 j(static_cast<int>(y.size()), b.value);
  j.grad = pb.M.transpose() * b.grad;
  j.hess = pb.M.transpose() * b.hess * pb.M;
  j.third = b.third.transformed(pb.M);
  return j;
}

bool glued_uses_dual(const GluedNorm& gl, const Vec& y) {
  return gl.dual_cone.contains(profile_angle(1, y));
}

}  // namespace

int NormSpec::dim() const {
  return std::visit(Overloaded{
                        [](const EuclideanNorm& e) { return static_cast<int>(e.A.rows()); },
                        [](const RandersNorm& r) { return static_cast<int>(r.alpha.rows()); },
                        [](const ProfileNorm& p) { return p.n; },
                        [](const ExpressionNorm& e) { return e.n; },
                        [](const DualNorm& d) { return d.base->dim(); },
                        [](const PullbackNorm& p) { return static_cast<int>(p.M.cols()); },
                        [](const GluedNorm& g) { return g.base->dim(); },
                    },
                    v);
}

NormPtr make_euclidean(Mat A, std::string id) {
  if (A.rows() != A.cols() || A.rows() < 2) throw Error(ErrorCode::InvalidSpec, "Euclidean matrix must be square, n ≥ 2");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * A.cwiseAbs().maxCoeff())
    throw Error(ErrorCode::InvalidSpec, "Euclidean matrix must be symmetric");
  if (Eigen::LLT<Mat>(A).info() != Eigen::Success)
    throw Error(ErrorCode::NotConvex, "Euclidean matrix must be positive definite");
  return std::make_shared<NormSpec>(NormSpec{EuclideanNorm{std::move(A)}, std::move(id)});
}

NormPtr make_randers(Mat alpha, Vec beta, std::string id) {
  if (alpha.rows() != alpha.cols() || alpha.rows() != beta.size() || alpha.rows() < 2)
    throw Error(ErrorCode::InvalidSpec, "Randers alpha must be n×n and beta an n-vector");
  Eigen::LLT<Mat> llt(alpha);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotConvex, "Randers alpha must be positive definite");
  if (!(beta.dot(llt.solve(beta)) < 1.0)) throw Error(ErrorCode::NotConvex, "Randers beta must satisfy |β|_α < 1");
  return std::make_shared<NormSpec>(NormSpec{RandersNorm{std::move(alpha), std::move(beta)}, std::move(id)});
}

NormPtr make_profile(int k, int n, ProfileFunction f, std::string id) {
  if (n < 2 || k < 1 || 2 * k > n) throw Error(ErrorCode::InvalidSpec, "profile norm needs 1 ≤ k ≤ n/2");
  if (k > 1 && f.period() != Period::Pi && !f.is_tabulated())
    throw Error(ErrorCode::InvalidSpec, "profile with k > 1 must be π-periodic");
  if (!(f.min_value() > 0.0)) throw Error(ErrorCode::InvalidSpec, "profile function must be positive");
  return std::make_shared<NormSpec>(NormSpec{ProfileNorm{k, n, std::move(f)}, std::move(id)});
}

NormPtr make_expression(int n, Expr E, std::vector<Vec> cone, std::string id) {
  if (n < 2) throw Error(ErrorCode::InvalidSpec, "expression norm needs n ≥ 2");
  if (E.arity() > n) throw Error(ErrorCode::InvalidSpec, "expression references a variable beyond x" + std::to_string(n));
  for (const auto& c : cone)
    if (c.size() != n) throw Error(ErrorCode::InvalidSpec, "cone normal has wrong dimension");
  return std::make_shared<NormSpec>(NormSpec{ExpressionNorm{n, std::move(E), std::move(cone)}, std::move(id)});
}

NormPtr make_dual(NormPtr base, std::string id) {
  return std::make_shared<NormSpec>(NormSpec{DualNorm{std::move(base)}, std::move(id)});
}

NormPtr make_pullback(NormPtr base, Mat M, std::string id) {
  if (M.rows() != base->dim() || M.cols() != base->dim())
    throw Error(ErrorCode::InvalidSpec, "pullback matrix must be n×n");
  if (std::abs(M.determinant()) < 1e-14) throw Error(ErrorCode::InvalidSpec, "pullback matrix is singular");
  return std::make_shared<NormSpec>(NormSpec{PullbackNorm{std::move(base), std::move(M)}, std::move(id)});
}

NormPtr make_glued(NormPtr base, Interval dual_cone, std::string id) {
  const auto* p = std::get_if<ProfileNorm>(&base->v);
  if (p == nullptr || p->k != 1) throw Error(ErrorCode::InvalidSpec, "glued norm needs a k = 1 profile base");
  if (!(dual_cone.lo > 0.0 && dual_cone.hi < std::numbers::pi && dual_cone.lo < dual_cone.hi))
    throw Error(ErrorCode::InvalidSpec, "glued dual cone must be a sub-interval of (0, π)");
  return std::make_shared<NormSpec>(NormSpec{GluedNorm{std::move(base), dual_cone}, std::move(id)});
}

Jet3 jet3(const NormSpec& spec, const Vec& y) {
  check_point(spec, y);
  return std::visit(Overloaded{
                        [&](const EuclideanNorm& e) { return euclidean_jet(e, y); },
                        [&](const RandersNorm& r) { return randers_jet(r, y); },
                        [&](const ProfileNorm& p) { return profile_jet(p, y); },
                        [&](const ExpressionNorm& e) { return expression_jet(e, y); },
                        [&](const DualNorm& d) { return dual_jet(d, y); },
                        [&](const PullbackNorm& p) { return pullback_jet(p, y); },
                        [&](const GluedNorm& g) {
                          if (glued_uses_dual(g, y)) return dual_jet(DualNorm{g.base}, y);
                          return jet3(*g.base, y);
                        },
                    },
                    spec.v);
}

double eval_E(const NormSpec& spec, const Vec& y) {
  check_point(spec, y);
  return std::visit(Overloaded{
                        [&](const EuclideanNorm& e) { return 0.5 * y.dot(e.A * y); },
                        [&](const RandersNorm& r) {
                          const double F = std::sqrt(y.dot(r.alpha * y)) + r.beta.dot(y);
                          return 0.5 * F * F;
                        },
                        [&](const ProfileNorm& p) {
                          try {
                            return y.squaredNorm() * p.f(profile_angle(p.k, y));
                          } catch (const Error& e) {
                            if (e.code() == ErrorCode::DomainError)
                              throw Error(ErrorCode::OutOfCone, "angle outside the tabulated profile range");
                            throw;
                          }
                        },
                        [&](const ExpressionNorm& e) {
                          for (const auto& nrm : e.cone_normals)
                            if (!(nrm.dot(y) > 0.0)) throw Error(ErrorCode::OutOfCone, "point outside the declared validity cone");
                          return e.E.eval(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
                        },
                        [&](const DualNorm& d) { return 0.5 * y.dot(legendre_inverse(*d.base, y)); },
                        [&](const PullbackNorm& p) { return eval_E(*p.base, p.M * y); },
                        [&](const GluedNorm& g) {
                          if (glued_uses_dual(g, y)) return 0.5 * y.dot(legendre_inverse(*g.base, y));
                          return eval_E(*g.base, y);
                        },
                    },
                    spec.v);
}

bool in_cone(const NormSpec& spec, const Vec& y) {
  try {
    (void)eval_E(spec, y);
    return true;
  } catch (const Error&) {
    return false;
  }
}

Vec legendre_inverse(const NormSpec& spec, const Vec& p) {
  const double np = p.norm();
  if (np == 0.0) throw Error(ErrorCode::ZeroPoint, "cannot invert the Legendre map at 0");
  const Vec u = p / np;
  Vec x;
  try {
    x = u * (np / jet3(spec, u).grad.norm());
  } catch (const Error& e) {
    throw Error(ErrorCode::InversionFailure, std::string("radial start point rejected: ") + e.what());
  }

  // Newton on the convex objective E(x) − p·x, backtracking on the objective while far
  // from the root; close to it the objective is flat to rounding and pure steps are taken.
  auto objective = [&](const Vec& z, double& out) {
    try {
      out = eval_E(spec, z) - p.dot(z);
      return std::isfinite(out);
    } catch (const Error&) {
      return false;
    }
  };
  double phi = 0.0;
  if (!objective(x, phi)) throw Error(ErrorCode::InversionFailure, "start point outside the cone");
  double best = INFINITY;
  for (int it = 0; it < 50; ++it) {
    const Jet3 j = jet3(spec, x);
    const Vec r = j.grad - p;
    const double rn = r.norm();
    if (rn <= 1e-14 * np) return x;
    // Rounding floor: no real progress on the best residual so far and already tight.
    if (rn <= 1e-11 * np && rn > 0.5 * best) return x;
    best = std::min(best, rn);
    Eigen::LLT<Mat> llt(j.hess);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::InversionFailure, "Hessian lost definiteness during Newton");
    const Vec dx = -llt.solve(r);
    if (rn <= 1e-6 * np) {
      x += dx;
      continue;
    }
    double step = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 60 && !moved; ++bt, step *= 0.5) {
      const Vec xn = x + step * dx;
      double phin = 0.0;
      if (objective(xn, phin) && phin <= phi + 1e-4 * step * r.dot(dx)) {
        x = xn;
        phi = phin;
        moved = true;
      }
    }
    if (!moved) {
      // The objective can be flat to rounding well before the residual is; fall back
      // to the full step when it still shrinks the residual.
      try {
        const Vec xn = x + dx;
        if ((jet3(spec, xn).grad - p).norm() < rn) {
          x = xn;
          objective(x, phi);
          moved = true;
        }
      } catch (const Error&) {
      }
    }
    if (!moved) throw Error(ErrorCode::InversionFailure, "line search stalled");
  }
  throw Error(ErrorCode::InversionFailure, "Newton did not converge in 50 iterations");
}

ConvexityReport check_strong_convexity(const NormSpec& spec, const std::vector<Vec>& samples) {
  if (samples.empty()) throw Error(ErrorCode::InvalidSpec, "convexity check needs at least one sample");
  ConvexityReport rep;
  rep.min_eigenvalue = INFINITY;
  for (const auto& y : samples) {
    const Jet3 j = jet3(spec, y);
    const double lo = Eigen::SelfAdjointEigenSolver<Mat>(j.hess, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, lo);
    if (!(lo > 0.0)) rep.failing.push_back(y);
  }
  return rep;
}

double homogeneity_defect(const NormSpec& spec, const Vec& y, double lambda) {
  const double e = eval_E(spec, y);
  return std::abs(eval_E(spec, lambda * y) - lambda * lambda * e) / (lambda * lambda * std::abs(e));
}

double euler_defect(const Jet3& j, const Vec& y) {
  const double d1 = std::abs(j.grad.dot(y) - 2.0 * j.value) / (2.0 * std::abs(j.value) + 1e-300);
  const double d2 = (j.hess * y - j.grad).norm() / (j.grad.norm() + 1e-300);
  const int n = j.dim();
  double d3 = 0.0;
  const double s3 = j.third.max_abs() * y.norm() + 1e-300;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += j.third(i, a, b) * y(i);
      d3 = std::max(d3, std::abs(acc) / s3);
    }
  return std::max({d1, d2, d3});
}

double profile_angle(int k, const Vec& y) {
  const double v = y.tail(y.size() - k).norm();
  const double u = k == 1 ? y(0) : y.head(k).norm();
  return std::atan2(v, u);
}

}  // namespace hessiso
