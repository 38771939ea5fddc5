#pragma once

#include <hessiso/norm.hpp>
#include <hessiso/rng.hpp>

#include <functional>
#include <numbers>

namespace hessiso::test {

inline constexpr double kPi = std::numbers::pi;

/// Five-point central difference of a scalar function of one variable.
inline double diff5(const std::function<double(double)>& fn, double t, double h) {
  return (-fn(t + 2 * h) + 8 * fn(t + h) - 8 * fn(t - h) + fn(t - 2 * h)) / (12 * h);
}

/// Gradient of a scalar field by five-point differences along each axis.
inline Vec fd_gradient(const std::function<double(const Vec&)>& fn, const Vec& y, double h) {
  Vec g(y.size());
  for (int i = 0; i < y.size(); ++i)
    g(i) = diff5(
        [&](double s) {
          Vec z = y;
          z(i) = s;
          return fn(z);
        },
        y(i), h);
  return g;
}

/// Jacobian of a vector field by five-point differences.
inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& fn, const Vec& y, double h) {
  const int n = static_cast<int>(y.size());
  Mat J(fn(y).size(), n);
  for (int i = 0; i < n; ++i) {
    auto at = [&](double s) {
      Vec z = y;
      z(i) += s;
      return fn(z);
    };
    J.col(i) = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
  }
  return J;
}

inline double rel(const Mat& got, const Mat& want) {
  return (got - want).cwiseAbs().maxCoeff() / std::max(want.cwiseAbs().maxCoeff(), 1e-300);
}

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

/// Randers norm with α near the identity and |β|_α = b.
inline NormPtr randers(Rng& rng, int n, double b = 0.5) {
  const Mat P = 0.1 * rng.normal_mat(n, n);
  const Mat alpha = Mat::Identity(n, n) + 0.5 * (P + P.transpose());
  const Vec d = rng.normal_vec(n);
  return make_randers(alpha, b * d / std::sqrt(d.dot(alpha.ldlt().solve(d))));
}

/// Convex π-periodic k = 1 profile ½ + c₂cos2t + c₄cos4t.
inline ProfileFunction small_profile(double c2 = 0.04, double c4 = -0.01) {
  return ProfileFunction::trig({{0.5, 0, c2, 0, c4}, {}}, Period::Pi);
}

}  // namespace hessiso::test
