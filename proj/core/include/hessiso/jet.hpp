#pragma once

#include "hessiso/tensor.hpp"

#include <array>

namespace hessiso {

/// Third-order multivariate Taylor jet: value, gradient, Hessian and the symmetric
/// third-derivative tensor of a scalar function of n variables at a point.
///
/// Arithmetic on jets propagates all four orders exactly (up to rounding), which is
/// how E = ½F² and its derivatives are produced for expression and profile norms.
struct Jet3 {
  double value = 0.0;
  Vec grad;
  Mat hess;
  Tensor3 third;

  Jet3() = default;
  explicit Jet3(int n, double c = 0.0)
      : value(c), grad(Vec::Zero(n)), hess(Mat::Zero(n, n)), third(n) {}

  static Jet3 variable(int n, int index, double x) {
    Jet3 j(n, x);
    j.grad(index) = 1.0;
    return j;
  }

  int dim() const noexcept { return static_cast<int>(grad.size()); }

  Jet3& operator+=(const Jet3& o);
  Jet3& operator-=(const Jet3& o);
  Jet3& operator*=(double s);
};

/// Derivatives (φ, φ′, φ″, φ‴) of a univariate function at the jet's value.
using UnivariateDerivs = std::array<double, 4>;

/// h = φ∘g by the third-order chain rule.
Jet3 compose(const Jet3& g, const UnivariateDerivs& phi);

Jet3 operator+(Jet3 a, const Jet3& b);
Jet3 operator-(Jet3 a, const Jet3& b);
Jet3 operator-(Jet3 a);
Jet3 operator*(const Jet3& a, const Jet3& b);
Jet3 operator*(Jet3 a, double s);
Jet3 operator*(double s, Jet3 a);
Jet3 operator+(Jet3 a, double s);
Jet3 operator/(const Jet3& a, const Jet3& b);

Jet3 reciprocal(const Jet3& a);
/// Throws NonSmoothPoint at a non-positive argument.
Jet3 sqrt(const Jet3& a);
/// a^p for constant p; a must be positive unless p is a non-negative integer.
Jet3 pow(const Jet3& a, double p);
Jet3 exp(const Jet3& a);
Jet3 atan(const Jet3& a);
/// Angle of (x, y) in the plane, smooth away from the origin.
Jet3 atan2(const Jet3& y, const Jet3& x);

}  // namespace hessiso
