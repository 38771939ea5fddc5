#include "hessiso/jet.hpp"

#include "hessiso/errors.hpp"

#include <cmath>

namespace hessiso {

Tensor3 Tensor3::transformed(const Mat& J) const {
  const int n = n_;
  const int m = static_cast<int>(J.cols());
  // Contract one slot at a time to keep this O(n^3 m).
  std::vector<double> s1(static_cast<std::size_t>(n) * n * m, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < m; ++c) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += (*this)(i, j, k) * J(k, c);
        s1[(static_cast<std::size_t>(i) * n + j) * m + c] = acc;
      }
  std::vector<double> s2(static_cast<std::size_t>(n) * m * m, 0.0);
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += s1[(static_cast<std::size_t>(i) * n + j) * m + c] * J(j, b);
        s2[(static_cast<std::size_t>(i) * m + b) * m + c] = acc;
      }
  Tensor3 out(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += s2[(static_cast<std::size_t>(i) * m + b) * m + c] * J(i, a);
        out(a, b, c) = acc;
      }
  return out;
}

Tensor4 Tensor4::transformed(const Mat& J) const {
  const int n = n_;
  const int m = static_cast<int>(J.cols());
  Tensor4 out(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) {
          double acc = 0.0;
          for (int i = 0; i < n; ++i) {
            if (J(i, a) == 0.0) continue;
            for (int j = 0; j < n; ++j) {
              if (J(j, b) == 0.0) continue;
              for (int k = 0; k < n; ++k) {
                if (J(k, c) == 0.0) continue;
                for (int l = 0; l < n; ++l)
                  acc += (*this)(i, j, k, l) * J(i, a) * J(j, b) * J(k, c) * J(l, d);
              }
            }
          }
          out(a, b, c, d) = acc;
        }
  return out;
}

Jet3& Jet3::operator+=(const Jet3& o) {
  value += o.value;
  grad += o.grad;
  hess += o.hess;
  auto d = third.data();
  auto od = o.third.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += od[i];
  return *this;
}

Jet3& Jet3::operator-=(const Jet3& o) {
  value -= o.value;
  grad -= o.grad;
  hess -= o.hess;
  auto d = third.data();
  auto od = o.third.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= od[i];
  return *this;
}

Jet3& Jet3::operator*=(double s) {
  value *= s;
  grad *= s;
  hess *= s;
  for (double& v : third.data()) v *= s;
  return *this;
}

Jet3 compose(const Jet3& g, const UnivariateDerivs& phi) {
  const int n = g.dim();
  Jet3 h(n, phi[0]);
  h.grad = phi[1] * g.grad;
  h.hess = phi[2] * (g.grad * g.grad.transpose()) + phi[1] * g.hess;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        h.third(i, j, k) =
            phi[3] * g.grad(i) * g.grad(j) * g.grad(k) +
            phi[2] * (g.hess(i, j) * g.grad(k) + g.hess(i, k) * g.grad(j) + g.hess(j, k) * g.grad(i)) +
            phi[1] * g.third(i, j, k);
      }
  return h;
}

Jet3 operator+(Jet3 a, const Jet3& b) { return a += b; }
Jet3 operator-(Jet3 a, const Jet3& b) { return a -= b; }
Jet3 operator-(Jet3 a) { return a *= -1.0; }
Jet3 operator*(Jet3 a, double s) { return a *= s; }
Jet3 operator*(double s, Jet3 a) { return a *= s; }

Jet3 operator+(Jet3 a, double s) {
  a.value += s;
  return a;
}

Jet3 operator*(const Jet3& a, const Jet3& b) {
  const int n = a.dim();
  Jet3 p(n, a.value * b.value);
  p.grad = a.value * b.grad + b.value * a.grad;
  p.hess = a.value * b.hess + b.value * a.hess + a.grad * b.grad.transpose() + b.grad * a.grad.transpose();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        p.third(i, j, k) = a.value * b.third(i, j, k) + b.value * a.third(i, j, k) +
                           a.hess(i, j) * b.grad(k) + a.hess(i, k) * b.grad(j) + a.hess(j, k) * b.grad(i) +
                           b.hess(i, j) * a.grad(k) + b.hess(i, k) * a.grad(j) + b.hess(j, k) * a.grad(i);
      }
  return p;
}

Jet3 reciprocal(const Jet3& a) {
  const double x = a.value;
  if (x == 0.0) throw Error(ErrorCode::NonSmoothPoint, "division by zero in jet arithmetic");
  const double r = 1.0 / x;
  return compose(a, {r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r});
}

Jet3 operator/(const Jet3& a, const Jet3& b) { return a * reciprocal(b); }

Jet3 sqrt(const Jet3& a) {
  const double x = a.value;
  if (!(x > 0.0)) throw Error(ErrorCode::NonSmoothPoint, "sqrt of non-positive value in jet arithmetic");
  const double s = std::sqrt(x);
  return compose(a, {s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)});
}

Jet3 pow(const Jet3& a, double p) {
  const double x = a.value;
  const bool integral = p >= 0.0 && std::floor(p) == p;
  if (!integral && !(x > 0.0))
    throw Error(ErrorCode::NonSmoothPoint, "non-integer power of non-positive value");
  if (integral && x == 0.0) {
    UnivariateDerivs d{0, 0, 0, 0};
    // Falling factorial p(p-1)...(p-m+1) x^{p-m} is nonzero at 0 only when m == p.
    double ff = 1.0;
    for (int m = 0; m <= 3; ++m) {
      if (m == static_cast<int>(p)) d[m] = ff;
      ff *= (p - m);
    }
    return compose(a, d);
  }
  const double v0 = std::pow(x, p);
  return compose(a, {v0, p * v0 / x, p * (p - 1) * v0 / (x * x), p * (p - 1) * (p - 2) * v0 / (x * x * x)});
}

Jet3 exp(const Jet3& a) {
  const double e = std::exp(a.value);
  return compose(a, {e, e, e, e});
}

Jet3 atan(const Jet3& a) {
  const double z = a.value;
  const double q = 1.0 / (1.0 + z * z);
  return compose(a, {std::atan(z), q, -2.0 * z * q * q, (6.0 * z * z - 2.0) * q * q * q});
}

Jet3 atan2(const Jet3& y, const Jet3& x) {
  const double rho = std::hypot(x.value, y.value);
  if (rho == 0.0) throw Error(ErrorCode::NonSmoothPoint, "atan2 at the origin");
  // Rotate so the base point sits on the positive x-axis; then atan(y'/x') is smooth.
  const double c = x.value / rho;
  const double s = y.value / rho;
  Jet3 xr = x * c + y * s;
  Jet3 yr = y * c - x * s;
  yr.value = 0.0;
  Jet3 theta = atan(yr / xr);
  theta.value = std::atan2(y.value, x.value);
  return theta;
}

}  // namespace hessiso
