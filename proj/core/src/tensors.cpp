#include "hessiso/tensors.hpp"

#include "hessiso/errors.hpp"

#include <cmath>

namespace hessiso {
namespace {

Mat spd_inverse(const Mat& g) {
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "fundamental tensor is not positive definite");
  return llt.solve(Mat::Identity(g.rows(), g.cols()));
}

// First and second coordinate derivatives of g by central differences.
struct MetricDerivs {
  Mat g;
  std::vector<Mat> d1;               // d1[i] = ∂_i g
  std::vector<std::vector<Mat>> d2;  // d2[i][j] = ∂_i∂_j g
};

MetricDerivs metric_derivs_at(const NormSpec& spec, const Vec& y, double h, bool second) {
  const int n = static_cast<int>(y.size());
  auto G = [&](const Vec& z) { return jet3(spec, z).hess; };
  MetricDerivs m;
  m.g = G(y);
  m.d1.assign(n, Mat::Zero(n, n));
  std::vector<Mat> plus(n), minus(n);
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e(i) = h;
    plus[i] = G(y + e);
    minus[i] = G(y - e);
    m.d1[i] = (plus[i] - minus[i]) / (2.0 * h);
  }
  if (!second) return m;
  m.d2.assign(n, std::vector<Mat>(n, Mat::Zero(n, n)));
  for (int i = 0; i < n; ++i) {
    m.d2[i][i] = (plus[i] - 2.0 * m.g + minus[i]) / (h * h);
    for (int j = i + 1; j < n; ++j) {
      Vec ei = Vec::Zero(n), ej = Vec::Zero(n);
      ei(i) = h;
      ej(j) = h;
      const Mat d = (G(y + ei + ej) - G(y + ei - ej) - G(y - ei + ej) + G(y - ei - ej)) / (4.0 * h * h);
      m.d2[i][j] = d;
      m.d2[j][i] = d;
    }
  }
  return m;
}

// Central differences at h, h/2, h/4 with two Richardson levels: O(h⁶) truncation.
MetricDerivs metric_derivs(const NormSpec& spec, const Vec& y, double h, bool second) {
  std::vector<MetricDerivs> lv;
  for (double s : {h, 0.5 * h, 0.25 * h}) lv.push_back(metric_derivs_at(spec, y, s, second));
  const std::size_t n = lv[0].d1.size();
  auto combine = [](const Mat& a, const Mat& b, const Mat& c) {
    const Mat ab = (4.0 * b - a) / 3.0, bc = (4.0 * c - b) / 3.0;
    return Mat((16.0 * bc - ab) / 15.0);
  };
  MetricDerivs out = lv[0];
  for (std::size_t i = 0; i < n; ++i) {
    out.d1[i] = combine(lv[0].d1[i], lv[1].d1[i], lv[2].d1[i]);
    if (second)
      for (std::size_t j = 0; j < n; ++j) out.d2[i][j] = combine(lv[0].d2[i][j], lv[1].d2[i][j], lv[2].d2[i][j]);
  }
  return out;
}

double default_step(const Vec& y, double h) { return h > 0.0 ? h : 1e-2 * y.norm(); }

}  // namespace

FundamentalTensor fundamental_tensor(const NormSpec& spec, const Vec& y) {
  Mat g = jet3(spec, y).hess;
  if (Eigen::LLT<Mat>(g).info() != Eigen::Success)
    throw Error(ErrorCode::NotPositiveDefinite, "fundamental tensor is not positive definite");
  return {std::move(g), y};
}

CartanTensorValue cartan_tensor(const NormSpec& spec, const Vec& y) {
  Tensor3 C = jet3(spec, y).third;
  for (double& c : C.data()) c *= 0.5;
  return {std::move(C), y};
}

CurvatureTensor curvature_tensor(const NormSpec& spec, const Vec& y) {
  const Jet3 j = jet3(spec, y);
  const int n = j.dim();
  const Mat ginv = spd_inverse(j.hess);
  Tensor3 C = j.third;
  for (double& c : C.data()) c *= 0.5;

  // Cg(i,l,r) = Σ_s C_ils g^sr
  Tensor3 Cg(n);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      for (int r = 0; r < n; ++r) {
        double acc = 0.0;
        for (int s = 0; s < n; ++s) acc += C(i, l, s) * ginv(s, r);
        Cg(i, l, r) = acc;
      }

  Tensor4 R(n);
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double acc = 0.0;
          for (int r = 0; r < n; ++r) acc += Cg(i, l, r) * C(jj, k, r) - Cg(i, k, r) * C(jj, l, r);
          R(i, jj, k, l) = acc;
        }
  return {std::move(R), y};
}

namespace {

CurvatureTensor fd_riemann_at(const NormSpec& spec, const Vec& y, double h) {
  const int n = static_cast<int>(y.size());
  const MetricDerivs m = metric_derivs(spec, y, h, true);
  const Mat ginv = spd_inverse(m.g);

  // Christoffel symbols of the first kind Γ_{m,jk} and their derivatives.
  auto gamma1 = [&](int mm, int j, int k) { return 0.5 * (m.d1[j](mm, k) + m.d1[k](mm, j) - m.d1[mm](j, k)); };
  auto dgamma1 = [&](int i, int mm, int j, int k) {
    return 0.5 * (m.d2[i][j](mm, k) + m.d2[i][k](mm, j) - m.d2[i][mm](j, k));
  };

  Tensor3 G1(n), G2(n);  // G2(l,j,k) = Γ^l_jk
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) G1(a, j, k) = gamma1(a, j, k);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a) acc += ginv(l, a) * G1(a, j, k);
        G2(l, j, k) = acc;
      }

  // dG2[i](l,j,k) = ∂_i Γ^l_jk, using ∂_i g^{la} = −g^{lb} (∂_i g_bc) g^{ca}.
  std::vector<Tensor3> dG2(n, Tensor3(n));
  for (int i = 0; i < n; ++i) {
    const Mat dginv = -ginv * m.d1[i] * ginv;
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = 0.0;
          for (int a = 0; a < n; ++a) acc += dginv(l, a) * G1(a, j, k) + ginv(l, a) * dgamma1(i, a, j, k);
          dG2[i](l, j, k) = acc;
        }
  }

  // R(∂i,∂j)∂k = Rm(l,i,j,k) ∂l, then lowered: Rs(i,j,k,w) = g(R(∂i,∂j)∂k, ∂w).
  Tensor4 Rs(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Vec up = Vec::Zero(n);
        for (int l = 0; l < n; ++l) {
          double acc = dG2[i](l, j, k) - dG2[j](l, i, k);
          for (int a = 0; a < n; ++a) acc += G2(l, i, a) * G2(a, j, k) - G2(l, j, a) * G2(a, i, k);
          up(l) = acc;
        }
        const Vec low = m.g * up;
        for (int w = 0; w < n; ++w) Rs(i, j, k, w) = low(w);
      }

  // Reorder so that R(u,v,u,v) is the sectional numerator: R(i,j,k,l) = Rs(i,j,l,k).
  Tensor4 R(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) R(i, j, k, l) = Rs(i, j, l, k);
  return {std::move(R), y};
}

}  // namespace

CurvatureTensor fd_riemann_oracle(const NormSpec& spec, const Vec& y, double h) {
  if (h > 0.0) return fd_riemann_at(spec, y, h);
  // Halve the step from 1e-2·|y| and keep the finer member of the closest consecutive
  // pair: truncation dominates above that pair, rounding below it.
  std::vector<CurvatureTensor> ladder;
  for (double s = 1e-2; s > 1e-3; s *= 0.5) ladder.push_back(fd_riemann_at(spec, y, s * y.norm()));
  std::size_t best = 1;
  double best_gap = INFINITY;
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    const double gap = max_abs_diff(ladder[i - 1].R.data(), ladder[i].R.data());
    if (gap < best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  return std::move(ladder[best]);
}

double sectional_curvature(const CurvatureTensor& R, const Mat& g, const Vec& u, const Vec& v) {
  const double guu = u.dot(g * u), gvv = v.dot(g * v), guv = u.dot(g * v);
  const double area = guu * gvv - guv * guv;
  if (!(area > 1e-12 * std::abs(guu * gvv)))
    throw Error(ErrorCode::DegeneratePlane, "u and v are (nearly) g-dependent");
  const int n = static_cast<int>(u.size());
  double num = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) num += R.R(i, j, k, l) * u(i) * v(j) * u(k) * v(l);
  return num / area;
}

double sectional_curvature(const NormSpec& spec, const Vec& y, const Vec& u, const Vec& v) {
  return sectional_curvature(curvature_tensor(spec, y), fundamental_tensor(spec, y).g, u, v);
}

double indicatrix_sectional_curvature(const NormSpec& spec, const Vec& y, const Vec& u, const Vec& v) {
  const Vec x = y / eval_F(spec, y);
  const Mat g = fundamental_tensor(spec, x).g;
  const double gxx = x.dot(g * x);
  const Vec pu = u - (x.dot(g * u) / gxx) * x;
  const Vec pv = v - (x.dot(g * v) / gxx) * x;
  // The Hessian metric is the cone dF² + F²g_S, so K_S = 1 + F²·K_cone on tangent planes.
  return 1.0 + sectional_curvature(curvature_tensor(spec, x), g, pu, pv);
}

double cone_decomposition_residual(const NormSpec& spec, const Vec& y) {
  const Jet3 j = jet3(spec, y);
  const double F = std::sqrt(2.0 * j.value);
  const Vec dF = j.grad / F;
  const int n = j.dim();
  const Mat P = Mat::Identity(n, n) - y * dF.transpose() / F;
  const Mat rhs = dF * dF.transpose() + P.transpose() * j.hess * P;
  return (j.hess - rhs).cwiseAbs().maxCoeff() / (j.hess.cwiseAbs().maxCoeff() + 1e-300);
}

double curvature_symmetry_defect(const Tensor4& R) {
  const int n = R.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double r = R(i, j, k, l);
          worst = std::max({worst, std::abs(r + R(j, i, k, l)), std::abs(r + R(i, j, l, k)), std::abs(r - R(k, l, i, j)),
                            std::abs(r + R(j, k, i, l) + R(k, i, j, l))});
        }
  return worst / (R.max_abs() + 1e-300);
}

double cartan_radial_defect(const Tensor3& C, const Vec& y) {
  const Mat c = C.contract_first(y);
  return c.cwiseAbs().maxCoeff() / (C.max_abs() * y.norm() + 1e-300);
}

double radial_geodesic_defect(const NormSpec& spec, const Vec& y, double h) {
  const int n = static_cast<int>(y.size());
  const MetricDerivs m = metric_derivs(spec, y, default_step(y, h), false);
  const Mat ginv = spd_inverse(m.g);
  Vec low = Vec::Zero(n);  // Γ_{a,ij} yⁱ yʲ
  double scale = 0.0;
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double gam = 0.5 * (m.d1[i](a, j) + m.d1[j](a, i) - m.d1[a](i, j));
        low(a) += gam * y(i) * y(j);
        scale = std::max(scale, std::abs(gam));
      }
  const Vec acc = ginv * low;
  const Vec perp = acc - (acc.dot(y) / y.squaredNorm()) * y;
  return perp.norm() / (scale * y.squaredNorm() + 1e-300);
}

}  // namespace hessiso
