#include "hessiso/legendre.hpp"

#include "hessiso/errors.hpp"

namespace hessiso {

Vec legendre_map(const NormSpec& spec, const Vec& y) { return jet3(spec, y).grad; }

MapFn legendre_map_fn(NormPtr spec) {
  return [spec = std::move(spec)](const Vec& y) {
    Jet3 j = jet3(*spec, y);
    return MapSample{y, std::move(j.grad), std::move(j.hess)};
  };
}

NormPtr dual_norm(NormPtr spec) {
  // Dual of a dual is the original norm; avoid stacking Newton solves.
  if (const auto* d = std::get_if<DualNorm>(&spec->v)) return d->base;
  if (const auto* e = std::get_if<EuclideanNorm>(&spec->v)) return make_euclidean(e->A.inverse(), spec->id + "^");
  const std::string id = spec->id + "^";
  return make_dual(std::move(spec), id);
}

Mat numeric_jacobian(const std::function<Vec(const Vec&)>& fn, const Vec& y, double step) {
  const double h = step > 0.0 ? step : 1e-6 * y.norm();
  const int n = static_cast<int>(y.size());
  Mat J;
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e(i) = h;
    const Vec col = (fn(y + e) - fn(y - e)) / (2.0 * h);
    if (i == 0) J.resize(col.size(), n);
    J.col(i) = col;
  }
  return J;
}

MapFn numeric_map(std::function<Vec(const Vec&)> fn, double step) {
  return [fn = std::move(fn), step](const Vec& y) { return MapSample{y, fn(y), numeric_jacobian(fn, y, step)}; };
}

MapFn identity_map() {
  return [](const Vec& y) { return MapSample{y, y, Mat::Identity(y.size(), y.size())}; };
}

MapFn linear_map(Mat M) {
  return [M = std::move(M)](const Vec& y) { return MapSample{y, M * y, M}; };
}

IsometryReport verify_hessian_isometry(const MapFn& map, const NormSpec& A, const NormSpec& B,
                                       const std::vector<Vec>& samples) {
  IsometryReport rep;
  rep.residuals.reserve(samples.size());
  for (const auto& y : samples) {
    if (!in_cone(A, y)) throw Error(ErrorCode::OutOfCone, "sample outside the source cone");
    const MapSample s = map(y);
    if (!in_cone(B, s.image)) throw Error(ErrorCode::OutOfCone, "sample image outside the target cone");
    const Mat gA = jet3(A, y).hess;
    const Mat gB = jet3(B, s.image).hess;
    const double r = (s.jacobian.transpose() * gB * s.jacobian - gA).norm() / gA.norm();
    rep.residuals.push_back(r);
    rep.max_residual = std::max(rep.max_residual, r);
  }
  return rep;
}

}  // namespace hessiso
