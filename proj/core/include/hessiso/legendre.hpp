#pragma once

#include "hessiso/norm.hpp"

#include <functional>
#include <vector>

namespace hessiso {

struct MapSample {
  Vec source;
  Vec image;
  Mat jacobian;
};

/// A smooth map between punctured spaces, evaluated together with its differential.
using MapFn = std::function<MapSample(const Vec&)>;

/// Φ(y) = ∇E(y).
Vec legendre_map(const NormSpec& spec, const Vec& y);

/// Φ together with dΦ = g.
MapFn legendre_map_fn(NormPtr spec);

/// Norm with Ê = Φ_*E, evaluated by Newton inversion of Φ.
NormPtr dual_norm(NormPtr spec);

/// Wrap a plain point map; the differential comes from central differences with
/// step 1e-6·|y| unless `step` is positive.
MapFn numeric_map(std::function<Vec(const Vec&)> fn, double step = 0.0);
Mat numeric_jacobian(const std::function<Vec(const Vec&)>& fn, const Vec& y, double step = 0.0);

MapFn identity_map();
MapFn linear_map(Mat M);

struct IsometryReport {
  double max_residual = 0.0;
  std::vector<double> residuals;
  bool passed(double tol) const { return max_residual <= tol; }
};

/// max over samples of ‖Jᵀ g_B(Φ(y)) J − g_A(y)‖_F / ‖g_A(y)‖_F.
/// Samples outside either cone raise OutOfCone.
IsometryReport verify_hessian_isometry(const MapFn& map, const NormSpec& A, const NormSpec& B,
                                       const std::vector<Vec>& samples);

}  // namespace hessiso
