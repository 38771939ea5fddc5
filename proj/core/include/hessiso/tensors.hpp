#pragma once

#include "hessiso/norm.hpp"
#include "hessiso/tensor.hpp"

namespace hessiso {

struct FundamentalTensor {
  Mat g;
  Vec point;
};

struct CartanTensorValue {
  Tensor3 C;
  Vec point;
};

/// R_ijkl with R_ijkl = −R_jikl = −R_ijlk = R_klij. Index order is chosen so that the
/// sectional curvature of the plane (u,v) is R(u,v,u,v)/area.
struct CurvatureTensor {
  Tensor4 R;
  Vec point;
};

/// g = Hessian of E. Throws NotPositiveDefinite when the Cholesky factorisation fails.
FundamentalTensor fundamental_tensor(const NormSpec& spec, const Vec& y);

/// C = ½ ∂³E.
CartanTensorValue cartan_tensor(const NormSpec& spec, const Vec& y);

/// R_ijkl = Σ_{s,r} (C_ils g^sr C_jkr − C_iks g^sr C_jlr) from the exact jets.
CurvatureTensor curvature_tensor(const NormSpec& spec, const Vec& y);

/// Riemann tensor of g from Christoffel symbols whose metric derivatives come from
/// central differences at h, h/2, h/4 (two Richardson steps). h ≤ 0 tries h = 1e-2·|y|
/// and three halvings, returning the finer estimate of the closest consecutive pair.
CurvatureTensor fd_riemann_oracle(const NormSpec& spec, const Vec& y, double h = 0.0);

/// Sectional curvature of span{u, v} for the Hessian metric at y.
/// Throws DegeneratePlane if the Gram determinant is below 1e-12 of its scale.
double sectional_curvature(const NormSpec& spec, const Vec& y, const Vec& u, const Vec& v);
double sectional_curvature(const CurvatureTensor& R, const Mat& g, const Vec& u, const Vec& v);

/// Curvature of the indicatrix {F = 1} (with the induced metric) on the plane obtained
/// by projecting u, v onto the tangent space at y/F(y). Uses K_S = 1 + K_cone.
double indicatrix_sectional_curvature(const NormSpec& spec, const Vec& y, const Vec& u, const Vec& v);

/// Max entry of |g − (dF⊗dF + PᵀgP)|/max|g|, P the projection onto ker dF along y.
double cone_decomposition_residual(const NormSpec& spec, const Vec& y);

/// Largest violation of the antisymmetries, pair symmetry and first Bianchi
/// identity, relative to the tensor's max entry.
double curvature_symmetry_defect(const Tensor4& R);

/// |C(y,·,·)| relative to max|C| (0 for vanishing C).
double cartan_radial_defect(const Tensor3& C, const Vec& y);

/// Γ^k_ij y^i y^j − (its component along y): radial rays are geodesics iff this vanishes.
/// Returned relative to |Γ(y,y)|+|y|.
double radial_geodesic_defect(const NormSpec& spec, const Vec& y, double h = 0.0);

}  // namespace hessiso
