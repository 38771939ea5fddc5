#pragma once

#include "hessiso/norm.hpp"
#include "hessiso/profile_function.hpp"

#include <ostream>
#include <vector>

namespace hessiso {

/// Hessian metric of E = r²f(θ) in the 3-D chart (r, θ, φ); block diagonal in (r,θ) | φ.
struct SphericalMetric3 {
  double g_rr = 0.0;
  double g_rtheta = 0.0;
  double g_thetatheta = 0.0;
  double g_phiphi = 0.0;

  Mat matrix() const;
  /// g^θθ of the (r,θ) block.
  double inv_thetatheta() const;
  double block_det() const { return g_rr * g_thetatheta - g_rtheta * g_rtheta; }
};

struct SphericalCartan {
  double ttt = 0.0;  // C_θθθ
  double tpp = 0.0;  // C_θφφ
};

/// Throws DomainError unless 0 < θ < π and r > 0.
SphericalMetric3 spherical_metric(const ProfileFunction& f, double r, double theta);
SphericalCartan spherical_cartan(const ProfileFunction& f, double r, double theta);
/// R_θφφθ = C_θθθ g^θθ C_θφφ − C_θφφ² / g_φφ. Vanishes on an interval iff C_θφφ does.
double curvature_component(const ProfileFunction& f, double r, double theta);

/// −cos t sin t f″ + (cos²t − sin²t) f′.
double genericity_condition(const ProfileFunction& f, double t);

/// Analytic θ-derivative of C_θφφ at fixed r.
double d_theta_cartan_tpp(const ProfileFunction& f, double r, double theta);

/// Columns ∂r, ∂θ, ∂φ of the chart at φ = 0, i.e. at the point r(cos θ, sin θ, 0).
Mat chart_jacobian(double r, double theta);
Vec chart_point(double r, double theta);

struct EuclideanProfile {
  ProfileFunction f;
  Mat quadratic;  // E(y) = yᵀ Q y
};

/// f = c₁ + c₂cos2t, E = (c₁+c₂)x₁² + (c₁−c₂)(x₂²+…+xₙ²). Throws NotConvex if c₁ ≤ |c₂|.
EuclideanProfile euclidean_profile(double c1, double c2, int n = 3);

/// 2cos2θ f′ − sin2θ f″; vanishes identically for Euclidean profiles.
double euclidean_ode_residual(const ProfileFunction& f, double theta);

struct ValidityReport {
  std::vector<Interval> valid;          // θ-intervals in (0,π) where the metric is positive definite
  std::vector<double> phiphi_roots;     // sign changes of g_φφ located by bisection
  std::vector<double> analytic_roots;   // roots of (c₁−c₂)sinθ + c₃cosθ in (0,π)
  double block_det_over_r2 = 0.0;       // 4(c₁² − c₂² − c₃²)
};

struct ThreeTermProfile {
  ProfileFunction f;
  ValidityReport report;
};

/// f = c₁ + c₂cos2t + c₃sin2t with its positive-definiteness intervals.
/// C_θθθ vanishes and C_θφφ = −c₃r², so the metric is flat only when c₃ = 0.
ThreeTermProfile three_term_profile(double c1, double c2, double c3);

/// Positive-definiteness intervals of the spherical metric for any profile on (0,π),
/// scanned on `samples` points then refined by bisection.
std::vector<Interval> validity_intervals(const ProfileFunction& f, int samples = 2001);

struct ProfileGridRow {
  double theta;
  SphericalMetric3 g;
  SphericalCartan C;
  double R;
  double genericity;
};

/// Uniform θ grid over (lo, hi), skipping points within 1e-6 of 0, π/2 and π.
std::vector<ProfileGridRow> profile_grid(const ProfileFunction& f, double lo, double hi, int samples, double r = 1.0);
void write_profile_grid_csv(std::ostream& os, const std::vector<ProfileGridRow>& rows);

}  // namespace hessiso
