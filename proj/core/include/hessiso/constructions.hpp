#pragma once

#include "hessiso/legendre.hpp"
#include "hessiso/norm.hpp"

#include <optional>
#include <vector>

namespace hessiso {

struct GlueOptions {
  /// Polar-angle intervals (k = 1, n = 3, angle from x₁) holding the two deformations.
  /// A missing interval means no deformation there.
  std::optional<Interval> u1;
  std::optional<Interval> u2;
  double epsilon = 0.1;          // initial bump amplitude, halved until convex
  double support_fraction = 0.8; // bump half-width as a fraction of the interval half-width
  double min_separation = 0.1;   // Euclidean gap required between the two supports
  int max_halvings = 30;
  int n = 3;
};

struct GluedConstruction {
  NormPtr f1;              // ½ + ε·bumps, k = 1 profile norm
  NormPtr f2;              // f1 replaced by its dual on identity-free cone
  MapFn map;               // identity on C(U₁), Legendre map of f1 elsewhere
  std::vector<Bump> bumps;
  std::optional<Interval> identity_cone;  // support of the U₁ bump widened by half the gap
  std::optional<Interval> dual_cone;      // same for U₂
  double epsilon = 0.0;
  int halvings = 0;
};

/// Throws OverlappingSupports if U1 and U2 intersect, if the bump supports are closer than min_separation
/// (or leave (0, π)), ConvexityLost if max_halvings reductions do not restore convexity.
GluedConstruction build_glued(const GlueOptions& opts);

/// 2f(2f + f″) − f′² and 2 sin t·f + cos t·f′ for a k = 1 profile, the two quantities
/// whose positivity on (0, π) is strong convexity (together with f > 0).
double profile_convexity_margin(const ProfileFunction& f, double t);

/// Largest jump of the Hessian of glued's f2 across the dual-cone walls, measured
/// between points δ on either side, relative to |g|.
double glued_boundary_jump(const GluedConstruction& glued, double delta = 1e-7);

struct PolarChart2D {
  NormPtr norm;
  double length = 0.0;               // g-length of the indicatrix
  double refinement_delta = 0.0;     // |L(61-point rule) − L(31-point rule)|
  std::vector<double> angle;         // Euclidean polar angles in [0, 2π]
  std::vector<double> arclength;     // cumulative g-arclength at `angle`, monotone

  /// Indicatrix point u/F(u), u = (cos φ, sin φ).
  Vec indicatrix(double phi) const;
  /// √g(ẏ, ẏ) along the indicatrix parametrised by φ.
  double speed(double phi) const;
  /// g-arclength from φ = 0 to φ ∈ [0, 2π].
  double arclength_at(double phi) const;
  /// Inverse of arclength_at; s ∈ [0, L].
  double angle_at(double s) const;
  /// d/dφ of the indicatrix point.
  Vec indicatrix_tangent(double phi) const;

  double tolerance = 1e-10;
};

/// Throws QuadratureFailure when the adaptive rule misses the tolerance.
PolarChart2D polar_chart_2d(NormPtr norm, double tolerance = 1e-10, int table_size = 257);

/// Max entry of |g − (dF⊗dF + F² dθ⊗dθ)| / max|g| at y, θ the arclength coordinate.
double polar_chart_metric_defect(const PolarChart2D& chart, const Vec& y);

struct TwoDIsometry {
  MapFn map;
  double length_a = 0.0;
  double length_b = 0.0;
};

/// Matches generalised polar coordinates (F, θ) of A to those of B with the ray
/// φ = 0 as common origin. Throws LengthMismatch if the lengths differ by 1e-8 or more.
TwoDIsometry two_d_isometry(NormPtr a, NormPtr b, double tolerance = 1e-10);

}  // namespace hessiso
