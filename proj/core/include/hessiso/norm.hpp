#pragma once

#include "hessiso/expr.hpp"
#include "hessiso/jet.hpp"
#include "hessiso/profile_function.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace hessiso {

struct NormSpec;
using NormPtr = std::shared_ptr<const NormSpec>;

/// E(y) = ½ yᵀAy.
struct EuclideanNorm {
  Mat A;
};

/// F(y) = √(yᵀ α y) + β·y with |β|_α < 1.
struct RandersNorm {
  Mat alpha;
  Vec beta;
};

/// SO(k)×SO(n−k)-invariant norm with E = r² f(θ), where θ is the angle between y
/// and the span of the first k axes (measured from x₁ itself when k = 1).
struct ProfileNorm {
  int k = 1;
  int n = 3;
  ProfileFunction f = ProfileFunction::constant(0.5);
};

/// E given by an expression tree. The validity cone is {y : nᵢ·y > 0 for all i};
/// an empty list means all of ℝⁿ∖{0}.
struct ExpressionNorm {
  int n = 0;
  Expr E = Expr::constant(0.0);
  std::vector<Vec> cone_normals;
};

/// Ê(p) = ½ p·x where ∇E(x) = p, solved by Newton on each evaluation.
struct DualNorm {
  NormPtr base;
};

/// E(y) = E_base(M y).
struct PullbackNorm {
  NormPtr base;
  Mat M;
};

/// A k = 1 profile norm replaced by its dual on the cone θ ∈ [lo, hi]. Only smooth
/// when the base is Euclidean-profile (f ≡ ½) near both cone walls.
struct GluedNorm {
  NormPtr base;
  Interval dual_cone;
};

struct NormSpec {
  using Variant =
      std::variant<EuclideanNorm, RandersNorm, ProfileNorm, ExpressionNorm, DualNorm, PullbackNorm, GluedNorm>;
  Variant v;
  std::string id;

  int dim() const;
};

NormPtr make_euclidean(Mat A, std::string id = "euclidean");
NormPtr make_randers(Mat alpha, Vec beta, std::string id = "randers");
NormPtr make_profile(int k, int n, ProfileFunction f, std::string id = "profile");
NormPtr make_expression(int n, Expr E, std::vector<Vec> cone = {}, std::string id = "expression");
NormPtr make_dual(NormPtr base, std::string id = "dual");
NormPtr make_pullback(NormPtr base, Mat M, std::string id = "pullback");
NormPtr make_glued(NormPtr base, Interval dual_cone, std::string id = "glued");

/// E(y) = ½F(y)².
double eval_E(const NormSpec& spec, const Vec& y);
inline double eval_F(const NormSpec& spec, const Vec& y) { return std::sqrt(2.0 * eval_E(spec, y)); }

/// Value and derivatives of E up to order three.
Jet3 jet3(const NormSpec& spec, const Vec& y);

/// Whether y lies in the spec's validity cone (no throw).
bool in_cone(const NormSpec& spec, const Vec& y);

/// Newton solve of ∇E(x) = p. Throws InversionFailure after 50 iterations.
Vec legendre_inverse(const NormSpec& spec, const Vec& p);

struct ConvexityReport {
  double min_eigenvalue = 0.0;
  std::vector<Vec> failing;
  bool ok() const { return min_eigenvalue > 0.0 && failing.empty(); }
};

ConvexityReport check_strong_convexity(const NormSpec& spec, const std::vector<Vec>& samples);

/// |E(λy) − λ²E(y)| / (λ²E(y)).
double homogeneity_defect(const NormSpec& spec, const Vec& y, double lambda);

/// Largest relative violation of the Euler identities at y.
double euler_defect(const Jet3& j, const Vec& y);

/// Polar angle of y for a profile split k: atan2(|y_{k+1..n}|, …) as described above.
double profile_angle(int k, const Vec& y);

}  // namespace hessiso
