#pragma once

#include <hessiso/norm.hpp>
#include <hessiso/rng.hpp>
#include <hessiso/tensor.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace hessiso::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double metric = 0.0;     // the worst value observed
  double threshold = 0.0;  // what it was compared against
  std::string detail;
};

/// Randers norm with α = I + small symmetric perturbation (well conditioned) and
/// |β|_α = `beta_norm`·U(0.2, 1).
NormPtr random_randers(Rng& rng, int n, double beta_norm = 0.6);

/// Even, π-periodic profile ½ + Σ c_m cos(2mt) with small random coefficients,
/// rejected until the k = 1 convexity margin is positive.
ProfileFunction random_profile(Rng& rng, int harmonics = 3, double size = 0.06);

/// ½(|y|² + 0.5·√Σyᵢ⁴) in n = 3: absolutely homogeneous and not Euclidean.
NormPtr brickell_norm();

/// Scale for curvature comparisons at y: max(max|g|/|y|², max|C|²·max|g⁻¹|). Both
/// terms are homogeneous of degree −2, like R.
double curvature_scale(const NormSpec& spec, const Vec& y);

/// Random point at least `margin`·|y| away from the x₁ axis (the singular axis of
/// k = 1 profile norms).
Vec random_point_off_axis(Rng& rng, int n, double margin = 0.1);

CriterionResult criterion_legendre_isometry(std::uint64_t seed);
CriterionResult criterion_curvature_formula(std::uint64_t seed);
CriterionResult criterion_euclidean_flatness(std::uint64_t seed);
CriterionResult criterion_three_term_profile();
CriterionResult criterion_branch_quadratic(std::uint64_t seed);
CriterionResult criterion_ode_conformance(std::uint64_t seed);
CriterionResult criterion_classification(std::uint64_t seed);
CriterionResult criterion_flat_regime(std::uint64_t seed);
CriterionResult criterion_two_d(std::uint64_t seed);
CriterionResult criterion_brickell(std::uint64_t seed);
CriterionResult criterion_glued(std::uint64_t seed);

std::vector<CriterionResult> run_all(std::uint64_t seed);

/// "[PASS] 3 Euclidean-profile flatness: metric=... threshold=... (detail)".
std::string format(const CriterionResult& r);

}  // namespace hessiso::acceptance
