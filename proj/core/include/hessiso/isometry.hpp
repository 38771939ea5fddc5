#pragma once

#include "hessiso/legendre.hpp"
#include "hessiso/norm.hpp"
#include "hessiso/profile_function.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hessiso {

struct ThetaDerivs {
  double theta = 0.0;
  double dtheta = 0.0;
};

/// θ(t) of the linear example with parameters (a,b): atan2(b sin t, a cos t).
double linear_theta(double a, double b, double t);
ThetaDerivs linear_theta_d(double a, double b, double t);

/// θ(t) of the Legendre example: atan2(b·Y, a·X) with X = 2cos t·f − sin t·f′ and
/// Y = 2 sin t·f + cos t·f′. Throws DegenerateDenominator where X vanishes (t = t′).
double legendre_theta(const ProfileFunction& f, double a, double b, double t);
ThetaDerivs legendre_theta_d(const ProfileFunction& f, double a, double b, double t);

/// Right-hand sides of the two branch ODEs for dθ/dt.
double ode1_rhs(double t, double theta);
double ode2_rhs(const ProfileFunction& f, double t, double theta);

/// Unique root of −sin t·f′ + 2cos t·f in (0, π). Throws RootNotBracketed.
double find_t_prime(const ProfileFunction& f);

struct BranchODEs {
  double A = 0.0, B = 0.0, C = 0.0;
  double root_linear = 0.0;    // cosθ sinθ / (cos t sin t)
  double root_legendre = 0.0;  // root shared with the Legendre example
  double discriminant = 0.0;   // B² − 4AC
  double discriminant_closed = 0.0;   // (G / (f cosθ sinθ))², G the genericity value
  double discriminant_printed = 0.0;  // (G / (cosθ sinθ))², kept as a diagnostic
  double genericity = 0.0;

  /// |A s² + B s + C| / (|A| s² + |B| |s| + |C|).
  double residual(double s) const;
};

/// Throws DomainError at t ∈ {π/2, t′} or θ = π/2 (within 1e-6), or t outside (0, π).
BranchODEs branch_quadratic(const ProfileFunction& f, double t, double theta);

/// A smooth θ(t) on a t-band, evaluated with its derivative.
struct ThetaMap {
  std::function<ThetaDerivs(double)> eval;
  Interval band;
};

ThetaMap linear_theta_map(double a, double b, Interval band);
ThetaMap legendre_theta_map(const ProfileFunction& f, double a, double b, Interval band);

/// One sample of an orbit-preserving map in the (t, θ) plane. `h` is the target
/// profile at θ (equivalently the squared radial scale f(t)/h), NaN when unknown.
struct ThetaSample {
  double t = 0.0;
  double theta = 0.0;
  double dtheta = 0.0;
  double h = std::numeric_limits<double>::quiet_NaN();
};

/// Cubic Hermite θ(t) through the samples (sorted by t).
ThetaMap sampled_theta_map(std::vector<ThetaSample> samples);

/// Target profile h(θ) from the rearranged equivariance equation with h(θ₀) = h₀,
/// integrated in t by adaptive Runge–Kutta and tabulated on `nodes` quintic Hermite nodes.
ProfileFunction solve_h(const ProfileFunction& f, const ThetaMap& map, double h0, double theta0, int nodes = 401);

/// Residuals of the equivariance equation (relative) and of the energy identity
/// (relative) at t for a given θ-map and target profile.
double equivariance_residual(const ProfileFunction& f, const ProfileFunction& h, const ThetaMap& map, double t);
double energy_residual(const ProfileFunction& f, const ProfileFunction& h, const ThetaMap& map, double t);

/// Target profiles of the model examples, in closed form.
double linear_example_h(const ProfileFunction& f, double a, double b, double theta);
double legendre_example_h(const ProfileFunction& f, double a, double b, double t);

std::vector<ThetaSample> synth_linear_samples(const ProfileFunction& f, double a, double b, Interval band, int count);
std::vector<ThetaSample> synth_legendre_samples(const ProfileFunction& f, double a, double b, Interval band, int count);

// ---------------------------------------------------------------------------
// Models

struct LinearModel {
  Mat matrix;
  std::optional<std::pair<double, double>> ab;
};

struct LegendreModel {
  NormPtr base;  // a profile norm
  double a = 1.0;
  double b = 1.0;
};

struct NumericModel {
  int k = 1;
  int n = 3;
  ThetaMap theta;
  ProfileFunction f = ProfileFunction::constant(0.5);
  ProfileFunction h = ProfileFunction::constant(0.5);
  Mat rotation;  // orthogonal block action; empty means identity
};

struct IsometryModel;

struct GluedModel {
  // Pieces keyed by the source angle (k = 1 polar angle).
  std::vector<std::pair<Interval, std::shared_ptr<const IsometryModel>>> pieces;
};

struct IsometryModel {
  std::variant<LinearModel, LegendreModel, GluedModel, NumericModel> v;
};

/// diag(a,…,a, b,…,b) with k entries a.
Mat linear_example_matrix(double a, double b, int k, int n);

/// Realise a model as a map with differential. NumericModel uses central differences.
MapFn realize(const IsometryModel& model);

// ---------------------------------------------------------------------------
// Classification

enum class Branch { Linear, Legendre };
enum class Verdict { Linear, Legendre, Glued, Indeterminate };

std::string to_string(Verdict v);
std::string to_string(Branch b);

struct ClassifyOptions {
  double accept = 1e-6;
  double reject = 1e-3;
  double genericity_tol = 1e-8;
  int k = 1;
  int n = 3;
  /// Used to fix the (λa, λb) redundancy when samples carry no h.
  std::optional<double> b_normalization;
};

struct SampleVerdict {
  double t = 0.0;
  double res_linear = NAN;
  double res_legendre = NAN;
  enum class Label { Linear, Legendre, Ambiguous, Degenerate, Unexplained } label = Label::Degenerate;
};

struct Segment {
  Interval t_range;
  Branch branch = Branch::Linear;
  double a = NAN;
  double b = NAN;
  double max_residual = 0.0;
  int count = 0;
};

struct Classification {
  Verdict verdict = Verdict::Indeterminate;
  double a = NAN;
  double b = NAN;
  bool scale_fixed = false;
  std::vector<Segment> segments;
  std::vector<double> boundaries;
  std::vector<SampleVerdict> samples;
  double max_accepted_residual = 0.0;
  double min_rejected_residual = INFINITY;
};

Classification classify(const ProfileFunction& f, const std::vector<ThetaSample>& samples, Interval band,
                        const ClassifyOptions& opts = {});

struct FlatFit {
  LinearModel model;
  double c1 = 0.0, c2 = 0.0;
  double fit_residual = 0.0;
  double ode_residual = 0.0;
};

/// For bands where the genericity value vanishes identically: confirms f is a
/// Euclidean profile there and that θ(t) obeys the merged ODE, then returns the
/// linear model. Throws FitFailure otherwise.
FlatFit classify_flat(const ProfileFunction& f, const std::vector<ThetaSample>& samples, Interval band,
                      const ClassifyOptions& opts = {});

/// One sample of a full map, with optional differential (empty matrix if absent).
struct FullSample {
  Vec source;
  Vec image;
  Mat jacobian;
};

struct Decomposition {
  Mat phi1;                     // orthogonal block action
  bool swapped = false;         // the n = 2k block exchange
  std::vector<ThetaSample> phi2;  // (t, θ, θ′, h) of the ξ-fixing factor
  std::vector<Vec> phi2_images;   // Φ₁⁻¹ applied to each image
  double fit_residual = 0.0;      // orthogonal Procrustes residual of the ξ action
  double reconstruction_residual = 0.0;
};

/// Split an orbit-preserving map into Φ₁ (linear orbit map) ∘ Φ₂ (fixes ξ-coordinates).
/// f is the source profile (needed for the h column). Throws NotOrbitPreserving.
Decomposition decompose(const std::vector<FullSample>& samples, int k, const ProfileFunction& f);

}  // namespace hessiso
