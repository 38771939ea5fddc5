#pragma once

#include "hessiso/jet.hpp"

#include <array>
#include <optional>
#include <variant>
#include <vector>

namespace hessiso {

enum class Period { Pi, TwoPi };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  bool contains_open(double x) const noexcept { return x > lo && x < hi; }
  double width() const noexcept { return hi - lo; }
};

/// f(t) = Σ_m cos[m]·cos(m t) + sin[m]·sin(m t); harmonics are in t itself,
/// so a π-periodic series has zero odd harmonics.
struct TrigSeries {
  std::vector<double> cos;
  std::vector<double> sin;
};

/// Smooth compactly supported bump a·ψ((t−c)/w), ψ(s) = exp(1 − 1/(1−s²)) on |s|<1.
/// It is mirrored to −c so the resulting profile stays even.
struct Bump {
  double center = 0.0;
  double half_width = 0.0;
  double amplitude = 0.0;

  Interval support() const noexcept { return {center - half_width, center + half_width}; }
};

/// Quintic Hermite interpolant through (x, f, f′, f″) on increasing nodes.
struct HermiteTable {
  std::vector<double> x;
  std::vector<double> f;
  std::vector<double> d1;
  std::vector<double> d2;
};

/// Periodic profile f(t) of an SO(k)×SO(n−k)-invariant norm, E = r²f(θ),
/// with evaluators up to the third derivative.
class ProfileFunction {
 public:
  static ProfileFunction trig(TrigSeries series, Period period = Period::TwoPi);
  static ProfileFunction constant(double c) { return trig({{c}, {}}, Period::Pi); }
  /// Trig-series base plus mirrored bumps (2π-periodic).
  static ProfileFunction bumped(TrigSeries base, std::vector<Bump> bumps);
  static ProfileFunction tabulated(HermiteTable table);

  /// (f, f′, f″, f‴) at t. Throws DomainError outside a tabulated range.
  UnivariateDerivs derivs(double t) const;
  double operator()(double t) const { return derivs(t)[0]; }

  Period period() const noexcept { return period_; }
  bool is_tabulated() const noexcept { return std::holds_alternative<HermiteTable>(rep_); }
  /// Finite domain for tabulated profiles; nullopt means all of ℝ.
  std::optional<Interval> domain() const;

  const TrigSeries* series() const noexcept;
  const std::vector<Bump>* bumps() const noexcept;
  const HermiteTable* table() const noexcept;

  /// max |f(t) − f(−t)| on a grid over one period (0 for tabulated).
  double evenness_defect(int samples = 257) const;
  /// min f over a grid of its period or domain.
  double min_value(int samples = 1025) const;

 private:
  struct BumpSeries {
    TrigSeries base;
    std::vector<Bump> bumps;
  };
  using Rep = std::variant<TrigSeries, BumpSeries, HermiteTable>;

  ProfileFunction(Rep rep, Period period) : rep_(std::move(rep)), period_(period) {}

  Rep rep_;
  Period period_;
};

/// (ψ, ψ′, ψ″, ψ‴) of the unit bump at s.
UnivariateDerivs unit_bump(double s);

}  // namespace hessiso
