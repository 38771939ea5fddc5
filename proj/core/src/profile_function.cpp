#include "hessiso/profile_function.hpp"

#include "hessiso/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hessiso {
namespace {

UnivariateDerivs eval_series(const TrigSeries& s, double t) {
  UnivariateDerivs d{0, 0, 0, 0};
  for (std::size_t m = 0; m < s.cos.size(); ++m) {
    const double w = static_cast<double>(m);
    const double c = std::cos(w * t), sn = std::sin(w * t);
    const double a = s.cos[m];
    d[0] += a * c;
    d[1] -= a * w * sn;
    d[2] -= a * w * w * c;
    d[3] += a * w * w * w * sn;
  }
  for (std::size_t m = 0; m < s.sin.size(); ++m) {
    const double w = static_cast<double>(m);
    const double c = std::cos(w * t), sn = std::sin(w * t);
    const double b = s.sin[m];
    d[0] += b * sn;
    d[1] += b * w * c;
    d[2] -= b * w * w * sn;
    d[3] -= b * w * w * w * c;
  }
  return d;
}

// Quintic Hermite basis on [0,1] as monomial coefficients c0..c5.
// Order: value@0, d1@0, d2@0, value@1, d1@1, d2@1.
constexpr std::array<std::array<double, 6>, 6> kHermite{{
    {1, 0, 0, -10, 15, -6},
    {0, 1, 0, -6, 8, -3},
    {0, 0, 0.5, -1.5, 1.5, -0.5},
    {0, 0, 0, 10, -15, 6},
    {0, 0, 0, -4, 7, -3},
    {0, 0, 0, 0.5, -1, 0.5},
}};

UnivariateDerivs poly_derivs(const std::array<double, 6>& c, double s) {
  UnivariateDerivs d{0, 0, 0, 0};
  for (int p = 0; p <= 5; ++p) {
    const double cp = c[p];
    if (cp == 0.0) continue;
    d[0] += cp * std::pow(s, p);
    if (p >= 1) d[1] += cp * p * std::pow(s, p - 1);
    if (p >= 2) d[2] += cp * p * (p - 1) * std::pow(s, p - 2);
    if (p >= 3) d[3] += cp * p * (p - 1) * (p - 2) * std::pow(s, p - 3);
  }
  return d;
}

UnivariateDerivs eval_table(const HermiteTable& tab, double t) {
  const auto& x = tab.x;
  const double tol = 1e-12 * std::max(1.0, std::abs(x.back() - x.front()));
  if (t < x.front() - tol || t > x.back() + tol)
    throw Error(ErrorCode::DomainError, "profile evaluated outside its tabulated range");
  t = std::clamp(t, x.front(), x.back());
  auto it = std::upper_bound(x.begin(), x.end(), t);
  std::size_t j = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
  j = std::min(j, x.size() - 2);
  const double h = x[j + 1] - x[j];
  const double s = (t - x[j]) / h;
  const std::array<double, 6> w{tab.f[j], h * tab.d1[j], h * h * tab.d2[j],
                                tab.f[j + 1], h * tab.d1[j + 1], h * h * tab.d2[j + 1]};
  UnivariateDerivs d{0, 0, 0, 0};
  for (int b = 0; b < 6; ++b) {
    const auto pb = poly_derivs(kHermite[b], s);
    for (int o = 0; o < 4; ++o) d[o] += w[b] * pb[o];
  }
  d[1] /= h;
  d[2] /= h * h;
  d[3] /= h * h * h;
  return d;
}

}  // namespace

UnivariateDerivs unit_bump(double s) {
  if (std::abs(s) >= 1.0) return {0, 0, 0, 0};
  const Jet3 x = Jet3::variable(1, 0, s);
  const Jet3 q = (x * x) * -1.0 + 1.0;
  const Jet3 psi = exp(reciprocal(q) * -1.0 + 1.0);
  return {psi.value, psi.grad(0), psi.hess(0, 0), psi.third(0, 0, 0)};
}

ProfileFunction ProfileFunction::trig(TrigSeries series, Period period) {
  if (period == Period::Pi) {
    auto odd_nonzero = [](const std::vector<double>& c) {
      for (std::size_t m = 1; m < c.size(); m += 2)
        if (c[m] != 0.0) return true;
      return false;
    };
    if (odd_nonzero(series.cos) || odd_nonzero(series.sin))
      throw Error(ErrorCode::InvalidSpec, "π-periodic profile has odd harmonics");
  }
  return ProfileFunction(std::move(series), period);
}

ProfileFunction ProfileFunction::bumped(TrigSeries base, std::vector<Bump> bumps) {
  for (const auto& b : bumps) {
    if (!(b.half_width > 0.0)) throw Error(ErrorCode::InvalidSpec, "bump half-width must be positive");
    const auto s = b.support();
    if (s.lo <= 0.0 || s.hi >= std::numbers::pi)
      throw Error(ErrorCode::InvalidSpec, "bump support must lie inside (0, π)");
  }
  return ProfileFunction(BumpSeries{std::move(base), std::move(bumps)}, Period::TwoPi);
}

ProfileFunction ProfileFunction::tabulated(HermiteTable table) {
  const std::size_t n = table.x.size();
  if (n < 2 || table.f.size() != n || table.d1.size() != n || table.d2.size() != n)
    throw Error(ErrorCode::InvalidSpec, "tabulated profile needs ≥2 nodes with matching columns");
  for (std::size_t i = 1; i < n; ++i)
    if (!(table.x[i] > table.x[i - 1])) throw Error(ErrorCode::InvalidSpec, "tabulated nodes must increase");
  return ProfileFunction(std::move(table), Period::TwoPi);
}

UnivariateDerivs ProfileFunction::derivs(double t) const {
  if (const auto* s = std::get_if<TrigSeries>(&rep_)) return eval_series(*s, t);
  if (const auto* tab = std::get_if<HermiteTable>(&rep_)) return eval_table(*tab, t);

  const auto& bs = std::get<BumpSeries>(rep_);
  UnivariateDerivs d = eval_series(bs.base, t);
  const double tr = std::remainder(t, 2.0 * std::numbers::pi);
  for (const auto& b : bs.bumps) {
    const double w = b.half_width;
    for (double c : {b.center, -b.center}) {
      const auto psi = unit_bump((tr - c) / w);
      d[0] += b.amplitude * psi[0];
      d[1] += b.amplitude * psi[1] / w;
      d[2] += b.amplitude * psi[2] / (w * w);
      d[3] += b.amplitude * psi[3] / (w * w * w);
    }
  }
  return d;
}

std::optional<Interval> ProfileFunction::domain() const {
  if (const auto* tab = std::get_if<HermiteTable>(&rep_)) return Interval{tab->x.front(), tab->x.back()};
  return std::nullopt;
}

const TrigSeries* ProfileFunction::series() const noexcept {
  if (const auto* s = std::get_if<TrigSeries>(&rep_)) return s;
  if (const auto* b = std::get_if<BumpSeries>(&rep_)) return &b->base;
  return nullptr;
}

const std::vector<Bump>* ProfileFunction::bumps() const noexcept {
  if (const auto* b = std::get_if<BumpSeries>(&rep_)) return &b->bumps;
  return nullptr;
}

const HermiteTable* ProfileFunction::table() const noexcept { return std::get_if<HermiteTable>(&rep_); }

double ProfileFunction::evenness_defect(int samples) const {
  if (is_tabulated()) return 0.0;
  const double P = period_ == Period::Pi ? std::numbers::pi : 2.0 * std::numbers::pi;
  double m = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = P * i / (samples - 1);
    m = std::max(m, std::abs((*this)(t) - (*this)(-t)));
  }
  return m;
}

double ProfileFunction::min_value(int samples) const {
  double lo = 0.0, hi = 2.0 * std::numbers::pi;
  if (auto d = domain()) {
    lo = d->lo;
    hi = d->hi;
  }
  double m = INFINITY;
  for (int i = 0; i < samples; ++i) m = std::min(m, (*this)(lo + (hi - lo) * i / (samples - 1)));
  return m;
}

}  // namespace hessiso
