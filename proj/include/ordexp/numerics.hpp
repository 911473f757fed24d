#pragma once

// Special functions, adaptive quadrature and bracketed root finding.
//
// Everything here is a pure function of its arguments. The quadrature and
// root-finding routines are templates so the integrands inline into the
// Monte Carlo hot loop.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ordexp/error.hpp"

namespace ordexp::numerics {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 200;

  /// Throws ValidationError when a field violates its invariant.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  double tol = 1e-12;
};

/// ln Γ(x) for x > 0 (Lanczos, g = 7).
double log_gamma(double x);

/// Regularized lower incomplete gamma P(a, x).
double reg_inc_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 − P(a, x).
double reg_inc_gamma_q(double a, double x);

/// Median of Gamma(a, 1): the m with P(a, m) = 1/2.
double gamma_median(double a);

/// ln of the Gamma(a, 1) density at v > 0.
inline double log_gamma_density(double v, double a, double log_gamma_a) {
  return (a - 1.0) * std::log(v) - v - log_gamma_a;
}

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.000000000000000000000000000000000e+00, 1.488743389816312108848260011297200e-01,
    2.943928627014601981311266031038656e-01, 4.333953941292471907992659431657842e-01,
    5.627571346686046833390000992726941e-01, 6.794095682990244062343273651148736e-01,
    7.808177265864168970637175783450424e-01, 8.650633666889845107320966884234930e-01,
    9.301574913557082260012071800595083e-01, 9.739065285171717200779640120844521e-01,
    9.956571630258080807355272806890028e-01};

inline constexpr std::array<double, 11> kKronrodWeights = {
    1.494455540029169056649364683898212e-01, 1.477391049013384913748415159720680e-01,
    1.427759385770600807970942731387171e-01, 1.347092173114733259280540017717068e-01,
    1.234919762620658510779581098310742e-01, 1.093871588022976418992105903258050e-01,
    9.312545458369760553506546508336634e-02, 7.503967481091995276704314091619001e-02,
    5.475589657435199603138130024458018e-02, 3.255816230796472747881897245938976e-02,
    1.169463886737187427806439606219205e-02};

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7, 9.
inline constexpr std::array<double, 5> kGaussWeights = {
    2.955242247147528701738929946513383e-01, 2.692667193099963550912269215694694e-01,
    2.190863625159820439955349342281632e-01, 1.494513491505805931457763396576973e-01,
    6.667134430868813759356880989333179e-02};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  double magnitude;  // ∫|f| over the segment
};

template <class F>
Segment gauss_kronrod_21(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  std::array<double, 21> fx{};
  fx[0] = f(center);
  for (std::size_t i = 1; i < 11; ++i) {
    const double dx = half * kKronrodNodes[i];
    fx[2 * i - 1] = f(center - dx);
    fx[2 * i] = f(center + dx);
  }

  double kronrod = kKronrodWeights[0] * fx[0];
  double gauss = 0.0;
  double abs_sum = kKronrodWeights[0] * std::abs(fx[0]);
  for (std::size_t i = 1; i < 11; ++i) {
    const double pair = fx[2 * i - 1] + fx[2 * i];
    kronrod += kKronrodWeights[i] * pair;
    abs_sum += kKronrodWeights[i] * (std::abs(fx[2 * i - 1]) + std::abs(fx[2 * i]));
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }

  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[0] * std::abs(fx[0] - mean);
  for (std::size_t i = 1; i < 11; ++i) {
    asc += kKronrodWeights[i] * (std::abs(fx[2 * i - 1] - mean) + std::abs(fx[2 * i] - mean));
  }

  const double result = kronrod * half;
  const double resabs = abs_sum * std::abs(half);
  const double resasc = asc * std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  if (resasc != 0.0 && error != 0.0) {
    error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    error = std::max(50.0 * eps * resabs, error);
  }
  return {lo, hi, result, error, resabs};
}

[[noreturn]] void throw_quadrature_failure(double value, double error, int subdivisions);

}  // namespace detail

/// Adaptive Gauss–Kronrod (21-point) integration of f over [lo, hi].
///
/// Bisects the segment with the largest error estimate until the summed
/// error is below max(abs_tol, rel_tol·|I|), or reaches the rounding floor of
/// a cancelling integrand. Throws NumericError carrying
/// the best estimate if max_subdivisions is exhausted first.
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, const QuadratureSpec& spec = {}) {
  if (!(lo <= hi)) throw DomainError("integrate: lower limit exceeds upper limit");
  if (lo == hi) return {0.0, 0.0, 0};

  std::vector<detail::Segment> segments;
  segments.reserve(16);
  segments.push_back(detail::gauss_kronrod_21(f, lo, hi));
  double total = segments.front().value;
  double error = segments.front().error;
  double magnitude = segments.front().magnitude;

  constexpr double eps = std::numeric_limits<double>::epsilon();
  int splits = 0;
  // Cancelling integrands cannot beat the rounding floor set by ∫|f|.
  while (error > std::max({spec.abs_tol, spec.rel_tol * std::abs(total), 100.0 * eps * magnitude})) {
    auto worst = std::max_element(segments.begin(), segments.end(),
                                  [](const auto& a, const auto& b) { return a.error < b.error; });
    const double mid = 0.5 * (worst->lo + worst->hi);
    // Segment already at the resolution of double; nothing more to gain.
    if (worst->hi - worst->lo <= 4.0 * eps * std::max(1.0, std::abs(mid))) break;
    if (splits >= spec.max_subdivisions) {
      detail::throw_quadrature_failure(total, error, splits);
    }
    const auto left = detail::gauss_kronrod_21(f, worst->lo, mid);
    const auto right = detail::gauss_kronrod_21(f, mid, worst->hi);
    *worst = left;
    segments.push_back(right);
    ++splits;

    total = 0.0;
    error = 0.0;
    magnitude = 0.0;
    for (const auto& s : segments) {
      total += s.value;
      error += s.error;
      magnitude += s.magnitude;
    }
  }
  return {total, error, splits};
}

/// Integral of f over (0, ∞) through v = scale·u/(1 − u), u ∈ (0, 1).
///
/// `scale` should be near where f has its mass (for Gamma-like integrands,
/// the shape); it only affects efficiency.
template <class F>
QuadratureResult integrate_half_line(F&& f, const QuadratureSpec& spec = {}, double scale = 1.0) {
  if (!(scale > 0.0)) throw DomainError("integrate_half_line: scale must be positive");
  auto mapped = [&f, scale](double u) {
    const double one_minus = 1.0 - u;
    if (one_minus <= 0.0) return 0.0;
    const double v = scale * u / one_minus;
    const double jacobian = scale / (one_minus * one_minus);
    const double fv = f(v);
    return fv == 0.0 ? 0.0 : fv * jacobian;
  };
  return integrate(mapped, 0.0, 1.0, spec);
}

/// Brent's method on a sign-changing bracket.
///
/// Converges when the bracket width falls under 2·eps·|x| + tol/2 or f hits
/// zero exactly. Throws BracketError without a sign change and NumericError
/// after max_iterations.
template <class F>
double find_root(F&& f, const RootBracket& bracket, int max_iterations = 200) {
  if (!(bracket.lo < bracket.hi)) throw BracketError("find_root: bracket requires lo < hi");
  if (!(bracket.tol > 0.0)) throw BracketError("find_root: tolerance must be positive");

  double a = bracket.lo;
  double b = bracket.hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::isnan(fa) || std::isnan(fb) || (fa > 0.0) == (fb > 0.0)) {
    throw BracketError("find_root: no sign change across [" + std::to_string(a) + ", " +
                       std::to_string(b) + "]");
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double c = b;
  double fc = fb;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < max_iterations; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * bracket.tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;

    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
    fb = f(b);
  }
  throw NumericError("find_root: no convergence within iteration limit", b, std::abs(c - b));
}

/// Grows hi geometrically (×factor, at most max_expansions times) until f
/// changes sign between lo and hi. Returns the sign-changing bracket.
template <class F>
RootBracket expand_bracket_upward(F&& f, double lo, double hi, double tol = 1e-12,
                                  double factor = 4.0, int max_expansions = 50) {
  if (!(lo < hi)) throw BracketError("expand_bracket_upward: requires lo < hi");
  const double flo = f(lo);
  double fhi = f(hi);
  for (int i = 0; (flo > 0.0) == (fhi > 0.0); ++i) {
    if (i >= max_expansions) {
      throw BracketError("expand_bracket_upward: no sign change below " + std::to_string(hi));
    }
    lo = hi;
    hi *= factor;
    fhi = f(hi);
  }
  return {lo, hi, tol};
}

}  // namespace ordexp::numerics
