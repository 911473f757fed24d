#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: plain series, bisection and adaptive Simpson on std::lgamma.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

inline double p_series(double a, double x) {
  if (x <= 0.0) return 0.0;
  long double term = 1.0L / a;
  long double sum = term;
  for (int n = 1; n < 20000; ++n) {
    term *= static_cast<long double>(x) / (a + n);
    sum += term;
    if (term < sum * 1e-19L) break;
  }
  return static_cast<double>(sum * std::exp(static_cast<long double>(a * std::log(x) - x - std::lgamma(a))));
}

inline double gamma_median(double a) {
  double lo = 0.0;
  double hi = 4.0 * a + 20.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (p_series(a, mid) < 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson with relative tolerance, seeded by a 64-panel pass.
inline double simpson(const std::function<double(double)>& f, double a, double b, double rel = 1e-12) {
  constexpr int panels = 64;
  const double h = (b - a) / panels;
  double rough = 0.0;  // of |f|, so sign changes do not shrink the tolerance
  std::vector<double> fx(2 * panels + 1);
  for (int i = 0; i <= 2 * panels; ++i) fx[i] = f(a + 0.5 * h * i);
  for (int i = 0; i < panels; ++i) {
    rough += h / 6.0 * (std::abs(fx[2 * i]) + 4.0 * std::abs(fx[2 * i + 1]) + std::abs(fx[2 * i + 2]));
  }
  const double tol = std::max(rough * rel, std::numeric_limits<double>::min()) / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + h * i;
    const double piece = h / 6.0 * (fx[2 * i] + 4.0 * fx[2 * i + 1] + fx[2 * i + 2]);
    total += detail::simpson_step(f, lo, lo + h, fx[2 * i], fx[2 * i + 1], fx[2 * i + 2], piece, tol, 40);
  }
  return total;
}

/// ∫₀^∞ f via v = u/(1−u); f must decay fast enough that the mapped integrand vanishes at u=1.
/// Non-finite values far out in the tail (inf·0 from overflow) count as zero.
inline double simpson_half_line(const std::function<double(double)>& f, double rel = 1e-12) {
  return simpson(
      [&](double u) {
        if (u >= 1.0) return 0.0;
        const double one_minus = 1.0 - u;
        const double fv = f(u / one_minus);
        return std::isfinite(fv) ? fv / (one_minus * one_minus) : 0.0;
      },
      0.0, 1.0, rel);
}

/// Bisection in ln c for the increasing function g; bracket [lo, hi].
inline double bisect_log(const std::function<double(double)>& g, double lo, double hi) {
  double a = std::log(lo);
  double b = std::log(hi);
  for (int i = 0; i < 100; ++i) {
    const double m = 0.5 * (a + b);
    (g(std::exp(m)) < 0.0 ? a : b) = m;
  }
  return std::exp(0.5 * (a + b));
}

// ∫₀^∞ v^m ∫₀^t e^{−v(1+u)} u^{p2−2} v^{p1+p2−3} du dv, the two-sided weight
// of the σ₁ boundary condition.
inline double sigma1_double(double m, int p1, int p2, double t, double rel = 1e-11) {
  auto outer = [=](double v) {
    if (v <= 0.0) return 0.0;
    const double base = std::exp((m + p1 + p2 - 3.0) * std::log(v) - v);
    const double inner = simpson(
        [=](double u) { return std::exp(-v * u) * std::pow(u, p2 - 2.0); }, 0.0, t, rel);
    return base * inner;
  };
  return simpson_half_line(outer, rel);
}

// ∫₀^∞ v^e e^{−v} ∫_{vw}^∞ x^{p1−2} e^{−x} dx dv, the printed σ₂ form.
inline double sigma2_double(double e, int p1, double w, double rel = 1e-11) {
  auto outer = [=](double v) {
    if (v <= 0.0) return 0.0;
    const double base = std::exp(e * std::log(v) - v);
    const double start = v * w;
    const double inner = simpson_half_line(
        [=](double y) {
          const double x = start + y;
          return x <= 0.0 ? (p1 == 2 ? 1.0 : 0.0) : std::exp((p1 - 2.0) * std::log(x) - x);
        },
        rel);
    return base * inner;
  };
  return simpson_half_line(outer, rel);
}

}  // namespace oracle
