#include "ordexp/numerics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ordexp {

const char* to_string(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::domain: return "domain";
    case ErrorCategory::validation: return "validation";
    case ErrorCategory::degenerate: return "degenerate";
    case ErrorCategory::numeric: return "numeric";
    case ErrorCategory::bracket: return "bracket";
    case ErrorCategory::io: return "io";
    case ErrorCategory::internal: return "internal";
  }
  return "unknown";
}

}  // namespace ordexp

namespace ordexp::numerics {

namespace {

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
constexpr double kLanczosG = 7.0;

constexpr double kTiny = 1e-300;
constexpr double kSeriesEps = 1e-16;
constexpr int kMaxTerms = 100000;

// P(a, x) by its power series; converges quickly for x < a + 1.
double gamma_p_series(double a, double x, double log_prefix) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < kMaxTerms; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kSeriesEps) return sum * std::exp(log_prefix);
  }
  throw NumericError("reg_inc_gamma: series did not converge", sum * std::exp(log_prefix), term);
}

// Q(a, x) by the modified Lentz continued fraction; used for x ≥ a + 1.
double gamma_q_fraction(double a, double x, double log_prefix) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kSeriesEps) return std::exp(log_prefix) * h;
  }
  throw NumericError("reg_inc_gamma: continued fraction did not converge",
                     std::exp(log_prefix) * h, 0.0);
}

void check_inc_gamma_domain(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("reg_inc_gamma: shape must be positive");
  if (!(x >= 0.0)) throw DomainError("reg_inc_gamma: argument must be nonnegative");
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0)) throw ValidationError("QuadratureSpec: rel_tol must be positive");
  if (!(abs_tol > 0.0)) throw ValidationError("QuadratureSpec: abs_tol must be positive");
  if (max_subdivisions < 10) throw ValidationError("QuadratureSpec: max_subdivisions must be >= 10");
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
  if (std::isinf(x)) return x;
  if (x < 0.5) {
    // Reflection: Γ(x)Γ(1−x) = π / sin(πx).
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double series = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) series += kLanczos[i] / (z + static_cast<double>(i));
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

double reg_inc_gamma_p(double a, double x) {
  check_inc_gamma_domain(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double log_prefix = a * std::log(x) - x - log_gamma(a);
  if (x < a + 1.0) return std::min(1.0, gamma_p_series(a, x, log_prefix));
  return std::max(0.0, 1.0 - gamma_q_fraction(a, x, log_prefix));
}

double reg_inc_gamma_q(double a, double x) {
  check_inc_gamma_domain(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double log_prefix = a * std::log(x) - x - log_gamma(a);
  if (x < a + 1.0) return std::max(0.0, 1.0 - gamma_p_series(a, x, log_prefix));
  return std::min(1.0, gamma_q_fraction(a, x, log_prefix));
}

double gamma_median(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("gamma_median: shape must be positive");
  auto excess = [a](double m) { return reg_inc_gamma_p(a, m) - 0.5; };
  double lo = std::max(1e-8, a / 3.0);
  double hi = 3.0 * a + 10.0;
  // Very small shapes put the median below the default lower end.
  while (excess(lo) > 0.0) {
    lo *= 1e-3;
    if (lo < 1e-300) throw BracketError("gamma_median: median below representable range");
  }
  return find_root(excess, {lo, hi, 1e-13});
}

namespace detail {

void throw_quadrature_failure(double value, double error, int subdivisions) {
  std::ostringstream msg;
  msg << "integrate: no convergence after " << subdivisions << " subdivisions (estimate " << value
      << ", error bound " << error << ")";
  throw NumericError(msg.str(), value, error);
}

}  // namespace detail

}  // namespace ordexp::numerics
