#include "ordexp/kernel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>

#include "ordexp/error.hpp"

namespace ordexp {

namespace {

using numerics::log_gamma;

class ConstantCache {
 public:
  using Key = std::tuple<double, double, std::string>;

  std::optional<double> find(const Key& key) const {
    std::shared_lock lock(mutex_);
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    return std::nullopt;
  }

  void store(const Key& key, double value) {
    std::unique_lock lock(mutex_);
    values_.emplace(key, value);
  }

  void clear() {
    std::unique_lock lock(mutex_);
    values_.clear();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::map<Key, double> values_;
};

ConstantCache& cache() {
  static ConstantCache instance;
  return instance;
}

void check_query(const MultiplierQuery& query) {
  if (!(query.k > 0.0) || !std::isfinite(query.k)) throw DomainError("psi_solve: k must be positive");
  if (!(query.gamma_shape > 0.0) || !std::isfinite(query.gamma_shape)) {
    throw DomainError("psi_solve: gamma shape must be positive");
  }
  require_loss_domain(query.loss, query.gamma_shape, query.k);
}

}  // namespace

std::optional<double> psi_closed_form(const MultiplierQuery& query) {
  check_query(query);
  const double a = query.gamma_shape;
  const double k = query.k;
  switch (query.loss.kind()) {
    case LossKind::quadratic: return std::exp(log_gamma(a) - log_gamma(a + k));
    case LossKind::entropy: return std::exp(log_gamma(a - k) - log_gamma(a));
    case LossKind::symmetric: return std::exp(0.5 * (log_gamma(a - 2.0 * k) - log_gamma(a)));
    case LossKind::linex:
    case LossKind::custom: return std::nullopt;
  }
  return std::nullopt;
}

double solve_weighted_multiplier(const LossSpec& loss, double k,
                                 const std::function<double(double)>& weight, double scale,
                                 const numerics::QuadratureSpec& spec) {
  auto equation = [&](double log_c) {
    const double c = std::exp(log_c);
    auto integrand = [&](double v) {
      const double w = weight(v);
      if (w == 0.0) return 0.0;
      return loss.deriv_unchecked(c * std::pow(v, k)) * w;
    };
    return numerics::integrate_half_line(integrand, spec, scale).value;
  };

  constexpr double kLowest = 1e-10;
  const double log_lo = std::log(kLowest);
  numerics::RootBracket bracket;
  if (loss.kind() == LossKind::linex && loss.alpha() > 0.0) {
    // Only k ≤ 1 gets here (validated); for k = 1 stay below c = 1/α.
    const double ceiling = k < 1.0 ? std::numeric_limits<double>::infinity() : 1.0 / loss.alpha();
    const double f_lo = equation(log_lo);
    double hi = std::min(1.0, 0.75 * ceiling);
    double gap = ceiling - hi;
    for (int i = 0;; ++i) {
      const double f_hi = equation(std::log(hi));
      if ((f_lo > 0.0) != (f_hi > 0.0)) break;
      if (i >= 50) throw BracketError("solve_weighted_multiplier: no sign change for linex loss");
      if (std::isinf(ceiling)) {
        hi *= 4.0;
      } else {
        gap *= 0.25;
        hi = ceiling - gap;
      }
    }
    bracket = {log_lo, std::log(hi), 1e-12};
  } else {
    // Grow the upper end from c = 1; ×4 in c is + ln 4 in ln c.
    bracket = {log_lo, 0.0, 1e-12};
    const double f_lo = equation(log_lo);
    double f_hi = equation(bracket.hi);
    for (int i = 0; (f_lo > 0.0) == (f_hi > 0.0); ++i) {
      if (i >= 50) throw BracketError("solve_weighted_multiplier: no sign change found");
      bracket.lo = bracket.hi;
      bracket.hi += std::log(4.0);
      f_hi = equation(bracket.hi);
    }
  }
  return std::exp(numerics::find_root(equation, bracket));
}

double psi_residual(const MultiplierQuery& query, double c, const numerics::QuadratureSpec& spec) {
  check_query(query);
  const double a = query.gamma_shape;
  const double lg = log_gamma(a);
  auto integrand = [&](double y) {
    const double density = std::exp(numerics::log_gamma_density(y, a, lg));
    if (density == 0.0) return 0.0;
    return query.loss.deriv_unchecked(c * std::pow(y, query.k)) * density;
  };
  return numerics::integrate_half_line(integrand, spec, std::max(1.0, a)).value;
}

double psi_solve_generic(const MultiplierQuery& query, const numerics::QuadratureSpec& spec) {
  check_query(query);
  const double a = query.gamma_shape;
  const double lg = log_gamma(a);
  auto density = [a, lg](double y) { return std::exp(numerics::log_gamma_density(y, a, lg)); };
  return solve_weighted_multiplier(query.loss, query.k, density, std::max(1.0, a), spec);
}

double psi_solve(const MultiplierQuery& query) {
  check_query(query);
  const ConstantCache::Key key{query.gamma_shape, query.k, query.loss.name()};
  if (auto hit = cache().find(key)) return *hit;
  const auto closed = psi_closed_form(query);
  const double value = closed ? *closed : psi_solve_generic(query);
  cache().store(key, value);
  return value;
}

double baee_constant(int p, const EstimationConfig& cfg) {
  cfg.validate();
  if (p < 2) throw ValidationError("baee_constant: sample size must be at least 2");
  return psi_solve({p + cfg.k - 1.0, cfg.k, cfg.loss});
}

double umvue_constant(int p, double k) {
  if (p < 2) throw DomainError("umvue_constant: requires p > 1");
  if (!(k > 0.0)) throw DomainError("umvue_constant: k must be positive");
  return std::exp(log_gamma(p - 1.0) - log_gamma(p + k - 1.0));
}

void clear_constant_cache() { cache().clear(); }

}  // namespace ordexp
