#include "ordexp/sigma2.hpp"

#include <algorithm>
#include <cmath>

#include "ordexp/error.hpp"

namespace ordexp {

namespace {

using numerics::log_gamma;

constexpr numerics::QuadratureSpec kBoundarySpec{1e-10, 1e-300, 200};

// J(s_num) / J(s_den).
double tail_integral_ratio(double s_num, double s_den, int p1, double w) {
  const double num = detail::tail_weighted_gamma_mean(s_num, p1, w);
  const double den = detail::tail_weighted_gamma_mean(s_den, p1, w);
  return std::exp(log_gamma(s_num) - log_gamma(s_den)) * (num / den);
}

EstimateReport make_report(EstimatorId id, Multiplier m, double s, const EstimationConfig& cfg) {
  return {id, m.value, m.value * std::pow(s, cfg.k), m.truncation_active, cfg.loss, cfg.k};
}

}  // namespace

namespace detail {

double tail_weighted_gamma_mean(double s, int p1, double w) {
  if (!(w > 0.0)) throw DomainError("bz_multiplier_sigma2: w must be positive");
  if (!(s > 0.0)) throw DomainError("bz_multiplier_sigma2: gamma shape must be positive");
  const double lg = log_gamma(s);
  const double inner_shape = p1 - 1.0;
  auto integrand = [=](double v) {
    return std::exp(numerics::log_gamma_density(v, s, lg)) *
           numerics::reg_inc_gamma_q(inner_shape, v * w);
  };
  // Q(p1−1, v w) pulls the mass of the Gamma(s) density toward s / (1 + w).
  const double scale = std::max(s / (1.0 + w), 1e-3);
  return numerics::integrate_half_line(integrand, kBoundarySpec, scale).value;
}

}  // namespace detail

Sigma2Rules::Sigma2Rules(int p1, int p2, EstimationConfig cfg) : p1_(p1), p2_(p2), cfg_(std::move(cfg)) {
  if (p1 < 2 || p2 < 2) throw ValidationError("sample sizes p1 and p2 must be at least 2");
  cfg_.validate();
  const double k = cfg_.k;
  d02_ = CheckedConstant::compute([&] { return psi_solve({p2 + k - 1.0, k, cfg_.loss}); });
  beta1_ = CheckedConstant::compute([&] { return psi_solve({p1 + p2 + k - 2.0, k, cfg_.loss}); });
  beta2_ = CheckedConstant::compute([&] { return psi_solve({p2 + k, k, cfg_.loss}); });
  pooled_median_ = numerics::gamma_median(p1 + p2 - 2.0);
  m02_ = std::pow(numerics::gamma_median(p2 - 1.0), -k);
}

Multiplier Sigma2Rules::expansion(double w) const {
  const double d0 = d02();
  const double candidate = beta1() * std::pow(1.0 + w, cfg_.k);
  if (candidate > d0) return {candidate, true};
  return {d0, false};
}

Multiplier Sigma2Rules::shrinkage(double w1) const {
  const double d0 = d02();
  if (!(w1 > 0.0)) return {d0, false};
  const double candidate = beta2() * std::pow(1.0 + w1, cfg_.k);
  if (candidate < d0) return {candidate, true};
  return {d0, false};
}

Multiplier Sigma2Rules::double_shrinkage(double w, double w1) const {
  const Multiplier up = expansion(w);
  const Multiplier down = shrinkage(w1);
  const double value = up.value + down.value - d02();
  if (!(value > 0.0)) {
    throw InternalError("double shrinkage multiplier is not positive");
  }
  return {value, up.truncation_active || down.truncation_active};
}

double Sigma2Rules::bz(double w) const {
  if (!(w > 0.0)) throw DomainError("bz_multiplier_sigma2: w must be positive");
  const double k = cfg_.k;
  const LossSpec& loss = cfg_.loss;
  require_loss_domain(loss, p2_ + k - 1.0, k);
  switch (loss.kind()) {
    case LossKind::quadratic:
      return tail_integral_ratio(p2_ + k - 1.0, p2_ + 2.0 * k - 1.0, p1_, w);
    case LossKind::entropy:
      return tail_integral_ratio(p2_ - 1.0, p2_ + k - 1.0, p1_, w);
    case LossKind::symmetric:
      return std::sqrt(tail_integral_ratio(p2_ - k - 1.0, p2_ + k - 1.0, p1_, w));
    case LossKind::linex:
    case LossKind::custom:
      break;
  }
  const double shape = p2_ + k - 1.0;
  const double lg = log_gamma(shape);
  const double inner_shape = p1_ - 1.0;
  auto weight = [=](double v) {
    return std::exp(numerics::log_gamma_density(v, shape, lg)) *
           numerics::reg_inc_gamma_q(inner_shape, v * w);
  };
  return solve_weighted_multiplier(loss, k, weight, std::max(shape / (1.0 + w), 1e-3),
                                   kBoundarySpec);
}

Multiplier Sigma2Rules::pitman(double w) const {
  const double d0 = d02();
  const double lower = std::pow((1.0 + w) / pooled_median_, cfg_.k);
  if (lower > d0) return {lower, true};
  return {d0, false};
}

EstimateReport delta02(const SufficientStats& stats, const EstimationConfig& cfg) {
  cfg.validate();
  return make_report(EstimatorId::delta02, {baee_constant(stats.p2, cfg), false}, stats.s2, cfg);
}

EstimateReport delta21(const SufficientStats& stats, const EstimationConfig& cfg) {
  const Sigma2Rules rules(stats.p1, stats.p2, cfg);
  return make_report(EstimatorId::delta21, rules.expansion(pivots(stats).w), stats.s2, cfg);
}

EstimateReport delta22(const SufficientStats& stats, const EstimationConfig& cfg) {
  const Sigma2Rules rules(stats.p1, stats.p2, cfg);
  return make_report(EstimatorId::delta22, rules.shrinkage(pivots(stats).w1), stats.s2, cfg);
}

EstimateReport double_shrinkage(const SufficientStats& stats, const EstimationConfig& cfg) {
  const Sigma2Rules rules(stats.p1, stats.p2, cfg);
  const Pivots pv = pivots(stats);
  return make_report(EstimatorId::delta_d, rules.double_shrinkage(pv.w, pv.w1), stats.s2, cfg);
}

double bz_multiplier_sigma2(double w, int p1, int p2, const EstimationConfig& cfg) {
  return Sigma2Rules(p1, p2, cfg).bz(w);
}

EstimateReport bz_sigma2(const SufficientStats& stats, const EstimationConfig& cfg) {
  const Multiplier m{bz_multiplier_sigma2(pivots(stats).w, stats.p1, stats.p2, cfg), false};
  return make_report(EstimatorId::bz2, m, stats.s2, cfg);
}

EstimateReport pitman_estimate_sigma2(const SufficientStats& stats, const EstimationConfig& cfg) {
  const Sigma2Rules rules(stats.p1, stats.p2, cfg);
  return make_report(EstimatorId::pitman2, rules.pitman(pivots(stats).w), stats.s2, cfg);
}

}  // namespace ordexp
