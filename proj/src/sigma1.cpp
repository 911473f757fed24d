#include "ordexp/sigma1.hpp"

#include <algorithm>
#include <cmath>

#include "ordexp/error.hpp"

namespace ordexp {

namespace {

using numerics::log_gamma;

// BZ integrals shrink like t^{p2−1} as t → 0, so only the relative tolerance
// is meaningful.
constexpr numerics::QuadratureSpec kBoundarySpec{1e-10, 1e-300, 200};

void check_sizes(int p1, int p2) {
  if (p1 < 2 || p2 < 2) throw ValidationError("sample sizes p1 and p2 must be at least 2");
}

// Γ(a_num) I_{a_num}(t) / (Γ(a_den) I_{a_den}(t)).
double beta_integral_ratio(double a_num, double a_den, int p2, double t) {
  const double num = detail::truncated_beta_integral(a_num, p2, t);
  const double den = detail::truncated_beta_integral(a_den, p2, t);
  return std::exp(log_gamma(a_num) - log_gamma(a_den)) * (num / den);
}

EstimateReport make_report(EstimatorId id, Multiplier m, double s, const EstimationConfig& cfg) {
  return {id, m.value, m.value * std::pow(s, cfg.k), m.truncation_active, cfg.loss, cfg.k};
}

}  // namespace

namespace detail {

double truncated_beta_integral(double a, int p2, double t) {
  if (!(t > 0.0)) throw DomainError("truncated_beta_integral: t must be positive");
  const double upper = t / (1.0 + t);
  const double left_power = p2 - 2.0;
  const double right_power = a - p2;
  auto integrand = [=](double x) {
    return std::exp(left_power * std::log(x) + right_power * std::log1p(-x));
  };
  return numerics::integrate(integrand, 0.0, upper, kBoundarySpec).value;
}

}  // namespace detail

Sigma1Rules::Sigma1Rules(int p1, int p2, EstimationConfig cfg) : p1_(p1), p2_(p2), cfg_(std::move(cfg)) {
  check_sizes(p1, p2);
  cfg_.validate();
  const double k = cfg_.k;
  const double pooled = p1 + p2 - 2.0;
  d01_ = CheckedConstant::compute([&] { return psi_solve({p1 + k - 1.0, k, cfg_.loss}); });
  alpha1_ = CheckedConstant::compute([&] { return psi_solve({pooled + k, k, cfg_.loss}); });
  alpha2_ = CheckedConstant::compute([&] { return psi_solve({pooled + k + 1.0, k, cfg_.loss}); });
  alpha4_ = CheckedConstant::compute([&] { return psi_solve({pooled + k + 2.0, k, cfg_.loss}); });
  pooled_median_ = numerics::gamma_median(pooled);
  m01_ = std::pow(numerics::gamma_median(p1 - 1.0), -k);
}

Multiplier Sigma1Rules::stein(SteinVariant variant, const Pivots& pv) const {
  const double d0 = d01();
  const double k = cfg_.k;
  double candidate = 0.0;
  switch (variant) {
    case SteinVariant::d11:
      candidate = alpha1() * std::pow(1.0 + pv.t, k);
      break;
    case SteinVariant::d12:
      if (!(pv.t1 > 0.0)) return {d0, false};
      candidate = alpha2() * std::pow(1.0 + pv.t + p1_ * pv.t1, k);
      break;
    case SteinVariant::d13:
      if (!(pv.t2 > 0.0)) return {d0, false};
      candidate = alpha3() * std::pow(1.0 + pv.t + p2_ * pv.t2, k);
      break;
    case SteinVariant::d14:
      if (!(pv.t1 > 0.0) || !(pv.t2 > 0.0)) return {d0, false};
      candidate = alpha4() * std::pow(1.0 + pv.t + p1_ * pv.t1 + p2_ * pv.t2, k);
      break;
  }
  if (candidate < d0) return {candidate, true};
  return {d0, false};
}

double Sigma1Rules::bz(double t) const {
  if (!(t > 0.0)) throw DomainError("bz_multiplier_sigma1: t must be positive");
  const double k = cfg_.k;
  const double base = p1_ + p2_ - 2.0;
  const LossSpec& loss = cfg_.loss;
  require_loss_domain(loss, p1_ + k - 1.0, k);
  switch (loss.kind()) {
    case LossKind::quadratic:
      return beta_integral_ratio(base + k, base + 2.0 * k, p2_, t);
    case LossKind::entropy:
      return beta_integral_ratio(base, base + k, p2_, t);
    case LossKind::symmetric:
      require_loss_domain(loss, base + k, k);
      return std::sqrt(beta_integral_ratio(base - k, base + k, p2_, t));
    case LossKind::linex:
    case LossKind::custom:
      break;
  }
  // The weight is the Gamma(p1+k−1) density times P(p2−1, v t).
  const double shape = p1_ + k - 1.0;
  const double lg = log_gamma(shape);
  const double inner_shape = p2_ - 1.0;
  auto weight = [=](double v) {
    return std::exp(numerics::log_gamma_density(v, shape, lg)) *
           numerics::reg_inc_gamma_p(inner_shape, v * t);
  };
  return solve_weighted_multiplier(loss, k, weight, shape, kBoundarySpec);
}

PitmanBounds Sigma1Rules::pitman_bounds(double t) const {
  if (!(t > 0.0)) throw DomainError("pitman_bounds_sigma1: t must be positive");
  const double k = cfg_.k;
  return {std::pow(pooled_median_, -k), std::pow((1.0 + t) / pooled_median_, k)};
}

Multiplier Sigma1Rules::pitman(PitmanBase base, double t) const {
  const PitmanBounds bounds = pitman_bounds(t);
  if (base == PitmanBase::pcaee) {
    if (bounds.upper < m01_) return {bounds.upper, true};
    return {m01_, false};
  }
  const double d0 = d01();
  const double clamped = std::max(bounds.lower, std::min(d0, bounds.upper));
  return {clamped, clamped != d0};
}

EstimateReport delta01(const SufficientStats& stats, const EstimationConfig& cfg) {
  cfg.validate();
  return make_report(EstimatorId::delta01, {baee_constant(stats.p1, cfg), false}, stats.s1, cfg);
}

EstimateReport stein_sigma1(SteinVariant variant, const SufficientStats& stats,
                            const EstimationConfig& cfg) {
  const Sigma1Rules rules(stats.p1, stats.p2, cfg);
  constexpr EstimatorId ids[] = {EstimatorId::delta11, EstimatorId::delta12, EstimatorId::delta13,
                                 EstimatorId::delta14};
  return make_report(ids[static_cast<int>(variant)], rules.stein(variant, pivots(stats)),
                     stats.s1, cfg);
}

double bz_multiplier_sigma1(double t, int p1, int p2, const EstimationConfig& cfg) {
  return Sigma1Rules(p1, p2, cfg).bz(t);
}

EstimateReport bz_sigma1(const SufficientStats& stats, const EstimationConfig& cfg) {
  const Multiplier m{bz_multiplier_sigma1(pivots(stats).t, stats.p1, stats.p2, cfg), false};
  return make_report(EstimatorId::bz1, m, stats.s1, cfg);
}

PitmanBounds pitman_bounds_sigma1(double t, int p1, int p2, double k) {
  check_sizes(p1, p2);
  if (!(k > 0.0)) throw ValidationError("power k must be positive");
  if (!(t > 0.0)) throw DomainError("pitman_bounds_sigma1: t must be positive");
  const double q = numerics::gamma_median(p1 + p2 - 2.0);
  return {std::pow(q, -k), std::pow((1.0 + t) / q, k)};
}

EstimateReport pitman_estimate_sigma1(PitmanBase base, const SufficientStats& stats,
                                      const EstimationConfig& cfg) {
  const Sigma1Rules rules(stats.p1, stats.p2, cfg);
  const EstimatorId id = base == PitmanBase::baee ? EstimatorId::pitman1 : EstimatorId::pitman1_pcaee;
  return make_report(id, rules.pitman(base, pivots(stats).t), stats.s1, cfg);
}

}  // namespace ordexp
