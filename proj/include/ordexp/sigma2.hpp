#pragma once

#include "ordexp/estimator.hpp"
#include "ordexp/kernel.hpp"
#include "ordexp/model.hpp"

namespace ordexp {

/// d02 (shape p2+k−1), beta1 (shape p1+p2+k−2) and beta2 (shape p2+k).
struct Sigma2Constants {
  double d02 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;

  /// δ21 is only claimed to dominate δ02 when beta1 < d02.
  bool expansion_dominates() const noexcept { return beta1 < d02; }
};

/// Estimator rules for σ₂ᵏ with the constants for (p1, p2, k, loss)
/// computed once.
class Sigma2Rules {
 public:
  Sigma2Rules(int p1, int p2, EstimationConfig cfg);

  int p1() const noexcept { return p1_; }
  int p2() const noexcept { return p2_; }
  const EstimationConfig& config() const noexcept { return cfg_; }

  double d02() const { return d02_.value(); }
  double beta1() const { return beta1_.value(); }
  double beta2() const { return beta2_.value(); }
  double pooled_median() const noexcept { return pooled_median_; }
  /// Median of Gamma(p2−1) to the power −k.
  double m02() const noexcept { return m02_; }

  const CheckedConstant& checked_d02() const noexcept { return d02_; }
  const CheckedConstant& checked_beta1() const noexcept { return beta1_; }
  const CheckedConstant& checked_beta2() const noexcept { return beta2_; }

  /// Throws DomainError if any of the three constants is unavailable.
  Sigma2Constants constants() const { return {d02(), beta1(), beta2()}; }

  Multiplier baee() const { return {d02(), false}; }
  /// max{d02, beta1 (1+w)^k}.
  Multiplier expansion(double w) const;
  /// min{d02, beta2 (1+w1)^k} when w1 > 0, else d02.
  Multiplier shrinkage(double w1) const;
  /// expansion + shrinkage − d02.
  Multiplier double_shrinkage(double w, double w1) const;

  /// Brewster–Zidek boundary ξ₀₁(w).
  double bz(double w) const;

  /// max{((1+w)/q)^k, d02}: the envelope's upper end is unbounded.
  Multiplier pitman(double w) const;

 private:
  int p1_;
  int p2_;
  EstimationConfig cfg_;
  CheckedConstant d02_;
  CheckedConstant beta1_;
  CheckedConstant beta2_;
  double pooled_median_;
  double m02_;
};

EstimateReport delta02(const SufficientStats& stats, const EstimationConfig& cfg);
EstimateReport delta21(const SufficientStats& stats, const EstimationConfig& cfg);
EstimateReport delta22(const SufficientStats& stats, const EstimationConfig& cfg);
EstimateReport double_shrinkage(const SufficientStats& stats, const EstimationConfig& cfg);

/// The boundary ξ₀₁(w). Quadratic, entropy and symmetric losses use ratios of
/// J(s) = ∫₀^∞ v^{s−1} e^{−v} Q(p1−1, v w) dv; other losses solve
/// ∫ L'(ξ vᵏ) v^{k+p2−2} e^{−v} Q(p1−1, v w) dv = 0.
double bz_multiplier_sigma2(double w, int p1, int p2, const EstimationConfig& cfg);

EstimateReport bz_sigma2(const SufficientStats& stats, const EstimationConfig& cfg);

EstimateReport pitman_estimate_sigma2(const SufficientStats& stats, const EstimationConfig& cfg);

namespace detail {

/// J(s) / Γ(s) = E[Q(p1−1, w V)] for V ~ Gamma(s).
double tail_weighted_gamma_mean(double s, int p1, double w);

}  // namespace detail

}  // namespace ordexp
