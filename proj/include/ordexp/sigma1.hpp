#pragma once

#include "ordexp/estimator.hpp"
#include "ordexp/kernel.hpp"
#include "ordexp/model.hpp"

namespace ordexp {

enum class SteinVariant { d11, d12, d13, d14 };
enum class PitmanBase { baee, pcaee };

/// Multiplier-scale envelope of the conditional median of S₁/σ₁ given T = t
/// over η ∈ (0, 1].
struct PitmanBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Estimator rules for σ₁ᵏ with every constant for (p1, p2, k, loss)
/// computed once. Constants that the loss does not admit are reported
/// lazily: only the estimators that need them throw.
class Sigma1Rules {
 public:
  Sigma1Rules(int p1, int p2, EstimationConfig cfg);

  int p1() const noexcept { return p1_; }
  int p2() const noexcept { return p2_; }
  const EstimationConfig& config() const noexcept { return cfg_; }

  double d01() const { return d01_.value(); }
  /// Solves at shape p1+p2+k−2 (uses T).
  double alpha1() const { return alpha1_.value(); }
  /// Solves at shape p1+p2+k−1 (uses T with one of T1, T2).
  double alpha2() const { return alpha2_.value(); }
  /// The constant of δ13; equal to alpha2 since T1 and T2 enter symmetrically.
  double alpha3() const { return alpha2_.value(); }
  /// Solves at shape p1+p2+k (uses T, T1 and T2).
  double alpha4() const { return alpha4_.value(); }
  /// Median of Gamma(p1+p2−2).
  double pooled_median() const noexcept { return pooled_median_; }
  /// PCAEE multiplier: median of Gamma(p1−1) to the power −k.
  double m01() const noexcept { return m01_; }

  const CheckedConstant& checked_d01() const noexcept { return d01_; }
  const CheckedConstant& checked_alpha1() const noexcept { return alpha1_; }
  const CheckedConstant& checked_alpha2() const noexcept { return alpha2_; }
  const CheckedConstant& checked_alpha4() const noexcept { return alpha4_; }

  Multiplier baee() const { return {d01(), false}; }
  Multiplier pcaee() const { return {m01_, false}; }
  Multiplier stein(SteinVariant variant, const Pivots& pv) const;

  /// Brewster–Zidek boundary φ₀₁(t).
  double bz(double t) const;

  PitmanBounds pitman_bounds(double t) const;
  Multiplier pitman(PitmanBase base, double t) const;

 private:
  int p1_;
  int p2_;
  EstimationConfig cfg_;
  CheckedConstant d01_;
  CheckedConstant alpha1_;
  CheckedConstant alpha2_;
  CheckedConstant alpha4_;
  double pooled_median_;
  double m01_;
};

EstimateReport delta01(const SufficientStats& stats, const EstimationConfig& cfg);

EstimateReport stein_sigma1(SteinVariant variant, const SufficientStats& stats,
                            const EstimationConfig& cfg);

/// The boundary φ₀₁(t) solving ∫ L'(φ vᵏ) vᵏ F₁(t, v) dv = 0.
///
/// Quadratic, entropy and symmetric losses reduce it to ratios of
/// I_a(t) = ∫₀ᵗ u^{p2−2} (1+u)^{−a} du; other losses solve the equivalent
/// one-dimensional equation ∫ L'(φ vᵏ) v^{k+p1−2} e^{−v} P(p2−1, v t) dv = 0.
double bz_multiplier_sigma1(double t, int p1, int p2, const EstimationConfig& cfg);

EstimateReport bz_sigma1(const SufficientStats& stats, const EstimationConfig& cfg);

/// l(t) = q^{−k}, u(t) = ((1+t)/q)^k with q the median of Gamma(p1+p2−2).
PitmanBounds pitman_bounds_sigma1(double t, int p1, int p2, double k);

EstimateReport pitman_estimate_sigma1(PitmanBase base, const SufficientStats& stats,
                                      const EstimationConfig& cfg);

namespace detail {

/// I_a(t) = ∫₀ᵗ u^{p2−2} (1+u)^{−a} du, integrated in x = u/(1+u).
double truncated_beta_integral(double a, int p2, double t);

}  // namespace detail

}  // namespace ordexp
