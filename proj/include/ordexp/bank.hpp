#pragma once

#include "ordexp/estimator.hpp"
#include "ordexp/sigma1.hpp"
#include "ordexp/sigma2.hpp"

namespace ordexp {

/// All estimator rules for one (p1, p2, k, loss), addressable by id.
class EstimatorBank {
 public:
  EstimatorBank(int p1, int p2, const EstimationConfig& cfg)
      : sigma1_(p1, p2, cfg), sigma2_(p1, p2, cfg) {}

  const Sigma1Rules& sigma1() const noexcept { return sigma1_; }
  const Sigma2Rules& sigma2() const noexcept { return sigma2_; }
  const EstimationConfig& config() const noexcept { return sigma1_.config(); }

  Multiplier multiplier(EstimatorId id, const Pivots& pv) const;

  /// Full report for data summarized as `stats`; sizes must match the bank.
  EstimateReport evaluate(EstimatorId id, const SufficientStats& stats) const;

 private:
  Sigma1Rules sigma1_;
  Sigma2Rules sigma2_;
};

}  // namespace ordexp
